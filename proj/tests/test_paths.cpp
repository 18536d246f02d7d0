#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include <doctest.h>

#include "turaco/desugar.hpp"
#include "turaco/error.hpp"
#include "turaco/parser.hpp"
#include "turaco/rng.hpp"
#include "turaco/sample.hpp"
#include "turaco/trace.hpp"

using namespace turaco;

namespace {

bool branch_free(const Stmt& s) {
  switch (s.kind) {
    case StmtKind::If:
      return false;
    case StmtKind::Seq:
      return branch_free(*s.first) && branch_free(*s.second);
    default:
      return true;
  }
}

std::vector<std::string> path_ids(const std::vector<Trace>& traces) {
  std::vector<std::string> out;
  for (const auto& t : traces) out.push_back(t.path);
  return out;
}

}  // namespace

TEST_CASE("every branch combination becomes one straight-line trace") {
  Program p = parse_file(TURACO_SOURCE_DIR "/benchmarks/luminance.turaco");
  auto traces = collect_traces(p);
  CHECK(path_ids(traces) == std::vector<std::string>{"ll", "lr", "rl", "rr"});
  for (const auto& t : traces) {
    CHECK(branch_free(*t.body));
    CHECK(is_core(trace_program(p, t)));
  }
}

TEST_CASE("nested branches produce variable-length labels in sorted order") {
  Program p = parse_file(TURACO_SOURCE_DIR "/benchmarks/camera.turaco");
  auto ids = path_ids(collect_traces(p));
  CHECK(ids == std::vector<std::string>{"ll", "lrl", "lrr", "rl", "rrl", "rrr"});
  CHECK(std::is_sorted(ids.begin(), ids.end()));

  Program q = parse_file(TURACO_SOURCE_DIR "/benchmarks/huber.turaco");
  CHECK(path_ids(collect_traces(q)) == std::vector<std::string>{"ll", "lr", "r"});
}

TEST_CASE("a straight-line program has exactly one empty-path trace") {
  Program p = parse("fun (x) { y = x * x; return y; }");
  auto traces = collect_traces(p);
  REQUIRE(traces.size() == 1);
  CHECK(traces[0].path.empty());
}

TEST_CASE("the trace of the taken path computes exactly the program's outputs") {
  for (const char* file : {TURACO_SOURCE_DIR "/benchmarks/luminance.turaco",
                           TURACO_SOURCE_DIR "/benchmarks/huber.turaco",
                           TURACO_SOURCE_DIR "/benchmarks/camera.turaco"}) {
    CAPTURE(file);
    Program p = parse_file(file);
    std::string config(file);
    config.replace(config.size() - 7, 7, ".json");
    SampleConfig c = load_config(config);

    std::map<std::string, Trace> by_path;
    for (auto& t : collect_traces(p)) by_path.emplace(t.path, std::move(t));

    Rng rng(31);
    for (int i = 0; i < 500; ++i) {
      auto args = values_from_flat(p, draw_flat(c, rng));
      RunResult r = run(p, args);
      REQUIRE(by_path.count(r.path));
      std::vector<Real> inlined = run_trace(p, by_path.at(r.path), args);
      REQUIRE(inlined.size() == r.outputs.size());
      for (std::size_t k = 0; k < inlined.size(); ++k) CHECK(inlined[k] == r.outputs[k]);
    }
  }
}

TEST_CASE("a committed trace runs its branches whether or not the input picks them") {
  Program p = parse_file(TURACO_SOURCE_DIR "/benchmarks/luminance.turaco");
  std::map<std::string, Trace> by_path;
  for (auto& t : collect_traces(p)) by_path.emplace(t.path, std::move(t));

  // sunPosition = 0.5 really takes rr; the ll trace still computes the
  // night-time formula on it.
  std::vector<Value> args = {Value::num(0.5), Value::num(0.3)};
  CHECK(run(p, args).path == "rr");
  std::vector<Real> forced = run_trace(p, by_path.at("ll"), args);
  CHECK(forced[0] == 0.0 + 0.3 * 0.1);
}

TEST_CASE("trace programs stand alone") {
  Program p = parse_file(TURACO_SOURCE_DIR "/benchmarks/huber.turaco");
  for (const auto& t : collect_traces(p)) {
    Program q = trace_program(p, t);
    CHECK(q.inputs.size() == p.inputs.size());
    RunResult r = run(q, {Value::num(0.3), Value::num(0.6)});
    CHECK(r.path.empty());
    CHECK(r.outputs.size() == 1);
  }
}

TEST_CASE("the path census is capped against explosion") {
  std::string src = "fun (x) { ";
  for (int i = 0; i < 13; ++i) src += "if (x > 0) { skip; } else { skip; } ";
  src += "return x; }";
  Program p = parse(src);
  CHECK_THROWS_AS(collect_traces(p), AnalysisError);   // 8192 paths > default 4096
  CHECK(collect_traces(p, 8192).size() == 8192);
  try {
    collect_traces(p);
    FAIL("expected the cap to trip");
  } catch (const AnalysisError& e) {
    CHECK(std::string(e.what()).find("path explosion") != std::string::npos);
  }
}
