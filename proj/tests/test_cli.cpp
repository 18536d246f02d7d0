#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "turaco/alloc.hpp"
#include "turaco/cli.hpp"
#include "turaco/desugar.hpp"
#include "turaco/error.hpp"
#include "turaco/interp.hpp"
#include "turaco/mlp.hpp"
#include "turaco/parser.hpp"
#include "turaco/pretty.hpp"
#include "turaco/sample.hpp"
#include "turaco/surrogate.hpp"

using namespace turaco;
namespace fs = std::filesystem;

namespace {

const char* kLumSrc = TURACO_SOURCE_DIR "/benchmarks/luminance.turaco";
const char* kLumCfg = TURACO_SOURCE_DIR "/benchmarks/luminance.json";

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& file) {
  std::ifstream f(file, std::ios::binary);
  REQUIRE(f);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

// Scratch directory per test run; cleaned up by the fixture's destructor.
struct TempDir {
  fs::path path;
  TempDir() : path(fs::path("cli_scratch") / std::to_string(reinterpret_cast<std::uintptr_t>(this))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path.parent_path()); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("budget specs") {
  CHECK(parse_budgets("10..1000:x10") ==
        std::vector<long long>{10, 17, 28, 46, 77, 129, 215, 359, 599, 1000});
  CHECK(parse_budgets("100,200,50") == std::vector<long long>{100, 200, 50});
  CHECK(parse_budgets("7") == std::vector<long long>{7});
  CHECK(parse_budgets("5..5:x3") == std::vector<long long>{5});
  CHECK(parse_budgets("1..2:x5") == std::vector<long long>{1, 2});  // rounding collapses steps

  CHECK_THROWS_AS(parse_budgets("abc"), DataError);
  CHECK_THROWS_AS(parse_budgets(""), DataError);
  CHECK_THROWS_AS(parse_budgets("5..2:x3"), DataError);
  CHECK_THROWS_AS(parse_budgets("0..10:x2"), DataError);
  CHECK_THROWS_AS(parse_budgets("10..100:x0"), DataError);
  CHECK_THROWS_AS(parse_budgets("10..100"), DataError);
  CHECK_THROWS_AS(parse_budgets("10..100:xfoo"), DataError);
  CHECK_THROWS_AS(parse_budgets("1,,2"), DataError);
  CHECK_THROWS_AS(parse_budgets("3,-4"), DataError);
}

TEST_CASE("parse command pretty-prints, optionally desugared") {
  TempDir tmp;
  std::string prog = tmp.file("p.turaco");
  std::ofstream(prog) << "fun (x) { y = x - 2 / 4; return y; }\n";

  CliResult r = cli({"parse", prog});
  CHECK(r.code == 0);
  CHECK(r.out == pretty_print(parse_file(prog)));
  CHECK(r.out.find('-') != std::string::npos);

  CliResult c = cli({"parse", prog, "--core"});
  CHECK(c.code == 0);
  CHECK(c.out == pretty_print(desugar(parse_file(prog))));
  CHECK(c.out.find('/') == std::string::npos);
}

TEST_CASE("run command reports outputs and the taken path") {
  CliResult r = cli({"run", kLumSrc, "--inputs", "0.5,0.3"});
  CHECK(r.code == 0);
  Program p = parse_file(kLumSrc);
  RunResult want = run(p, values_from_flat(p, {0.5, 0.3}));
  std::string expect;
  for (Real v : want.outputs) expect += "output: " + format_real(v) + "\n";
  expect += "path: " + want.path + "\n";
  CHECK(r.out == expect);
  CHECK(want.path == "rr");
}

TEST_CASE("complexity command prints the per-path table") {
  CliResult r = cli({"complexity", kLumSrc});
  CHECK(r.code == 0);
  CHECK(r.out == "path,complexity\nll,0.01\nlr,4\nrl,1.21\nrr,9\n");
}

TEST_CASE("paths command joins complexities with measured frequencies") {
  CliResult r = cli({"paths", kLumSrc, "--config", kLumCfg, "--trials", "5000", "--seed", "9"});
  CHECK(r.code == 0);
  auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "path,complexity,frequency");

  Program p = parse_file(kLumSrc);
  auto freqs = estimate_frequencies(p, load_config(kLumCfg), 5000, 9).frequencies();
  CHECK(lines[1].rfind("ll,0.01,", 0) == 0);
  std::istringstream field(lines[1].substr(8));
  Real f = 0;
  field >> f;
  CHECK(f == doctest::Approx(freqs.at("ll")).epsilon(1e-4));
}

TEST_CASE("allocate command prints and writes the plan") {
  TempDir tmp;
  std::string plan_file = tmp.file("plan.csv");
  CliResult r = cli({"allocate", kLumSrc, "--config", kLumCfg, "--budget", "1000", "--out",
                     plan_file});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "path_id,fraction,count\n"
        "ll,0.369433,369\n"
        "rl,0.139823,140\n"
        "rr,0.490745,491\n");

  auto counts = load_plan_counts(plan_file);
  CHECK(counts == std::map<std::string, long long>{{"ll", 369}, {"rl", 140}, {"rr", 491}});

  CliResult f = cli({"allocate", kLumSrc, "--config", kLumCfg, "--budget", "1000", "--method",
                     "frequency"});
  CHECK(f.code == 0);
  CHECK(f.out ==
        "path_id,fraction,count\n"
        "ll,0.5,500\n"
        "rl,0.1,100\n"
        "rr,0.4,400\n");
}

TEST_CASE("sample, train, and eval chain together") {
  TempDir tmp;
  std::string plan_file = tmp.file("plan.csv");
  std::string data_file = tmp.file("data.csv");
  std::string model_file = tmp.file("model.json");

  REQUIRE(cli({"allocate", kLumSrc, "--config", kLumCfg, "--budget", "60", "--out", plan_file})
              .code == 0);

  CliResult s = cli({"sample", kLumSrc, "--config", kLumCfg, "--plan", plan_file, "--seed", "3",
                     "--out", data_file});
  CHECK(s.code == 0);
  CHECK(s.out == "wrote 60 rows to " + data_file + "\n");

  Program p = parse_file(kLumSrc);
  SampleConfig cfg = load_config(kLumCfg);
  Dataset direct = build_dataset(p, cfg, load_plan_counts(plan_file), 3);
  Dataset loaded = load_dataset_csv(data_file);
  REQUIRE(loaded.rows.size() == direct.rows.size());
  for (std::size_t i = 0; i < loaded.rows.size(); ++i) {
    CHECK(loaded.rows[i].path == direct.rows[i].path);
    CHECK(loaded.rows[i].x == direct.rows[i].x);
    CHECK(loaded.rows[i].y == direct.rows[i].y);
  }

  CliResult t = cli({"train", "--data", data_file, "--out", model_file, "--width", "4", "--steps",
                     "50", "--seed", "5"});
  CHECK(t.code == 0);
  CHECK(t.out == "trained 3 path models to " + model_file + "\n");

  TrainOptions opt;
  opt.width = 4;
  opt.steps = 50;
  StratifiedSurrogate direct_s = train_surrogate(direct, opt, 5);
  StratifiedSurrogate loaded_s = load_surrogate(model_file);
  CHECK(loaded_s.paths == direct_s.paths);
  REQUIRE(loaded_s.models.size() == direct_s.models.size());
  for (std::size_t i = 0; i < loaded_s.models.size(); ++i)
    CHECK(loaded_s.models[i].theta == direct_s.models[i].theta);

  CliResult e = cli({"eval", kLumSrc, "--model", model_file, "--config", kLumCfg, "--draws",
                     "500", "--seed", "6"});
  CHECK(e.code == 0);
  EvalStats st = evaluate_surrogate(direct_s, p, cfg, 500, 6);
  auto lines = lines_of(e.out);
  REQUIRE(!lines.empty());
  CHECK(lines[0] == "path,draws,mae");
  CHECK(lines.back().rfind("overall," + std::to_string(st.scored) + ",", 0) == 0);
  CHECK(lines.size() == 2 + st.path_mae.size());
}

TEST_CASE("surrogate dispatch follows the program's control flow") {
  Program p = parse_file(kLumSrc);
  SampleConfig cfg = load_config(kLumCfg);
  Dataset d = build_dataset(p, cfg, {{"ll", 12}, {"rl", 12}, {"rr", 12}}, 17);
  TrainOptions opt;
  opt.width = 4;
  opt.steps = 40;
  StratifiedSurrogate s = train_surrogate(d, opt, 2);

  Rng rng(530);
  for (int i = 0; i < 200; ++i) {
    std::vector<Real> x = draw_flat(cfg, rng);
    auto [pred, path] = stratified_predict(s, p, x);
    CHECK(path == run(p, values_from_flat(p, x)).path);
    const Mlp* m = s.model_for(path);
    REQUIRE(m != nullptr);
    std::vector<Real> direct(m->out);
    mlp_forward(*m, x.data(), direct.data());
    CHECK(pred == direct);
  }

  // Without a model for rr, inputs routed there are rejected by name.
  StratifiedSurrogate partial = train_surrogate(
      build_dataset(p, cfg, {{"ll", 8}, {"rl", 8}}, 17), opt, 2);
  try {
    stratified_predict(partial, p, {0.5, 0.3});  // takes rr
    FAIL("expected dispatch to fail");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("no surrogate for path 'rr'") != std::string::npos);
  }

  EvalStats a = evaluate_surrogate(partial, p, cfg, 400, 12);
  EvalStats b = evaluate_surrogate(partial, p, cfg, 400, 12);
  CHECK(a.no_model > 0);
  CHECK(a.mae == b.mae);
  CHECK(a.path_mae == b.path_mae);
  CHECK(a.scored == b.scored);
  CHECK(a.scored + a.no_model == 400);
}

TEST_CASE("exit codes separate usage errors from domain errors") {
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"allocate", kLumSrc}).code == 2);  // missing required options
  CHECK(cli({}).code == 2);

  CliResult missing = cli({"parse", "no_such_file.turaco"});
  CHECK(missing.code == 1);
  CHECK(missing.err.rfind("error: ", 0) == 0);

  CHECK(cli({"run", kLumSrc, "--inputs", "0.5"}).code == 1);       // wrong arity
  CHECK(cli({"run", kLumSrc, "--inputs", "0.5,zebra"}).code == 1);
  CHECK(cli({"allocate", kLumSrc, "--config", kLumCfg, "--budget", "100", "--method", "banana"})
            .code == 1);
}

TEST_CASE("experiment command sweeps methods and budgets reproducibly") {
  TempDir tmp;
  fs::copy_file(kLumSrc, tmp.file("luminance.turaco"));
  std::string report = tmp.file("report.csv");

  std::vector<std::string> args = {"experiment", tmp.file("luminance.turaco"), "--config", kLumCfg,
                                   "--budgets", "20,40", "--trials", "2", "--width", "4",
                                   "--steps", "30", "--draws", "500", "--freq-trials", "2000",
                                   "--seed", "1", "--out", report};
  CliResult r = cli(args);
  CHECK(r.code == 0);

  auto out_lines = lines_of(r.out);
  REQUIRE(out_lines.size() == 7);
  CHECK(out_lines[0] == "method,geomean_predicted,geomean_empirical");
  CHECK(out_lines[1].rfind("complexity,", 0) == 0);
  CHECK(out_lines[2].rfind("frequency,", 0) == 0);
  CHECK(out_lines[3].rfind("uniform,", 0) == 0);
  CHECK(out_lines[4] == "baseline,predicted_improvement_pct,empirical_improvement_pct");
  CHECK(out_lines[5].rfind("frequency,", 0) == 0);
  CHECK(out_lines[6].rfind("uniform,", 0) == 0);

  std::string text = slurp(report);
  auto lines = lines_of(text);
  CHECK(lines[0] == "# version: turaco 0.1.0");
  CHECK(lines[1] == "# benchmark: luminance");
  CHECK(lines[2].rfind("# program: fnv1a64 ", 0) == 0);
  CHECK(lines[3] == "# seed: 1");
  CHECK(lines[7] == "# train: width=4 steps=30 lr=0.0005 batch=128");

  // Cell grid: every (budget, method, trial) exactly once, method-major.
  std::map<std::string, int> seen;
  std::map<std::pair<std::string, long long>, std::vector<Real>> predicted;
  std::size_t header_at = 0;
  while (lines[header_at].rfind("# ", 0) == 0) ++header_at;
  CHECK(lines[header_at] == "benchmark,budget,method,trial,predicted_error,empirical_error");
  for (std::size_t i = header_at + 1; i < lines.size(); ++i) {
    std::vector<std::string> f;
    std::istringstream ss(lines[i]);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    REQUIRE(f.size() == 6);
    CHECK(f[0] == "luminance");
    if (f[3] == "geomean" || f[3] == "improvement_pct") continue;
    ++seen[f[1] + "/" + f[2] + "/" + f[3]];
    predicted[{f[2], std::stoll(f[1])}].push_back(std::stod(f[4]));
    CHECK(std::stod(f[5]) > 0.0);
  }
  CHECK(seen.size() == 12);
  for (const auto& [key, n] : seen) CHECK(n == 1);

  // The error bound ignores the trial index and scales as 1/sqrt(budget).
  for (const auto& method : {"complexity", "frequency", "uniform"}) {
    auto p20 = predicted.at({method, 20});
    auto p40 = predicted.at({method, 40});
    REQUIRE(p20.size() == 2);
    CHECK(p20[0] == p20[1]);
    CHECK(p20[0] == doctest::Approx(p40[0] * std::sqrt(2.0)).epsilon(1e-9));
  }

  // Same seed, byte-identical report; the sweep is a pure function.
  std::string report2 = tmp.file("report2.csv");
  args.back() = report2;
  REQUIRE(cli(args).code == 0);
  CHECK(slurp(report2) == text);
}

TEST_CASE("repro-tables summarizes a corpus directory") {
  TempDir tmp;
  fs::create_directories(tmp.file("src"));
  fs::copy_file(kLumSrc, tmp.file("src/luminance.turaco"));
  fs::copy_file(kLumCfg, tmp.file("src/luminance.json"));
  std::string out_dir = tmp.file("out");

  CliResult r = cli({"repro-tables", tmp.file("src"), "--out-dir", out_dir, "--freq-trials",
                     "2000", "--seed", "4"});
  CHECK(r.code == 0);

  auto stats = lines_of(slurp(out_dir + "/benchmark_stats.csv"));
  REQUIRE(stats.size() == 4);
  CHECK(stats[0] == "benchmark,path,frequency,complexity,complexity_distribution");
  CHECK(stats[1].rfind("luminance,ll,0.5,0.01,", 0) == 0);
  CHECK(stats[2].rfind("luminance,rl,0.1,1.21,", 0) == 0);
  CHECK(stats[3].rfind("luminance,rr,0.4,9,", 0) == 0);

  auto impr = lines_of(slurp(out_dir + "/predicted_improvements.csv"));
  REQUIRE(impr.size() == 2);
  CHECK(impr[0] == "benchmark,vs_frequency_pct,vs_uniform_pct");
  std::istringstream row(impr[1]);
  std::string bench, vf, vu;
  std::getline(row, bench, ',');
  std::getline(row, vf, ',');
  std::getline(row, vu, ',');
  CHECK(bench == "luminance");
  CHECK(std::stod(vf) == doctest::Approx(2.577531).epsilon(2e-2));
  CHECK(std::stod(vu) == doctest::Approx(6.970619).epsilon(2e-2));
}

TEST_CASE("model files reject garbage") {
  TempDir tmp;
  std::string bad = tmp.file("bad.json");
  std::ofstream(bad) << "{]";
  CHECK_THROWS_AS(load_surrogate(bad), DataError);
  CHECK_THROWS_AS(load_surrogate(tmp.file("missing.json")), DataError);
}
