#include "turaco/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "turaco/desugar.hpp"
#include "turaco/error.hpp"
#include "turaco/interp.hpp"
#include "turaco/parser.hpp"
#include "turaco/pretty.hpp"
#include "turaco/rng.hpp"
#include "turaco/surrogate.hpp"
#include "turaco/tilde.hpp"

namespace turaco {
namespace {

constexpr Method kMethods[] = {Method::Complexity, Method::Frequency, Method::Uniform};
constexpr const char* kVersion = "0.1.0";

std::string g6(Real v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string g17(Real v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Real geomean(const std::vector<Real>& v) {
  if (v.empty()) return 0;
  Real s = 0;
  for (Real x : v) s += std::log(std::max(x, 1e-300));
  return std::exp(s / static_cast<Real>(v.size()));
}

struct EvalRow {
  std::string path;
  std::vector<Real> x;
  std::vector<Real> y;
};

std::vector<EvalRow> draw_eval_set(const Program& p, const SampleConfig& c, std::size_t draws,
                                   std::uint64_t seed) {
  constexpr std::size_t kShards = 256;
  StreamSeed root(seed);
  std::vector<std::vector<EvalRow>> shards(kShards);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t s = 0; s < kShards; ++s) {
    std::size_t n = draws / kShards + (s < draws % kShards ? 1 : 0);
    Rng rng(root.with("evalset").with(s).value());
    shards[s].reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Real> flat = draw_flat(c, rng);
      try {
        RunResult r = run(p, values_from_flat(p, flat));
        shards[s].push_back({std::move(r.path), std::move(flat), std::move(r.outputs)});
      } catch (const EvalError&) {
      }
    }
  }
  std::vector<EvalRow> rows;
  for (auto& sh : shards)
    for (auto& r : sh) rows.push_back(std::move(r));
  return rows;
}

void score_cell(const StratifiedSurrogate& s, const std::vector<EvalRow>& rows,
                ExperimentCell& cell) {
  std::vector<Real> pred(s.out);
  Real abs_sum = 0;
  std::size_t scored = 0;
  std::map<std::string, Real> path_abs;
  std::map<std::string, std::size_t> path_n;
  for (const auto& row : rows) {
    const Mlp* m = s.model_for(row.path);
    if (!m) continue;
    mlp_forward(*m, row.x.data(), pred.data());
    Real err = 0;
    for (int k = 0; k < s.out; ++k) err += std::abs(pred[k] - row.y[k]);
    err /= s.out;
    abs_sum += err;
    ++scored;
    path_abs[row.path] += err;
    ++path_n[row.path];
  }
  cell.empirical = scored ? abs_sum / static_cast<Real>(scored) : 0;
  for (const auto& [path, v] : path_abs)
    cell.path_mae[path] = v / static_cast<Real>(path_n[path]);
}

}  // namespace

ExperimentResult run_experiment(const Program& p, const SampleConfig& c, const std::string& name,
                                const ExperimentOptions& opt, std::uint64_t seed) {
  check_config(p, c);
  if (opt.budgets.empty()) throw DataError("experiment needs at least one budget");
  if (opt.trials <= 0) throw DataError("experiment needs at least one trial");

  ExperimentResult r;
  r.benchmark = name;
  {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(pretty_print(desugar(p)))));
    r.program_digest = buf;
  }
  StreamSeed root(seed);

  auto complexities = program_complexities(p);
  auto freqs = planning_frequencies(p, c, opt.freq_trials, root.with("freq-mc").value());
  for (const auto& pc : complexities) {
    auto it = freqs.find(pc.path);
    Real f = it == freqs.end() ? 0.0 : it->second;
    r.stats.push_back({pc.path, f, pc.zeta});
  }
  for (Method m : kMethods) r.plans.emplace(m, plan_budget(r.stats, opt.delta, m));

  std::vector<EvalRow> eval_rows = draw_eval_set(p, c, opt.eval_draws, root.with("eval").value());

  for (Method m : kMethods) {
    const Plan& plan = r.plans.at(m);
    for (long long budget : opt.budgets) {
      std::vector<long long> counts = integerize(plan, budget);
      std::map<std::string, long long> count_map;
      for (std::size_t i = 0; i < counts.size(); ++i) count_map[plan.paths[i].path] = counts[i];
      Real predicted = expected_predicted_error(plan, static_cast<Real>(budget));
      for (int trial = 0; trial < opt.trials; ++trial) {
        StreamSeed job = root.with(method_name(m)).with(static_cast<std::uint64_t>(budget))
                             .with(static_cast<std::uint64_t>(trial));
        ExperimentCell cell;
        cell.method = m;
        cell.budget = budget;
        cell.trial = trial;
        cell.predicted = predicted;
        for (const auto& [path, n] : count_map) cell.path_samples[path] = n;
        try {
          Dataset data = build_dataset(p, c, count_map, job.with("data").value());
          StratifiedSurrogate s = train_surrogate(data, opt.train, job.with("model").value());
          score_cell(s, eval_rows, cell);
        } catch (const Error& e) {
          cell.failed = true;
          cell.failure = e.what();
        }
        r.cells.push_back(std::move(cell));
      }
    }
  }
  return r;
}

namespace {

// Per-budget empirical error of one method, geomean-aggregated across trials.
std::map<long long, Real> per_budget_error(const ExperimentResult& r, Method m) {
  std::map<long long, std::vector<Real>> by_budget;
  for (const auto& cell : r.cells)
    if (cell.method == m && !cell.failed) by_budget[cell.budget].push_back(cell.empirical);
  std::map<long long, Real> out;
  for (const auto& [budget, values] : by_budget) out[budget] = geomean(values);
  return out;
}

}  // namespace

std::vector<MethodSummary> summarize(const ExperimentResult& r) {
  std::vector<MethodSummary> out;
  for (Method m : kMethods) {
    std::map<long long, Real> empirical = per_budget_error(r, m);
    std::map<long long, Real> predicted_by_budget;
    for (const auto& cell : r.cells)
      if (cell.method == m) predicted_by_budget[cell.budget] = cell.predicted;
    if (predicted_by_budget.empty()) continue;
    std::vector<Real> per_budget, predicted;
    for (const auto& [budget, value] : empirical) per_budget.push_back(value);
    for (const auto& [budget, value] : predicted_by_budget) predicted.push_back(value);
    out.push_back({m, geomean(per_budget), geomean(predicted)});
  }
  return out;
}

std::vector<ImprovementSummary> improvements(const ExperimentResult& r) {
  std::vector<ImprovementSummary> out;
  std::map<long long, Real> ours = per_budget_error(r, Method::Complexity);
  for (Method base : {Method::Frequency, Method::Uniform}) {
    ImprovementSummary s;
    s.baseline = base;
    s.predicted_pct = predicted_improvement(r.plans.at(Method::Complexity), r.plans.at(base));
    std::map<long long, Real> theirs = per_budget_error(r, base);
    Real sum = 0;
    std::size_t n = 0;
    for (const auto& [budget, e_base] : theirs) {
      auto it = ours.find(budget);
      if (it == ours.end() || !(e_base > 0)) continue;
      sum += 100.0 * (e_base - it->second) / e_base;
      ++n;
    }
    s.empirical_pct = n ? sum / static_cast<Real>(n) : 0;
    out.push_back(s);
  }
  return out;
}

void save_report_csv(const ExperimentResult& r, const ExperimentOptions& opt, std::uint64_t seed,
                     const std::string& file) {
  std::string out;
  out += "# version: turaco " + std::string(kVersion) + "\n";
  out += "# benchmark: " + r.benchmark + "\n";
  out += "# program: fnv1a64 " + r.program_digest + "\n";
  out += "# seed: " + std::to_string(seed) + "\n";
  out += "# delta: " + g6(opt.delta) + "\n";
  out += "# trials: " + std::to_string(opt.trials) + "\n";
  out += "# eval_draws: " + std::to_string(opt.eval_draws) + "\n";
  out += "# train: width=" + std::to_string(opt.train.width) +
         " steps=" + std::to_string(opt.train.steps) + " lr=" + g6(opt.train.lr) +
         " batch=" + std::to_string(opt.train.batch) + "\n";
  out += "# paths:";
  for (const auto& s : r.stats)
    out += " " + s.path + "(freq=" + g6(s.frequency) + ",zeta=" + g6(s.complexity) + ")";
  out += "\n";
  out += "benchmark,budget,method,trial,predicted_error,empirical_error\n";
  for (const auto& cell : r.cells) {
    out += r.benchmark + "," + std::to_string(cell.budget) + "," + method_name(cell.method) + "," +
           std::to_string(cell.trial) + "," + g17(cell.predicted) + ",";
    out += cell.failed ? "failed" : g17(cell.empirical);
    out += "\n";
  }
  for (const auto& s : summarize(r)) {
    out += r.benchmark + ",,";
    out += method_name(s.method);
    out += ",geomean," + g17(s.geomean_predicted) + "," + g17(s.geomean_empirical) + "\n";
  }
  for (const auto& s : improvements(r)) {
    out += r.benchmark + ",,";
    out += method_name(s.baseline);
    out += ",improvement_pct," + g17(s.predicted_pct) + "," + g17(s.empirical_pct) + "\n";
  }
  std::ofstream f(file, std::ios::binary);
  if (!f || !(f << out)) throw DataError("cannot write " + file);
}

void write_benchmark_tables(const std::string& bench_dir, const std::string& out_dir, Real delta,
                            std::size_t freq_trials, std::uint64_t seed) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(bench_dir)) throw DataError(bench_dir + " is not a directory");
  std::vector<fs::path> programs;
  for (const auto& entry : fs::directory_iterator(bench_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".turaco")
      programs.push_back(entry.path());
  if (programs.empty()) throw DataError("no .turaco programs in " + bench_dir);
  std::sort(programs.begin(), programs.end());
  fs::create_directories(out_dir);

  std::string stats = "benchmark,path,frequency,complexity,complexity_distribution\n";
  std::string improvement_rows = "benchmark,vs_frequency_pct,vs_uniform_pct\n";
  StreamSeed root(seed);
  for (const auto& prog_path : programs) {
    std::string name = prog_path.stem().string();
    fs::path config_path = prog_path;
    config_path.replace_extension(".json");
    if (!fs::exists(config_path))
      throw DataError(name + " has no config (" + config_path.string() + ")");
    Program p = parse_file(prog_path.string());
    SampleConfig c = load_config(config_path.string());
    check_config(p, c);

    auto complexities = program_complexities(p);
    auto freqs = planning_frequencies(p, c, freq_trials, root.with(name).value());
    std::vector<PathStat> path_stats;
    for (const auto& pc : complexities) {
      auto it = freqs.find(pc.path);
      path_stats.push_back({pc.path, it == freqs.end() ? 0.0 : it->second, pc.zeta});
    }
    Plan guided = plan_budget(path_stats, delta, Method::Complexity);
    Plan frequency = plan_budget(path_stats, delta, Method::Frequency);
    Plan uniform = plan_budget(path_stats, delta, Method::Uniform);

    for (std::size_t i = 0; i < guided.paths.size(); ++i) {
      const PathStat& s = guided.paths[i];
      stats += name + "," + s.path + "," + g6(s.frequency) + "," + g6(s.complexity) + "," +
               g6(guided.fractions[i]) + "\n";
    }
    improvement_rows += name + "," + g6(predicted_improvement(guided, frequency)) + "," +
                        g6(predicted_improvement(guided, uniform)) + "\n";
  }

  auto write = [](const fs::path& file, const std::string& text) {
    std::ofstream f(file, std::ios::binary);
    if (!f || !(f << text)) throw DataError("cannot write " + file.string());
  };
  write(fs::path(out_dir) / "benchmark_stats.csv", stats);
  write(fs::path(out_dir) / "predicted_improvements.csv", improvement_rows);
}

}  // namespace turaco
