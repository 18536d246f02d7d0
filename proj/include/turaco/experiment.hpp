#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "turaco/alloc.hpp"
#include "turaco/mlp.hpp"
#include "turaco/sample.hpp"

namespace turaco {

struct ExperimentOptions {
  std::vector<long long> budgets;
  int trials = 5;
  Real delta = 0.1;
  TrainOptions train;
  std::size_t eval_draws = 10000;
  std::size_t freq_trials = 100000;  // Monte Carlo fallback when the config has no table
};

struct ExperimentCell {
  Method method = Method::Complexity;
  long long budget = 0;
  int trial = 0;
  Real predicted = 0;  // error bound with n * fraction samples per path
  Real empirical = 0;  // stratified mean absolute error on the shared eval set
  bool failed = false;
  std::string failure;  // what went wrong, when failed
  std::map<std::string, Real> path_mae;
  std::map<std::string, long long> path_samples;
};

struct ExperimentResult {
  std::string benchmark;
  std::string program_digest;   // fnv1a64 of the pretty-printed core program
  std::vector<PathStat> stats;  // live paths with frequency and complexity
  std::map<Method, Plan> plans;
  std::vector<ExperimentCell> cells;  // method-major, then budget, then trial
};

// Full pipeline for one program: analyze, plan each method, then for every
// (method, budget, trial) draw a dataset, train per-path networks, and score
// them against the program on one shared set of fresh draws.
ExperimentResult run_experiment(const Program& p, const SampleConfig& c, const std::string& name,
                                const ExperimentOptions& opt, std::uint64_t seed);

struct MethodSummary {
  Method method = Method::Complexity;
  Real geomean_empirical = 0;  // geomean over trials per budget, then over budgets
  Real geomean_predicted = 0;
};

std::vector<MethodSummary> summarize(const ExperimentResult& r);

// Improvement of complexity-guided sampling over each baseline: per budget,
// errors are geomean-aggregated across trials, improvements taken as
// 100 (e_base - e_cgs) / e_base, then averaged across budgets. The predicted
// counterpart is budget independent.
struct ImprovementSummary {
  Method baseline = Method::Frequency;
  Real predicted_pct = 0;
  Real empirical_pct = 0;
};

std::vector<ImprovementSummary> improvements(const ExperimentResult& r);

void save_report_csv(const ExperimentResult& r, const ExperimentOptions& opt, std::uint64_t seed,
                     const std::string& file);

// Summary tables for a directory of programs (every *.turaco with a sibling
// *.json config): per-path frequency, complexity, and optimal share in
// benchmark_stats.csv; predicted improvement over both baselines in
// predicted_improvements.csv.
void write_benchmark_tables(const std::string& bench_dir, const std::string& out_dir, Real delta,
                            std::size_t freq_trials, std::uint64_t seed);

}  // namespace turaco
