#pragma once

#include <map>
#include <string>
#include <vector>

#include "turaco/ast.hpp"

namespace turaco {

// Per-path facts the planner consumes.
struct PathStat {
  std::string path;
  Real frequency = 0;   // probability mass of the inputs taking this path
  Real complexity = 0;  // sample complexity from the analysis
};

enum class Method { Complexity, Frequency, Uniform };

const char* method_name(Method m);
Method method_from_name(const std::string& name);  // throws DataError on unknown names

// Per-path failure probability so that c paths each failing with probability
// delta_i keep the whole-program failure under delta: 1-delta = (1-delta_i)^c.
Real split_delta(Real delta, std::size_t live_paths);

// PAC bound on one surrogate's expected error after training on n samples.
Real predicted_error(Real complexity, Real delta_i, Real n);

// A training-budget split across the live paths of a program.
struct Plan {
  std::vector<PathStat> paths;  // frequency > 0 only, lexicographic path order
  std::vector<Real> fractions;  // budget share per live path, sums to 1
  Real delta_i = 0;
  Method method = Method::Complexity;
};

// Split a unit budget across live paths. Complexity-guided sampling
// minimizes the summed frequency-weighted error bounds; Frequency allocates
// proportionally to path frequency; Uniform splits evenly. Dormant paths
// (frequency 0) are dropped. Throws DataError when no path is live.
Plan plan_budget(const std::vector<PathStat>& stats, Real delta, Method method);

// Frequency-weighted sum of the per-path error bounds at total budget n,
// treating n * fraction as a real sample count.
Real expected_predicted_error(const Plan& plan, Real n);

// Percentage by which ours beats a baseline plan for the same program. Both
// bounds scale as 1/sqrt(n), so the ratio is budget independent.
Real predicted_improvement(const Plan& ours, const Plan& baseline);

// Integer sample counts summing to budget, aligned with plan.paths: floor
// everything, then hand leftover samples to the largest remainders, breaking
// ties toward the lexicographically smaller path id.
std::vector<long long> integerize(const Plan& plan, long long budget);

// Plan file: CSV with header path_id,fraction,count. The counts are what
// sampling consumes; fractions ride along for inspection.
void save_plan_csv(const Plan& plan, const std::vector<long long>& counts,
                   const std::string& file);
std::map<std::string, long long> load_plan_counts(const std::string& file);

}  // namespace turaco
