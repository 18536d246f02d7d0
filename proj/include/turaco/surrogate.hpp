#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "turaco/ast.hpp"
#include "turaco/mlp.hpp"
#include "turaco/sample.hpp"

namespace turaco {

// One network per sampled path, dispatched by the path the real program takes
// on an input.
struct StratifiedSurrogate {
  int in = 0;
  int out = 0;
  std::vector<std::string> paths;  // lexicographic order
  std::vector<Mlp> models;         // aligned with paths

  const Mlp* model_for(const std::string& path) const;
};

// Train one network per path group present in the dataset. Each stratum's
// seed is derived from its path id, so adding or dropping a stratum never
// perturbs the others.
StratifiedSurrogate train_surrogate(const Dataset& d, const TrainOptions& opt, std::uint64_t seed);

// Run the program's control flow on one flat input to pick the path, then
// apply that path's network. Throws DataError when the path has no model
// (a dormant path forced by hand, or a stratum the plan never sampled).
std::pair<std::vector<Real>, std::string> stratified_predict(const StratifiedSurrogate& s,
                                                             const Program& p,
                                                             const std::vector<Real>& flat_x);

struct EvalStats {
  Real mae = 0;  // mean absolute error over scored draws
  std::map<std::string, Real> path_mae;
  std::map<std::string, std::size_t> path_draws;
  std::size_t scored = 0;
  std::size_t no_model = 0;  // draws routed to a path with no trained model
  std::size_t errored = 0;   // draws where the program itself threw
};

// Compare surrogate and program on fresh uniform draws. Sharded streams make
// the result a pure function of (seed, draws) for any thread count.
EvalStats evaluate_surrogate(const StratifiedSurrogate& s, const Program& p,
                             const SampleConfig& c, std::size_t draws, std::uint64_t seed);

void save_surrogate(const StratifiedSurrogate& s, const std::string& file);
StratifiedSurrogate load_surrogate(const std::string& file);

}  // namespace turaco
