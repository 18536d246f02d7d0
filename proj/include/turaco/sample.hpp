#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "turaco/ast.hpp"
#include "turaco/interp.hpp"
#include "turaco/rng.hpp"

namespace turaco {

struct InputSpec {
  std::string name;
  Real low = 0;
  Real high = 1;
  int dim = 0;  // 0 = scalar
};

// Input ranges plus, optionally, published path frequencies that override the
// Monte Carlo estimate during planning.
struct SampleConfig {
  std::vector<InputSpec> inputs;
  std::map<std::string, Real> frequency_override;
};

SampleConfig parse_config(const std::string& json_text);
SampleConfig load_config(const std::string& file);

// Reject configs whose inputs do not line up with the program's parameters.
void check_config(const Program& p, const SampleConfig& c);

// One flat input vector, each scalar component uniform on its range.
std::vector<Real> draw_flat(const SampleConfig& c, Rng& rng);

// Flat input component names: x_<name> for scalars, x_<name>_<i> for vectors.
std::vector<std::string> flat_input_names(const Program& p);

struct FrequencyEstimate {
  std::map<std::string, std::size_t> counts;  // observed path -> hits
  std::size_t error_trials = 0;               // draws where evaluation threw
  std::size_t trials = 0;
  std::map<std::string, Real> frequencies() const;
};

// Monte Carlo path frequencies over uniform draws. Trials are split into a
// fixed number of shards with independent streams, so the result is a pure
// function of (config, trials, seed) whatever the thread count. The serial
// variant walks the same shards in order; it is the reference the parallel
// kernel is checked against.
FrequencyEstimate estimate_frequencies(const Program& p, const SampleConfig& c,
                                       std::size_t trials, std::uint64_t seed);
FrequencyEstimate estimate_frequencies_serial(const Program& p, const SampleConfig& c,
                                              std::size_t trials, std::uint64_t seed);

// Frequencies the planner should use: the config's table when present,
// otherwise the Monte Carlo estimate.
std::map<std::string, Real> planning_frequencies(const Program& p, const SampleConfig& c,
                                                 std::size_t trials, std::uint64_t seed);

struct Dataset {
  std::vector<std::string> x_names;
  std::size_t out_width = 0;
  struct Row {
    std::string path;
    std::vector<Real> x;
    std::vector<Real> y;
  };
  std::vector<Row> rows;  // grouped by path, lexicographic path order
};

// Rejection-sample count[path] inputs landing on each path and label them
// with the program's outputs. Strata use independent streams keyed by path
// id, so per-path data does not depend on what else was requested. Throws
// DataError for unknown paths and when a stratum's attempt budget (the
// larger of 1e6 and 1e4 per requested row) runs out.
Dataset build_dataset(const Program& p, const SampleConfig& c,
                      const std::map<std::string, long long>& count, std::uint64_t seed);
Dataset build_dataset_serial(const Program& p, const SampleConfig& c,
                             const std::map<std::string, long long>& count, std::uint64_t seed);

void save_dataset_csv(const Dataset& d, const std::string& file);
Dataset load_dataset_csv(const std::string& file);

}  // namespace turaco
