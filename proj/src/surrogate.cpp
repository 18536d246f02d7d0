#include "turaco/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "turaco/error.hpp"
#include "turaco/interp.hpp"

namespace turaco {

const Mlp* StratifiedSurrogate::model_for(const std::string& path) const {
  auto it = std::lower_bound(paths.begin(), paths.end(), path);
  if (it == paths.end() || *it != path) return nullptr;
  return &models[it - paths.begin()];
}

StratifiedSurrogate train_surrogate(const Dataset& d, const TrainOptions& opt,
                                    std::uint64_t seed) {
  if (d.rows.empty()) throw DataError("dataset has no rows");
  StratifiedSurrogate s;
  s.in = static_cast<int>(d.x_names.size());
  s.out = static_cast<int>(d.out_width);

  std::map<std::string, std::pair<std::vector<Real>, std::vector<Real>>> groups;
  for (const auto& row : d.rows) {
    auto& [X, Y] = groups[row.path];
    X.insert(X.end(), row.x.begin(), row.x.end());
    Y.insert(Y.end(), row.y.begin(), row.y.end());
  }
  StreamSeed root(seed);
  for (auto& [path, data] : groups) {
    s.paths.push_back(path);
    s.models.push_back(train_mlp(data.first, data.second, s.in, s.out, opt,
                                 root.with("path").with(path).value()));
  }
  return s;
}

std::pair<std::vector<Real>, std::string> stratified_predict(const StratifiedSurrogate& s,
                                                             const Program& p,
                                                             const std::vector<Real>& flat_x) {
  RunResult r = run(p, values_from_flat(p, flat_x));
  const Mlp* m = s.model_for(r.path);
  if (!m) throw DataError("no surrogate for path '" + r.path + "'");
  if (flat_x.size() != static_cast<std::size_t>(s.in))
    throw DataError("input arity mismatch: surrogate expects " + std::to_string(s.in));
  std::vector<Real> y(s.out);
  mlp_forward(*m, flat_x.data(), y.data());
  return {std::move(y), std::move(r.path)};
}

namespace {

constexpr std::size_t kShards = 256;

struct EvalShard {
  Real abs_sum = 0;
  std::size_t scored = 0, no_model = 0, errored = 0;
  std::map<std::string, Real> path_abs;
  std::map<std::string, std::size_t> path_n;
};

EvalShard eval_shard(const StratifiedSurrogate& s, const Program& p, const SampleConfig& c,
                     std::size_t draws, std::uint64_t seed) {
  EvalShard sh;
  Rng rng(seed);
  std::vector<Real> pred(s.out);
  for (std::size_t i = 0; i < draws; ++i) {
    std::vector<Real> flat = draw_flat(c, rng);
    RunResult r;
    try {
      r = run(p, values_from_flat(p, flat));
    } catch (const EvalError&) {
      ++sh.errored;
      continue;
    }
    const Mlp* m = s.model_for(r.path);
    if (!m || r.outputs.size() != static_cast<std::size_t>(s.out) ||
        flat.size() != static_cast<std::size_t>(s.in)) {
      ++sh.no_model;
      continue;
    }
    mlp_forward(*m, flat.data(), pred.data());
    Real err = 0;
    for (int k = 0; k < s.out; ++k) err += std::abs(pred[k] - r.outputs[k]);
    err /= s.out;
    sh.abs_sum += err;
    ++sh.scored;
    sh.path_abs[r.path] += err;
    ++sh.path_n[r.path];
  }
  return sh;
}

}  // namespace

EvalStats evaluate_surrogate(const StratifiedSurrogate& s, const Program& p,
                             const SampleConfig& c, std::size_t draws, std::uint64_t seed) {
  check_config(p, c);
  StreamSeed root(seed);
  std::vector<EvalShard> shards(kShards);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < kShards; ++i) {
    try {
      std::size_t n = draws / kShards + (i < draws % kShards ? 1 : 0);
      shards[i] = eval_shard(s, p, c, n, root.with("eval").with(i).value());
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  EvalStats st;
  Real abs_sum = 0;
  std::map<std::string, Real> path_abs;
  for (const auto& sh : shards) {
    abs_sum += sh.abs_sum;
    st.scored += sh.scored;
    st.no_model += sh.no_model;
    st.errored += sh.errored;
    for (const auto& [path, v] : sh.path_abs) path_abs[path] += v;
    for (const auto& [path, n] : sh.path_n) st.path_draws[path] += n;
  }
  st.mae = st.scored ? abs_sum / static_cast<Real>(st.scored) : 0;
  for (const auto& [path, v] : path_abs)
    st.path_mae[path] = v / static_cast<Real>(st.path_draws[path]);
  return st;
}

void save_surrogate(const StratifiedSurrogate& s, const std::string& file) {
  nlohmann::json j;
  j["in"] = s.in;
  j["out"] = s.out;
  j["paths"] = s.paths;
  j["models"] = nlohmann::json::array();
  for (const auto& m : s.models) {
    nlohmann::json jm;
    jm["hidden"] = m.hidden;
    jm["theta"] = m.theta;
    j["models"].push_back(std::move(jm));
  }
  std::ofstream f(file, std::ios::binary);
  if (!f || !(f << j.dump(1, '\t') << '\n')) throw DataError("cannot write " + file);
}

StratifiedSurrogate load_surrogate(const std::string& file) {
  std::ifstream f(file, std::ios::binary);
  if (!f) throw DataError("cannot open " + file);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(file + ": " + e.what());
  }
  StratifiedSurrogate s;
  try {
    s.in = j.at("in").get<int>();
    s.out = j.at("out").get<int>();
    s.paths = j.at("paths").get<std::vector<std::string>>();
    for (const auto& jm : j.at("models")) {
      Mlp m;
      m.in = s.in;
      m.out = s.out;
      m.hidden = jm.at("hidden").get<int>();
      m.theta = jm.at("theta").get<std::vector<Real>>();
      if (m.theta.size() != m.size()) throw DataError(file + ": parameter count mismatch");
      s.models.push_back(std::move(m));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(file + ": " + e.what());
  }
  if (s.paths.size() != s.models.size() || !std::is_sorted(s.paths.begin(), s.paths.end()))
    throw DataError(file + ": malformed model file");
  return s;
}

}  // namespace turaco
