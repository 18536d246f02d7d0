#include "turaco/alloc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "turaco/error.hpp"

namespace turaco {

const char* method_name(Method m) {
  switch (m) {
    case Method::Complexity:
      return "complexity";
    case Method::Frequency:
      return "frequency";
    case Method::Uniform:
      return "uniform";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  if (name == "complexity") return Method::Complexity;
  if (name == "frequency") return Method::Frequency;
  if (name == "uniform") return Method::Uniform;
  throw DataError("unknown method '" + name + "' (expected complexity, frequency, or uniform)");
}

Real split_delta(Real delta, std::size_t live_paths) {
  if (!(delta > 0.0 && delta < 1.0)) throw DataError("delta must lie in (0, 1)");
  if (live_paths == 0) throw DataError("no live paths");
  return 1.0 - std::pow(1.0 - delta, 1.0 / static_cast<Real>(live_paths));
}

Real predicted_error(Real complexity, Real delta_i, Real n) {
  return std::sqrt((complexity + std::log(1.0 / delta_i)) / n);
}

Plan plan_budget(const std::vector<PathStat>& stats, Real delta, Method method) {
  Plan plan;
  plan.method = method;
  for (const auto& s : stats)
    if (s.frequency > 0.0) plan.paths.push_back(s);
  if (plan.paths.empty()) throw DataError("no live paths to allocate a budget across");
  std::sort(plan.paths.begin(), plan.paths.end(),
            [](const PathStat& a, const PathStat& b) { return a.path < b.path; });
  plan.delta_i = split_delta(delta, plan.paths.size());

  std::vector<Real> weight(plan.paths.size());
  Real log_term = std::log(1.0 / plan.delta_i);
  for (std::size_t i = 0; i < plan.paths.size(); ++i) {
    const PathStat& p = plan.paths[i];
    switch (method) {
      case Method::Complexity:
        weight[i] = std::pow(p.frequency * std::sqrt(p.complexity + log_term), 2.0 / 3.0);
        break;
      case Method::Frequency:
        weight[i] = p.frequency;
        break;
      case Method::Uniform:
        weight[i] = 1.0;
        break;
    }
  }
  Real total = std::accumulate(weight.begin(), weight.end(), 0.0);
  plan.fractions.resize(weight.size());
  for (std::size_t i = 0; i < weight.size(); ++i) plan.fractions[i] = weight[i] / total;
  return plan;
}

Real expected_predicted_error(const Plan& plan, Real n) {
  Real sum = 0;
  for (std::size_t i = 0; i < plan.paths.size(); ++i)
    sum += plan.paths[i].frequency *
           predicted_error(plan.paths[i].complexity, plan.delta_i, n * plan.fractions[i]);
  return sum;
}

Real predicted_improvement(const Plan& ours, const Plan& baseline) {
  Real e_ours = expected_predicted_error(ours, 1.0);
  Real e_base = expected_predicted_error(baseline, 1.0);
  return 100.0 * (e_base - e_ours) / e_base;
}

std::vector<long long> integerize(const Plan& plan, long long budget) {
  if (budget < 0) throw DataError("budget must be nonnegative");
  std::size_t n = plan.fractions.size();
  std::vector<long long> counts(n);
  std::vector<Real> remainder(n);
  long long used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Real exact = plan.fractions[i] * static_cast<Real>(budget);
    counts[i] = static_cast<long long>(std::floor(exact));
    remainder[i] = exact - static_cast<Real>(counts[i]);
    used += counts[i];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
    return plan.paths[a].path < plan.paths[b].path;
  });
  for (std::size_t k = 0; used < budget; k = (k + 1) % n, ++used) ++counts[order[k]];
  return counts;
}

void save_plan_csv(const Plan& plan, const std::vector<long long>& counts,
                   const std::string& file) {
  if (counts.size() != plan.paths.size()) throw DataError("plan and counts disagree on paths");
  std::string out = "path_id,fraction,count\n";
  char buf[64];
  for (std::size_t i = 0; i < plan.paths.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", plan.fractions[i]);
    out += plan.paths[i].path + "," + buf + "," + std::to_string(counts[i]) + "\n";
  }
  std::ofstream f(file, std::ios::binary);
  if (!f || !(f << out)) throw DataError("cannot write " + file);
}

std::map<std::string, long long> load_plan_counts(const std::string& file) {
  std::ifstream f(file, std::ios::binary);
  if (!f) throw DataError("cannot open " + file);
  std::string line;
  if (!std::getline(f, line) || line.rfind("path_id,fraction,count", 0) != 0)
    throw DataError(file + ": expected header path_id,fraction,count");
  std::map<std::string, long long> counts;
  int lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t c1 = line.find(',');
    std::size_t c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c2 == std::string::npos)
      throw DataError(file + ": line " + std::to_string(lineno) + " is not path_id,fraction,count");
    std::string path = line.substr(0, c1);
    try {
      counts[path] = std::stoll(line.substr(c2 + 1));
    } catch (const std::exception&) {
      throw DataError(file + ": bad count on line " + std::to_string(lineno));
    }
  }
  return counts;
}

}  // namespace turaco
