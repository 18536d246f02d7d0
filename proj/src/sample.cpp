#include "turaco/sample.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "turaco/error.hpp"
#include "turaco/trace.hpp"

namespace turaco {
namespace {

constexpr std::size_t kShards = 256;

std::string read_file(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError("cannot open " + file);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void append_csv_real(std::string& out, Real v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

Real parse_csv_real(std::string_view field, const std::string& file) {
  Real v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw DataError(file + ": bad numeric field '" + std::string(field) + "'");
  return v;
}

}  // namespace

SampleConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad config: ") + e.what());
  }
  if (!j.is_object() || !j.contains("inputs") || !j["inputs"].is_array() || j["inputs"].empty())
    throw DataError("config needs a nonempty \"inputs\" array");
  SampleConfig c;
  std::set<std::string> seen;
  for (const auto& item : j["inputs"]) {
    if (!item.is_object() || !item.contains("name") || !item.contains("low") ||
        !item.contains("high"))
      throw DataError("each input needs name, low, and high");
    InputSpec spec;
    spec.name = item["name"].get<std::string>();
    spec.low = item["low"].get<Real>();
    spec.high = item["high"].get<Real>();
    spec.dim = item.value("dim", 0);
    if (spec.name.empty() || !seen.insert(spec.name).second)
      throw DataError("input names must be nonempty and unique");
    if (!(spec.low <= spec.high))
      throw DataError("input '" + spec.name + "' has low > high");
    if (spec.dim < 0) throw DataError("input '" + spec.name + "' has negative dim");
    c.inputs.push_back(std::move(spec));
  }
  if (j.contains("frequencies")) {
    if (!j["frequencies"].is_object()) throw DataError("\"frequencies\" must be an object");
    for (const auto& [path, freq] : j["frequencies"].items()) {
      Real f = freq.get<Real>();
      if (!(f >= 0.0 && f <= 1.0))
        throw DataError("frequency for path '" + path + "' outside [0, 1]");
      c.frequency_override[path] = f;
    }
  }
  return c;
}

SampleConfig load_config(const std::string& file) { return parse_config(read_file(file)); }

void check_config(const Program& p, const SampleConfig& c) {
  if (c.inputs.size() != p.inputs.size())
    throw DataError("config describes " + std::to_string(c.inputs.size()) + " inputs, program has " +
                    std::to_string(p.inputs.size()));
  for (std::size_t i = 0; i < c.inputs.size(); ++i) {
    if (c.inputs[i].name != p.inputs[i].name)
      throw DataError("config input #" + std::to_string(i) + " is '" + c.inputs[i].name +
                      "', program expects '" + p.inputs[i].name + "'");
    if (c.inputs[i].dim != p.inputs[i].dim)
      throw DataError("config input '" + c.inputs[i].name + "' has dim " +
                      std::to_string(c.inputs[i].dim) + ", program expects " +
                      std::to_string(p.inputs[i].dim));
  }
}

std::vector<Real> draw_flat(const SampleConfig& c, Rng& rng) {
  std::vector<Real> out;
  for (const auto& in : c.inputs) {
    int comps = in.dim > 0 ? in.dim : 1;
    for (int k = 0; k < comps; ++k) out.push_back(rng.uniform(in.low, in.high));
  }
  return out;
}

std::vector<std::string> flat_input_names(const Program& p) {
  std::vector<std::string> names;
  for (const auto& in : p.inputs) {
    if (in.dim <= 0) {
      names.push_back("x_" + in.name);
    } else {
      for (int k = 0; k < in.dim; ++k) names.push_back("x_" + in.name + "_" + std::to_string(k));
    }
  }
  return names;
}

std::map<std::string, Real> FrequencyEstimate::frequencies() const {
  std::map<std::string, Real> out;
  for (const auto& [path, n] : counts)
    out[path] = static_cast<Real>(n) / static_cast<Real>(trials);
  return out;
}

namespace {

struct FreqShard {
  std::map<std::string, std::size_t> counts;
  std::size_t errors = 0;
};

FreqShard freq_shard(const Program& p, const SampleConfig& c, std::size_t trials,
                     std::uint64_t seed) {
  FreqShard sh;
  Rng rng(seed);
  for (std::size_t i = 0; i < trials; ++i) {
    std::vector<Real> flat = draw_flat(c, rng);
    try {
      RunResult r = run(p, values_from_flat(p, flat));
      ++sh.counts[r.path];
    } catch (const EvalError&) {
      ++sh.errors;
    }
  }
  return sh;
}

FrequencyEstimate merge_shards(const std::vector<FreqShard>& shards, std::size_t trials) {
  FrequencyEstimate est;
  est.trials = trials;
  for (const auto& sh : shards) {
    est.error_trials += sh.errors;
    for (const auto& [path, n] : sh.counts) est.counts[path] += n;
  }
  return est;
}

std::size_t shard_trials(std::size_t trials, std::size_t shard) {
  return trials / kShards + (shard < trials % kShards ? 1 : 0);
}

}  // namespace

FrequencyEstimate estimate_frequencies(const Program& p, const SampleConfig& c,
                                       std::size_t trials, std::uint64_t seed) {
  check_config(p, c);
  StreamSeed root(seed);
  std::vector<FreqShard> shards(kShards);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t s = 0; s < kShards; ++s)
    shards[s] = freq_shard(p, c, shard_trials(trials, s), root.with("freq").with(s).value());
  return merge_shards(shards, trials);
}

FrequencyEstimate estimate_frequencies_serial(const Program& p, const SampleConfig& c,
                                              std::size_t trials, std::uint64_t seed) {
  check_config(p, c);
  StreamSeed root(seed);
  std::vector<FreqShard> shards(kShards);
  for (std::size_t s = 0; s < kShards; ++s)
    shards[s] = freq_shard(p, c, shard_trials(trials, s), root.with("freq").with(s).value());
  return merge_shards(shards, trials);
}

std::map<std::string, Real> planning_frequencies(const Program& p, const SampleConfig& c,
                                                 std::size_t trials, std::uint64_t seed) {
  if (!c.frequency_override.empty()) return c.frequency_override;
  return estimate_frequencies(p, c, trials, seed).frequencies();
}

namespace {

std::vector<Dataset::Row> sample_stratum(const Program& p, const SampleConfig& c,
                                         const std::string& path, long long count,
                                         std::uint64_t seed) {
  std::vector<Dataset::Row> rows;
  rows.reserve(count);
  Rng rng(seed);
  long long budget = std::max<long long>(1'000'000, 10'000 * count);
  for (long long attempts = 0; static_cast<long long>(rows.size()) < count; ++attempts) {
    if (attempts >= budget)
      throw DataError("gave up sampling path '" + path + "' after " + std::to_string(budget) +
                      " attempts; its inputs are too rare");
    std::vector<Real> flat = draw_flat(c, rng);
    try {
      RunResult r = run(p, values_from_flat(p, flat));
      if (r.path == path) rows.push_back({path, std::move(flat), std::move(r.outputs)});
    } catch (const EvalError&) {
    }
  }
  return rows;
}

Dataset build_dataset_impl(const Program& p, const SampleConfig& c,
                           const std::map<std::string, long long>& count, std::uint64_t seed,
                           bool parallel) {
  check_config(p, c);
  std::set<std::string> known;
  for (const auto& t : collect_traces(p)) known.insert(t.path);
  std::vector<std::pair<std::string, long long>> jobs;
  for (const auto& [path, n] : count) {
    if (!known.count(path)) throw DataError("unknown path '" + path + "'");
    if (n < 0) throw DataError("negative sample count for path '" + path + "'");
    if (n > 0) jobs.emplace_back(path, n);
  }

  StreamSeed root(seed);
  std::vector<std::vector<Dataset::Row>> blocks(jobs.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    try {
      blocks[i] = sample_stratum(p, c, jobs[i].first, jobs[i].second,
                                 root.with("stratum").with(jobs[i].first).value());
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  Dataset d;
  d.x_names = flat_input_names(p);
  for (auto& block : blocks)
    for (auto& row : block) d.rows.push_back(std::move(row));
  for (const auto& row : d.rows) {
    if (d.out_width == 0) d.out_width = row.y.size();
    if (row.y.size() != d.out_width)
      throw DataError("output width varies across paths; surrogates need a fixed width");
  }
  return d;
}

}  // namespace

Dataset build_dataset(const Program& p, const SampleConfig& c,
                      const std::map<std::string, long long>& count, std::uint64_t seed) {
  return build_dataset_impl(p, c, count, seed, true);
}

Dataset build_dataset_serial(const Program& p, const SampleConfig& c,
                             const std::map<std::string, long long>& count, std::uint64_t seed) {
  return build_dataset_impl(p, c, count, seed, false);
}

void save_dataset_csv(const Dataset& d, const std::string& file) {
  std::string out = "path";
  for (const auto& n : d.x_names) out += "," + n;
  for (std::size_t k = 0; k < d.out_width; ++k) out += ",y_" + std::to_string(k);
  out += "\n";
  for (const auto& row : d.rows) {
    out += row.path;
    for (Real v : row.x) {
      out += ',';
      append_csv_real(out, v);
    }
    for (Real v : row.y) {
      out += ',';
      append_csv_real(out, v);
    }
    out += '\n';
  }
  std::ofstream f(file, std::ios::binary);
  if (!f || !(f << out)) throw DataError("cannot write " + file);
}

Dataset load_dataset_csv(const std::string& file) {
  std::string text = read_file(file);
  std::vector<std::string_view> lines;
  std::string_view rest = text;
  while (!rest.empty()) {
    std::size_t nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw DataError(file + ": empty dataset");

  auto split = [](std::string_view line) {
    std::vector<std::string_view> fields;
    while (true) {
      std::size_t comma = line.find(',');
      fields.push_back(line.substr(0, comma));
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }
    return fields;
  };

  auto header = split(lines[0]);
  if (header.empty() || header[0] != "path") throw DataError(file + ": header must start with path");
  Dataset d;
  std::size_t col = 1;
  while (col < header.size() && header[col].substr(0, 2) == "x_")
    d.x_names.emplace_back(header[col++]);
  while (col < header.size() && header[col].substr(0, 2) == "y_") {
    ++d.out_width;
    ++col;
  }
  if (col != header.size() || d.x_names.empty() || d.out_width == 0)
    throw DataError(file + ": header must be path, x_ columns, then y_ columns");

  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto fields = split(lines[i]);
    if (fields.size() != 1 + d.x_names.size() + d.out_width)
      throw DataError(file + ": row " + std::to_string(i + 1) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(1 + d.x_names.size() + d.out_width));
    Dataset::Row row;
    row.path = std::string(fields[0]);
    for (std::size_t k = 0; k < d.x_names.size(); ++k)
      row.x.push_back(parse_csv_real(fields[1 + k], file));
    for (std::size_t k = 0; k < d.out_width; ++k)
      row.y.push_back(parse_csv_real(fields[1 + d.x_names.size() + k], file));
    d.rows.push_back(std::move(row));
  }
  std::stable_sort(d.rows.begin(), d.rows.end(),
                   [](const Dataset::Row& a, const Dataset::Row& b) { return a.path < b.path; });
  return d;
}

}  // namespace turaco
