#include "turaco/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include <CLI11.hpp>

#include "turaco/alloc.hpp"
#include "turaco/desugar.hpp"
#include "turaco/error.hpp"
#include "turaco/experiment.hpp"
#include "turaco/interp.hpp"
#include "turaco/parser.hpp"
#include "turaco/pretty.hpp"
#include "turaco/sample.hpp"
#include "turaco/surrogate.hpp"
#include "turaco/tilde.hpp"

namespace turaco {
namespace {

std::string g6(Real v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<Real> parse_real_list(const std::string& s) {
  std::vector<Real> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string_view field(s.data() + pos, (comma == std::string::npos ? s.size() : comma) - pos);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    Real v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
      throw DataError("bad number '" + std::string(field) + "' in input list");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

long long parse_ll(std::string_view s, const char* what) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw DataError(std::string("bad ") + what + " '" + std::string(s) + "'");
  return v;
}

// Frequencies the planner uses, plus the path stats that pair them with the
// analyzed complexities.
std::vector<PathStat> gather_stats(const Program& p, const SampleConfig& c, std::size_t trials,
                                   std::uint64_t seed) {
  auto complexities = program_complexities(p);
  auto freqs = planning_frequencies(p, c, trials, seed);
  std::vector<PathStat> stats;
  for (const auto& pc : complexities) {
    auto it = freqs.find(pc.path);
    stats.push_back({pc.path, it == freqs.end() ? 0.0 : it->second, pc.zeta});
  }
  return stats;
}

}  // namespace

std::vector<long long> parse_budgets(const std::string& spec) {
  std::vector<long long> out;
  std::size_t dots = spec.find("..");
  if (dots != std::string::npos) {
    std::size_t colon = spec.find(":x", dots);
    if (colon == std::string::npos)
      throw DataError("budget spec '" + spec + "' is not LO..HI:xK");
    long long lo = parse_ll(std::string_view(spec).substr(0, dots), "budget");
    long long hi = parse_ll(std::string_view(spec).substr(dots + 2, colon - dots - 2), "budget");
    long long k = parse_ll(std::string_view(spec).substr(colon + 2), "budget count");
    if (lo <= 0 || hi < lo || k < 1)
      throw DataError("budget spec '" + spec + "' needs 0 < LO <= HI and K >= 1");
    for (long long i = 0; i < k; ++i) {
      Real t = k == 1 ? 0.0 : static_cast<Real>(i) / static_cast<Real>(k - 1);
      long long v = std::llround(static_cast<Real>(lo) *
                                 std::pow(static_cast<Real>(hi) / static_cast<Real>(lo), t));
      if (out.empty() || out.back() != v) out.push_back(v);
    }
    return out;
  }
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t comma = spec.find(',', pos);
    std::string_view field(spec.data() + pos,
                           (comma == std::string::npos ? spec.size() : comma) - pos);
    long long v = parse_ll(field, "budget");
    if (v <= 0) throw DataError("budgets must be positive");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Toolchain for loop-free stratified programs: enumerate paths, bound per-path "
               "sample complexity, split a training budget, and fit per-path surrogates."};
  app.require_subcommand(1);

  std::string file, config, inputs_arg, method_arg = "complexity", plan_file, data_file;
  std::string model_file, out_file, out_dir = "tables", budgets_arg = "10..1000:x10";
  bool core = false, serial = false;
  Real delta = 0.1;
  long long budget = 0;
  std::uint64_t seed = 42;
  long long trials = 0;  // per-subcommand defaults below
  long long freq_trials = 100000;
  long long draws = 10000;
  TrainOptions train_opt;

  CLI::App* cmd_parse = app.add_subcommand("parse", "Parse a program and pretty-print it");
  cmd_parse->add_option("file", file, "program file")->required();
  cmd_parse->add_flag("--core", core, "desugar to the core form first");

  CLI::App* cmd_run = app.add_subcommand("run", "Run a program on one input");
  cmd_run->add_option("file", file, "program file")->required();
  cmd_run->add_option("--inputs", inputs_arg, "comma-separated input components")->required();

  CLI::App* cmd_paths = app.add_subcommand("paths", "List syntactic paths, with measured "
                                                    "frequencies when a config is given");
  cmd_paths->add_option("file", file, "program file")->required();
  cmd_paths->add_option("--config", config, "input ranges (json)");
  cmd_paths->add_option("--trials", trials, "Monte Carlo draws (default 100000)");
  cmd_paths->add_option("--seed", seed, "RNG seed");

  CLI::App* cmd_complexity =
      app.add_subcommand("complexity", "Per-path sample complexity from the analysis");
  cmd_complexity->add_option("file", file, "program file")->required();

  CLI::App* cmd_allocate = app.add_subcommand("allocate", "Split a training budget across paths");
  cmd_allocate->add_option("file", file, "program file")->required();
  cmd_allocate->add_option("--config", config, "input ranges (json)")->required();
  cmd_allocate->add_option("--delta", delta, "whole-program failure probability");
  cmd_allocate->add_option("--budget", budget, "total sample budget")->required();
  cmd_allocate->add_option("--method", method_arg, "complexity, frequency, or uniform");
  cmd_allocate->add_option("--trials", trials, "Monte Carlo draws when the config has no table");
  cmd_allocate->add_option("--seed", seed, "RNG seed");
  cmd_allocate->add_option("--out", out_file, "also write the plan CSV here");

  CLI::App* cmd_sample = app.add_subcommand("sample", "Draw a stratified dataset for a plan");
  cmd_sample->add_option("file", file, "program file")->required();
  cmd_sample->add_option("--config", config, "input ranges (json)")->required();
  cmd_sample->add_option("--plan", plan_file, "plan CSV from allocate")->required();
  cmd_sample->add_option("--seed", seed, "RNG seed");
  cmd_sample->add_option("--out", out_file, "dataset CSV to write")->required();

  CLI::App* cmd_train = app.add_subcommand("train", "Fit one network per path in a dataset");
  cmd_train->add_option("--data", data_file, "dataset CSV")->required();
  cmd_train->add_option("--out", out_file, "model JSON to write")->required();
  cmd_train->add_option("--width", train_opt.width, "hidden units");
  cmd_train->add_option("--steps", train_opt.steps, "Adam steps");
  cmd_train->add_option("--lr", train_opt.lr, "learning rate");
  cmd_train->add_option("--batch", train_opt.batch, "minibatch size");
  cmd_train->add_option("--seed", seed, "RNG seed");
  cmd_train->add_flag("--serial", serial, "use the serial reference kernels");

  CLI::App* cmd_eval = app.add_subcommand("eval", "Score a trained surrogate on fresh draws");
  cmd_eval->add_option("file", file, "program file")->required();
  cmd_eval->add_option("--model", model_file, "model JSON from train")->required();
  cmd_eval->add_option("--config", config, "input ranges (json)")->required();
  cmd_eval->add_option("--draws", draws, "evaluation draws");
  cmd_eval->add_option("--seed", seed, "RNG seed");

  CLI::App* cmd_experiment =
      app.add_subcommand("experiment", "Budget sweep: allocate, sample, train, and score "
                                       "every method at every budget");
  cmd_experiment->add_option("file", file, "program file")->required();
  cmd_experiment->add_option("--config", config, "input ranges (json)")->required();
  cmd_experiment->add_option("--budgets", budgets_arg, "LO..HI:xK log-spaced, or a comma list");
  cmd_experiment->add_option("--trials", trials, "repetitions per cell (default 5)");
  cmd_experiment->add_option("--delta", delta, "whole-program failure probability");
  cmd_experiment->add_option("--seed", seed, "RNG seed");
  cmd_experiment->add_option("--out", out_file, "report CSV to write");
  cmd_experiment->add_option("--width", train_opt.width, "hidden units");
  cmd_experiment->add_option("--steps", train_opt.steps, "Adam steps");
  cmd_experiment->add_option("--lr", train_opt.lr, "learning rate");
  cmd_experiment->add_option("--batch", train_opt.batch, "minibatch size");
  cmd_experiment->add_option("--draws", draws, "held-out evaluation draws");
  cmd_experiment->add_option("--freq-trials", freq_trials,
                             "Monte Carlo draws when the config has no table");

  CLI::App* cmd_tables = app.add_subcommand("repro-tables", "Per-benchmark stats and predicted "
                                                            "improvement tables for a corpus");
  cmd_tables->add_option("dir", file, "directory of .turaco programs with .json configs")
      ->required();
  cmd_tables->add_option("--out-dir", out_dir, "where to write the tables");
  cmd_tables->add_option("--delta", delta, "whole-program failure probability");
  cmd_tables->add_option("--seed", seed, "RNG seed");
  cmd_tables->add_option("--freq-trials", freq_trials,
                         "Monte Carlo draws when a config has no table");

  std::vector<const char*> argv;
  argv.push_back("turaco");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(cmd_parse)) {
      Program p = parse_file(file);
      out << pretty_print(core ? desugar(p) : p);
    } else if (app.got_subcommand(cmd_run)) {
      Program p = parse_file(file);
      RunResult r = run(p, values_from_flat(p, parse_real_list(inputs_arg)));
      for (Real v : r.outputs) out << "output: " << format_real(v) << "\n";
      out << "path: " << r.path << "\n";
    } else if (app.got_subcommand(cmd_paths)) {
      Program p = parse_file(file);
      auto complexities = program_complexities(p);
      if (config.empty()) {
        out << "path,complexity\n";
        for (const auto& pc : complexities) out << pc.path << "," << g6(pc.zeta) << "\n";
      } else {
        SampleConfig c = load_config(config);
        check_config(p, c);
        std::size_t n = trials > 0 ? static_cast<std::size_t>(trials) : 100000;
        FrequencyEstimate est = estimate_frequencies(p, c, n, seed);
        auto freqs = est.frequencies();
        if (est.error_trials > 0)
          out << "# error_fraction: "
              << g6(static_cast<Real>(est.error_trials) / static_cast<Real>(est.trials)) << "\n";
        out << "path,complexity,frequency\n";
        for (const auto& pc : complexities) {
          auto it = freqs.find(pc.path);
          out << pc.path << "," << g6(pc.zeta) << ","
              << g6(it == freqs.end() ? 0.0 : it->second) << "\n";
        }
      }
    } else if (app.got_subcommand(cmd_complexity)) {
      Program p = parse_file(file);
      out << "path,complexity\n";
      for (const auto& pc : program_complexities(p)) out << pc.path << "," << g6(pc.zeta) << "\n";
    } else if (app.got_subcommand(cmd_allocate)) {
      Program p = parse_file(file);
      SampleConfig c = load_config(config);
      check_config(p, c);
      std::size_t n = trials > 0 ? static_cast<std::size_t>(trials) : 100000;
      Plan plan = plan_budget(gather_stats(p, c, n, seed), delta, method_from_name(method_arg));
      std::vector<long long> counts = integerize(plan, budget);
      out << "path_id,fraction,count\n";
      for (std::size_t i = 0; i < plan.paths.size(); ++i)
        out << plan.paths[i].path << "," << g6(plan.fractions[i]) << "," << counts[i] << "\n";
      if (!out_file.empty()) save_plan_csv(plan, counts, out_file);
    } else if (app.got_subcommand(cmd_sample)) {
      Program p = parse_file(file);
      SampleConfig c = load_config(config);
      Dataset d = build_dataset(p, c, load_plan_counts(plan_file), seed);
      save_dataset_csv(d, out_file);
      out << "wrote " << d.rows.size() << " rows to " << out_file << "\n";
    } else if (app.got_subcommand(cmd_train)) {
      Dataset d = load_dataset_csv(data_file);
      train_opt.parallel = !serial;
      StratifiedSurrogate s = train_surrogate(d, train_opt, seed);
      save_surrogate(s, out_file);
      out << "trained " << s.paths.size() << " path models to " << out_file << "\n";
    } else if (app.got_subcommand(cmd_eval)) {
      Program p = parse_file(file);
      SampleConfig c = load_config(config);
      StratifiedSurrogate s = load_surrogate(model_file);
      EvalStats st = evaluate_surrogate(s, p, c, static_cast<std::size_t>(draws), seed);
      if (st.errored) out << "# errored_draws: " << st.errored << "\n";
      if (st.no_model) out << "# unmodeled_draws: " << st.no_model << "\n";
      out << "path,draws,mae\n";
      for (const auto& [path, mae] : st.path_mae)
        out << path << "," << st.path_draws.at(path) << "," << g6(mae) << "\n";
      out << "overall," << st.scored << "," << g6(st.mae) << "\n";
    } else if (app.got_subcommand(cmd_experiment)) {
      Program p = parse_file(file);
      SampleConfig c = load_config(config);
      ExperimentOptions opt;
      opt.budgets = parse_budgets(budgets_arg);
      opt.trials = trials > 0 ? static_cast<int>(trials) : 5;
      opt.delta = delta;
      opt.train = train_opt;
      opt.eval_draws = static_cast<std::size_t>(draws);
      opt.freq_trials = static_cast<std::size_t>(freq_trials);
      std::string name = std::filesystem::path(file).stem().string();
      ExperimentResult r = run_experiment(p, c, name, opt, seed);
      if (!out_file.empty()) save_report_csv(r, opt, seed, out_file);
      out << "method,geomean_predicted,geomean_empirical\n";
      for (const auto& s : summarize(r))
        out << method_name(s.method) << "," << g6(s.geomean_predicted) << ","
            << g6(s.geomean_empirical) << "\n";
      out << "baseline,predicted_improvement_pct,empirical_improvement_pct\n";
      for (const auto& s : improvements(r))
        out << method_name(s.baseline) << "," << g6(s.predicted_pct) << ","
            << g6(s.empirical_pct) << "\n";
    } else if (app.got_subcommand(cmd_tables)) {
      write_benchmark_tables(file, out_dir, delta, static_cast<std::size_t>(freq_trials), seed);
      out << "wrote " << out_dir << "/benchmark_stats.csv and " << out_dir
          << "/predicted_improvements.csv\n";
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace turaco
