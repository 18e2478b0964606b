#include "sfw/commands.hpp"

#include "sfw/experiment.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>

namespace fs = std::filesystem;

namespace sfw {

namespace {

struct GenDataArgs {
  Index n = 0;
  Index p = 0;
  double l = -1.0;
  double u = 1.0;
  std::uint64_t seed = 1;
  std::string out;
};

struct ExperimentArgs {
  std::string config;
  std::string output;
  std::optional<std::uint64_t> seed;
  bool run_missing = false;
  std::string plot_file;
};

fs::path ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error("cannot create output directory '" + dir.string() + "'");
  return dir;
}

int cmd_gen_data(const GenDataArgs& a, std::ostream& out) {
  if (!(a.l < a.u)) throw ConfigError("gen-data: requires --l < --u");
  fs::path dir = a.out;
  if (dir.empty()) {
    const char* env = std::getenv(kOutputDirEnv);
    dir = (env && *env) ? fs::path(env) : fs::path("sfw_output");
  }
  ensure_dir(dir);
  const Problem prob = generate_synthetic(a.n, a.p, a.l, a.u, a.seed);
  const Matrix& A = prob.objective.design();
  const Vector& b = prob.objective.response();
  std::string text;
  text.reserve(static_cast<std::size_t>(A.size()) * 24);
  for (Index i = 0; i < A.rows(); ++i) {
    for (Index j = 0; j < A.cols(); ++j) {
      if (j) text += ',';
      text += format_double(A(i, j));
    }
    text += '\n';
  }
  write_text(dir / "A.csv", text);
  text.clear();
  for (Index i = 0; i < b.size(); ++i) text += format_double(b[i]) + '\n';
  write_text(dir / "b.csv", text);
  const Json meta = {{"generator", "standard normal entries, A filled row-major then b"},
                     {"n", a.n},
                     {"p", a.p},
                     {"l", a.l},
                     {"u", a.u},
                     {"seed", a.seed},
                     {"rng", "mt19937_64 + std::normal_distribution"}};
  write_text(dir / "meta.json", meta.dump(2) + "\n");
  out << "wrote " << (dir / "A.csv").string() << ", " << (dir / "b.csv").string() << ", "
      << (dir / "meta.json").string() << '\n';
  return kExitOk;
}

ExperimentConfig load_with_overrides(const ExperimentArgs& a) {
  ExperimentConfig cfg = load_experiment(a.config);
  if (a.seed) override_seed(cfg, *a.seed);
  return cfg;
}

fs::path config_dir(const std::string& config) {
  const fs::path parent = fs::path(config).parent_path();
  return parent.empty() ? fs::path(".") : parent;
}

int cmd_run(const ExperimentArgs& a, std::ostream& out, std::ostream& err) {
  const ExperimentConfig cfg = load_with_overrides(a);
  const fs::path dir = ensure_dir(resolve_output_dir(a.output, cfg));
  const Problem problem = build_problem(cfg, config_dir(a.config));
  const ExperimentResult result = run_experiment(problem, cfg);
  const double f_star = result.reference.objective;

  std::vector<RunTrace> traces;
  bool failed = false;
  for (const auto& o : result.outcomes) {
    if (!o.trace) {
      failed = true;
      err << "algorithm '" << o.config.label << "' failed: " << o.error << '\n';
      continue;
    }
    write_text(dir / trace_csv_name(o.trace->label), trace_csv(*o.trace, f_star));
    write_text(dir / trace_json_name(o.trace->label), trace_to_json(*o.trace, f_star).dump(1) + "\n");
    traces.push_back(*o.trace);
  }
  write_text(dir / kSummaryName, summarize(problem, result).dump(2) + "\n");
  write_text(dir / kPlotDataName, plot_data_csv(traces));
  write_text(dir / "config.json", experiment_to_json(cfg).dump(2) + "\n");

  out << "reference objective " << format_double(f_star) << " (gap " << result.reference.gap << ", "
      << to_string(result.reference.status) << ")\n";
  out << format_compare_table(compare_traces(traces, f_star));
  out << "outputs in " << dir.string() << '\n';
  return failed ? kExitFailure : kExitOk;
}

// Loads traces written by `run`; returns false with the missing path otherwise.
bool load_traces(const fs::path& dir, const ExperimentConfig& cfg, std::vector<RunTrace>& traces, double& f_star,
                 std::string& missing) {
  const fs::path summary = dir / kSummaryName;
  if (!fs::exists(summary)) {
    missing = summary.string();
    return false;
  }
  f_star = Json::parse(read_text(summary)).at("reference").at("objective").get<double>();
  traces.clear();
  for (const auto& rc : cfg.algorithms) {
    const fs::path p = dir / trace_json_name(rc.label);
    if (!fs::exists(p)) {
      missing = p.string();
      return false;
    }
    traces.push_back(trace_from_json(Json::parse(read_text(p))));
  }
  return true;
}

int cmd_compare_or_plot(const ExperimentArgs& a, bool plot, std::ostream& out, std::ostream& err) {
  const ExperimentConfig cfg = load_with_overrides(a);
  const fs::path dir = resolve_output_dir(a.output, cfg);
  std::vector<RunTrace> traces;
  double f_star = 0.0;
  std::string missing;
  if (!load_traces(dir, cfg, traces, f_star, missing)) {
    if (!a.run_missing) {
      err << "missing trace output '" << missing << "'; run the experiment first or pass --run\n";
      return kExitFailure;
    }
    std::ostringstream quiet;
    const int code = cmd_run(a, quiet, err);
    if (!load_traces(dir, cfg, traces, f_star, missing)) {
      err << "missing trace output '" << missing << "' after running\n";
      return code == kExitOk ? kExitFailure : code;
    }
  }
  if (plot) {
    const fs::path target = a.plot_file.empty() ? dir / kPlotDataName : fs::path(a.plot_file);
    write_text(target, plot_data_csv(traces));
    out << "wrote " << target.string() << '\n';
  } else {
    out << "reference objective " << format_double(f_star) << '\n';
    out << format_compare_table(compare_traces(traces, f_star));
  }
  return kExitOk;
}

void add_experiment_options(CLI::App* cmd, ExperimentArgs& a) {
  cmd->add_option("config", a.config, "Experiment JSON file")->required();
  cmd->add_option("--output,-o", a.output, "Output directory (overrides config and $SFW_OUTPUT_DIR)");
  cmd->add_option("--seed", a.seed, "Override every seed in the config");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic Frank-Wolfe experiment runner"};
  app.require_subcommand(1);

  GenDataArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Write synthetic A.csv, b.csv and meta.json");
  gen_cmd->add_option("--n", gen.n, "Number of samples")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--p", gen.p, "Dimension")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--l", gen.l, "Box lower bound (recorded in meta.json)");
  gen_cmd->add_option("--u", gen.u, "Box upper bound (recorded in meta.json)");
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_option("--out", gen.out, "Output directory (default $SFW_OUTPUT_DIR or sfw_output)");

  ExperimentArgs run_args, compare_args, plot_args;
  auto* run_cmd = app.add_subcommand("run", "Run the reference solver and every configured algorithm");
  add_experiment_options(run_cmd, run_args);
  auto* compare_cmd = app.add_subcommand("compare", "Time-to-gap table from stored traces");
  add_experiment_options(compare_cmd, compare_args);
  compare_cmd->add_flag("--run", compare_args.run_missing, "Produce missing traces first");
  auto* plot_cmd = app.add_subcommand("plot-data", "Write objective and running minimum against wall time");
  add_experiment_options(plot_cmd, plot_args);
  plot_cmd->add_flag("--run", plot_args.run_missing, "Produce missing traces first");
  plot_cmd->add_option("--file", plot_args.plot_file, "Destination CSV (default <output>/plot_data.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*gen_cmd) return cmd_gen_data(gen, out);
    if (*run_cmd) return cmd_run(run_args, out, err);
    if (*compare_cmd) return cmd_compare_or_plot(compare_args, false, out, err);
    if (*plot_cmd) return cmd_compare_or_plot(plot_args, true, out, err);
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace sfw
