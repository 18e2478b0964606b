#pragma once

#include "sfw/algorithms.hpp"
#include "sfw/diagnostics.hpp"
#include "sfw/trace_io.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sfw {

/// Thrown for malformed experiment files; maps to exit code 2.
class ConfigError : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

/// Ordered-box least squares on standard-normal data.
struct SyntheticProblem {
  Index n = 2000;
  Index p = 50;
  double l = -1.0;
  double u = 1.0;
  std::uint64_t seed = 1;
};

/// Elastic net over an l1 ball on seeded regression data.
struct SyntheticRegressionProblem {
  Index n = 20000;
  Index p = 90;
  std::uint64_t seed = 1;
  double mu = 0.1;
  double alpha_fraction = 0.5;
};

/// Elastic net over an l1 ball on a CSV dataset. Exactly one of alpha and
/// alpha_fraction is set.
struct CsvProblem {
  std::string path;
  Index target_column = 0;
  bool standardize = true;
  bool skip_header = false;
  Index max_rows = 0;
  double mu = 0.1;
  std::optional<double> alpha;
  std::optional<double> alpha_fraction;
};

using ProblemSpec = std::variant<SyntheticProblem, SyntheticRegressionProblem, CsvProblem>;

struct ExperimentConfig {
  ProblemSpec problem;
  std::vector<RunConfig> algorithms;
  std::string output;  // empty: use the environment default
  RunConfig reference = default_reference_config();
};

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "SFW_OUTPUT_DIR";

/// Parses a JSON experiment document. JSON syntax errors report the line;
/// field errors name the path (e.g. "algorithms[1].algorithm").
ExperimentConfig parse_experiment(const std::string& text);
ExperimentConfig load_experiment(const std::filesystem::path& path);
Json experiment_to_json(const ExperimentConfig& config);

/// Overrides every seed in the experiment, including the data generator's.
void override_seed(ExperimentConfig& config, std::uint64_t seed);

/// CSV paths are resolved relative to base_dir.
Problem build_problem(const ExperimentConfig& config, const std::filesystem::path& base_dir);

struct AlgorithmOutcome {
  RunConfig config;
  std::optional<RunTrace> trace;
  std::string error;  // set when the run threw
};

struct ExperimentResult {
  ReferenceSolution reference;
  std::vector<AlgorithmOutcome> outcomes;
};

ExperimentResult run_experiment(const Problem& problem, const ExperimentConfig& config);

/// Reference, statuses, rate fits, case tallies and audits.
Json summarize(const Problem& problem, const ExperimentResult& result);

inline constexpr std::array<double, 3> kCompareThresholds = {1e-2, 1e-4, 1e-6};
inline constexpr const char* kNotReached = "\u2014";

/// Wall time at which the relative gap first drops to the threshold. SVRF
/// traces use the running minimum.
std::optional<double> time_to_gap(const RunTrace& trace, double f_star, double threshold);

struct CompareRow {
  std::string label;
  std::array<std::optional<double>, kCompareThresholds.size()> times;
};

std::vector<CompareRow> compare_traces(const std::vector<RunTrace>& traces, double f_star);
/// Fixed-width table; an unreached threshold prints as kNotReached.
std::string format_compare_table(const std::vector<CompareRow>& rows);

/// Output directory: explicit flag, then config, then $SFW_OUTPUT_DIR, then
/// "sfw_output".
std::filesystem::path resolve_output_dir(const std::string& flag, const ExperimentConfig& config);

/// File names used inside the output directory.
std::string trace_csv_name(const std::string& label);
std::string trace_json_name(const std::string& label);
inline constexpr const char* kSummaryName = "summary.json";
inline constexpr const char* kPlotDataName = "plot_data.csv";

}  // namespace sfw
