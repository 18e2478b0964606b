#pragma once

#include "sfw/algorithms.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace sfw {

using Json = nlohmann::ordered_json;

/// Shortest round-trip decimal form (%.17g); "nan"/"inf" spelled out.
std::string format_double(double v);

inline constexpr const char* kTraceCsvHeader =
    "k,wall_seconds,objective,gap_vs_reference,step_kind,gamma,batch_size,cum_stoch_grads";

/// One header line plus one row per record. gap_vs_reference is the
/// relative gap of the objective against f_star.
std::string trace_csv(const RunTrace& trace, double f_star);

/// Same rows with the wall_seconds column removed; used for determinism checks.
std::string trace_csv_without_clock(const RunTrace& trace, double f_star);

Json trace_to_json(const RunTrace& trace, double f_star);

/// Inverse of trace_to_json for the fields a comparison needs: label,
/// algorithm, status, start vertex, metadata and the per-row clock,
/// objective, running minimum, step size and counters.
RunTrace trace_from_json(const Json& j);

Json config_to_json(const RunConfig& config);
/// Unknown keys and bad values throw InvalidArgument naming `where`.field.
RunConfig config_from_json(const Json& j, const std::string& where);

/// label,k,wall_seconds,objective,running_min for every record of every trace.
std::string plot_data_csv(const std::vector<RunTrace>& traces);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace sfw
