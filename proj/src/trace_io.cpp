#include "sfw/trace_io.hpp"

#include "sfw/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace sfw {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// RFC 4180 quoting for free-text fields.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string step_label(const IterationRecord& rec) { return rec.step.label(); }

std::string csv_rows(const RunTrace& trace, double f_star, bool with_clock) {
  std::ostringstream out;
  if (with_clock) {
    out << kTraceCsvHeader << '\n';
  } else {
    out << "k,objective,gap_vs_reference,step_kind,gamma,batch_size,cum_stoch_grads\n";
  }
  for (const auto& rec : trace.records) {
    out << rec.k << ',';
    if (with_clock) out << format_double(rec.wall_seconds) << ',';
    out << format_double(rec.objective) << ',' << format_double(relative_gap(rec.objective, f_star)) << ','
        << step_label(rec) << ',' << format_double(rec.gamma) << ',' << rec.batch_size << ','
        << rec.cum_stoch_grads << '\n';
  }
  return out.str();
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

[[noreturn]] void bad_field(const std::string& where, const std::string& key, const std::string& why) {
  throw InvalidArgument("config field '" + where + "." + key + "': " + why);
}

template <class T>
T get_field(const Json& j, const std::string& where, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    bad_field(where, key, e.what());
  }
}

}  // namespace

std::string trace_csv(const RunTrace& trace, double f_star) { return csv_rows(trace, f_star, true); }

std::string trace_csv_without_clock(const RunTrace& trace, double f_star) {
  return csv_rows(trace, f_star, false);
}

Json trace_to_json(const RunTrace& trace, double f_star) {
  Json j;
  j["label"] = trace.label;
  j["algorithm"] = to_string(trace.algorithm);
  j["status"] = to_string(trace.status);
  j["start_vertex"] = trace.start_vertex;
  j["reference_objective"] = f_star;
  Json meta = Json::object();
  for (const auto& [k, v] : trace.metadata) meta[k] = v;
  j["metadata"] = meta;
  Json weights = Json::array();
  for (const auto& [id, w] : trace.final_weights) weights.push_back({{"vertex", id}, {"weight", w}});
  j["final_weights"] = weights;
  Json rows = Json::array();
  for (const auto& rec : trace.records) {
    rows.push_back({{"k", rec.k},
                    {"wall_seconds", rec.wall_seconds},
                    {"objective", rec.objective},
                    {"running_min", rec.running_min},
                    {"gap_vs_reference", number_or_null(relative_gap(rec.objective, f_star))},
                    {"duality_gap", number_or_null(rec.duality_gap)},
                    {"step_kind", step_label(rec)},
                    {"gamma", rec.gamma},
                    {"gamma_max", number_or_null(rec.gamma_max)},
                    {"batch_size", rec.batch_size},
                    {"cum_stoch_grads", rec.cum_stoch_grads},
                    {"active_set_size", rec.active_set_size}});
  }
  j["rows"] = rows;
  return j;
}

RunTrace trace_from_json(const Json& j) {
  try {
    RunTrace t;
    t.label = j.at("label").get<std::string>();
    t.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    t.status = parse_run_status(j.at("status").get<std::string>());
    t.start_vertex = j.at("start_vertex").get<VertexId>();
    for (const auto& [k, v] : j.at("metadata").items()) t.metadata[k] = v.get<std::string>();
    for (const auto& row : j.at("rows")) {
      IterationRecord rec;
      rec.k = row.at("k").get<long>();
      rec.wall_seconds = row.at("wall_seconds").get<double>();
      rec.objective = row.at("objective").get<double>();
      rec.running_min = row.at("running_min").get<double>();
      rec.gamma = row.at("gamma").get<double>();
      if (!row.at("gamma_max").is_null()) rec.gamma_max = row.at("gamma_max").get<double>();
      if (!row.at("duality_gap").is_null()) rec.duality_gap = row.at("duality_gap").get<double>();
      rec.batch_size = row.at("batch_size").get<std::uint64_t>();
      rec.cum_stoch_grads = row.at("cum_stoch_grads").get<std::uint64_t>();
      rec.active_set_size = row.at("active_set_size").get<std::size_t>();
      t.records.push_back(rec);
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed trace JSON: ") + e.what());
  }
}

Json config_to_json(const RunConfig& c) {
  Json j;
  j["label"] = c.label;
  j["algorithm"] = to_string(c.algorithm);
  j["step_rule"] = to_string(c.step_rule);
  j["schedule"] = {{"kind", to_string(c.schedule.kind)},
                   {"c0", c.schedule.c0},
                   {"base", c.schedule.base},
                   {"rho", c.schedule.rho}};
  j["max_iterations"] = c.max_iterations;
  j["time_budget"] = number_or_null(c.time_budget);
  j["gap_tolerance"] = c.gap_tolerance;
  j["gap_check_period"] = c.gap_check_period;
  j["seed"] = c.seed;
  j["objective_target"] = c.objective_target ? Json(*c.objective_target) : Json(nullptr);
  j["record_stride"] = c.record_stride;
  j["prox_lipschitz"] = to_string(c.prox_lipschitz);
  j["exact_full_batches"] = c.exact_full_batches;
  return j;
}

RunConfig config_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw InvalidArgument("config '" + where + "' must be a JSON object");
  static const std::set<std::string> known = {"label",          "algorithm",        "step_rule",
                                              "schedule",       "max_iterations",   "time_budget",
                                              "gap_tolerance",  "gap_check_period", "seed",
                                              "objective_target", "record_stride",  "prox_lipschitz",
                                              "exact_full_batches"};
  for (const auto& item : j.items())
    if (!known.count(item.key())) bad_field(where, item.key(), "unknown key");

  RunConfig c;
  auto parse_enum = [&](const char* key, auto parser, auto& out) {
    if (!j.contains(key)) return;
    const auto text = get_field<std::string>(j, where, key);
    try {
      out = parser(text);
    } catch (const InvalidArgument& e) {
      bad_field(where, key, e.what());
    }
  };
  if (j.contains("label")) c.label = get_field<std::string>(j, where, "label");
  parse_enum("algorithm", &parse_algorithm, c.algorithm);
  parse_enum("step_rule", &parse_step_rule, c.step_rule);
  parse_enum("prox_lipschitz", &parse_prox_lipschitz, c.prox_lipschitz);
  if (j.contains("schedule")) {
    const Json& s = j.at("schedule");
    const std::string sw = where + ".schedule";
    if (s.is_string()) {
      try {
        c.schedule.kind = parse_schedule_kind(s.get<std::string>());
      } catch (const InvalidArgument& e) {
        bad_field(where, "schedule", e.what());
      }
    } else if (s.is_object()) {
      for (const auto& item : s.items())
        if (item.key() != "kind" && item.key() != "c0" && item.key() != "base" && item.key() != "rho")
          bad_field(sw, item.key(), "unknown key");
      if (s.contains("kind")) {
        try {
          c.schedule.kind = parse_schedule_kind(get_field<std::string>(s, sw, "kind"));
        } catch (const InvalidArgument& e) {
          bad_field(sw, "kind", e.what());
        }
      }
      if (s.contains("c0")) c.schedule.c0 = get_field<double>(s, sw, "c0");
      if (s.contains("base")) c.schedule.base = get_field<double>(s, sw, "base");
      if (s.contains("rho")) c.schedule.rho = get_field<double>(s, sw, "rho");
    } else {
      bad_field(where, "schedule", "expected a string or object");
    }
  }
  if (j.contains("max_iterations")) c.max_iterations = get_field<long>(j, where, "max_iterations");
  if (j.contains("time_budget") && !j.at("time_budget").is_null())
    c.time_budget = get_field<double>(j, where, "time_budget");
  if (j.contains("gap_tolerance")) c.gap_tolerance = get_field<double>(j, where, "gap_tolerance");
  if (j.contains("gap_check_period")) c.gap_check_period = get_field<long>(j, where, "gap_check_period");
  if (j.contains("seed")) c.seed = get_field<std::uint64_t>(j, where, "seed");
  if (j.contains("objective_target") && !j.at("objective_target").is_null())
    c.objective_target = get_field<double>(j, where, "objective_target");
  if (j.contains("record_stride")) c.record_stride = get_field<long>(j, where, "record_stride");
  if (j.contains("exact_full_batches")) c.exact_full_batches = get_field<bool>(j, where, "exact_full_batches");
  try {
    validate(c);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument("config '" + where + "': " + e.what());
  }
  return c;
}

std::string plot_data_csv(const std::vector<RunTrace>& traces) {
  std::ostringstream out;
  out << "label,k,wall_seconds,objective,running_min\n";
  for (const auto& t : traces)
    for (const auto& rec : t.records)
      out << csv_field(t.label) << ',' << rec.k << ',' << format_double(rec.wall_seconds) << ','
          << format_double(rec.objective) << ',' << format_double(rec.running_min) << '\n';
  return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path.string() + "' for writing");
  f << text;
  if (!f) throw Error("write failed for '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace sfw
