#include "sfw/experiment.hpp"

#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

namespace sfw {

namespace {

[[noreturn]] void config_fail(const std::string& where, const std::string& why) {
  throw ConfigError("config field '" + where + "': " + why);
}

void reject_unknown(const Json& j, const std::string& where, const std::set<std::string>& known) {
  if (!j.is_object()) config_fail(where, "expected an object");
  for (const auto& item : j.items())
    if (!known.count(item.key())) config_fail(where + "." + item.key(), "unknown key");
}

template <class T>
void read(const Json& j, const std::string& where, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    config_fail(where + "." + key, e.what());
  }
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

ProblemSpec parse_problem(const Json& j) {
  const std::string where = "problem";
  if (!j.is_object() || j.size() != 1)
    config_fail(where, "expected exactly one of 'synthetic', 'synthetic_regression', 'csv'");
  const auto& [kind, body] = *j.items().begin();
  const std::string w = where + "." + kind;
  if (kind == "synthetic") {
    reject_unknown(body, w, {"n", "p", "l", "u", "seed"});
    SyntheticProblem s;
    read(body, w, "n", s.n);
    read(body, w, "p", s.p);
    read(body, w, "l", s.l);
    read(body, w, "u", s.u);
    read(body, w, "seed", s.seed);
    if (s.n < 1) config_fail(w + ".n", "must be >= 1");
    if (s.p < 1) config_fail(w + ".p", "must be >= 1");
    if (!(s.l < s.u)) config_fail(w, "requires l < u");
    return s;
  }
  if (kind == "synthetic_regression") {
    reject_unknown(body, w, {"n", "p", "seed", "mu", "alpha_fraction"});
    SyntheticRegressionProblem s;
    read(body, w, "n", s.n);
    read(body, w, "p", s.p);
    read(body, w, "seed", s.seed);
    read(body, w, "mu", s.mu);
    read(body, w, "alpha_fraction", s.alpha_fraction);
    if (s.n < 1) config_fail(w + ".n", "must be >= 1");
    if (s.p < 1) config_fail(w + ".p", "must be >= 1");
    if (!(s.mu >= 0.0)) config_fail(w + ".mu", "must be >= 0");
    if (!(s.alpha_fraction > 0.0 && s.alpha_fraction < 1.0)) config_fail(w + ".alpha_fraction", "must lie in (0, 1)");
    return s;
  }
  if (kind == "csv") {
    reject_unknown(body, w,
                   {"path", "target_column", "standardize", "skip_header", "max_rows", "mu", "alpha", "alpha_fraction"});
    CsvProblem c;
    read(body, w, "path", c.path);
    read(body, w, "target_column", c.target_column);
    read(body, w, "standardize", c.standardize);
    read(body, w, "skip_header", c.skip_header);
    read(body, w, "max_rows", c.max_rows);
    read(body, w, "mu", c.mu);
    if (body.contains("alpha")) {
      double a = 0.0;
      read(body, w, "alpha", a);
      c.alpha = a;
    }
    if (body.contains("alpha_fraction")) {
      double f = 0.0;
      read(body, w, "alpha_fraction", f);
      c.alpha_fraction = f;
    }
    if (c.path.empty()) config_fail(w + ".path", "required");
    if (c.alpha.has_value() == c.alpha_fraction.has_value())
      config_fail(w, "set exactly one of 'alpha' and 'alpha_fraction'");
    if (c.alpha && !(*c.alpha > 0.0)) config_fail(w + ".alpha", "must be > 0");
    if (c.alpha_fraction && !(*c.alpha_fraction > 0.0 && *c.alpha_fraction < 1.0))
      config_fail(w + ".alpha_fraction", "must lie in (0, 1)");
    if (!(c.mu >= 0.0)) config_fail(w + ".mu", "must be >= 0");
    if (c.max_rows < 0) config_fail(w + ".max_rows", "must be >= 0");
    return c;
  }
  config_fail(w, "unknown problem kind");
}

Json problem_to_json(const ProblemSpec& spec) {
  return std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SyntheticProblem>) {
          return {{"synthetic", {{"n", s.n}, {"p", s.p}, {"l", s.l}, {"u", s.u}, {"seed", s.seed}}}};
        } else if constexpr (std::is_same_v<T, SyntheticRegressionProblem>) {
          return {{"synthetic_regression",
                   {{"n", s.n}, {"p", s.p}, {"seed", s.seed}, {"mu", s.mu}, {"alpha_fraction", s.alpha_fraction}}}};
        } else {
          Json body = {{"path", s.path},
                       {"target_column", s.target_column},
                       {"standardize", s.standardize},
                       {"skip_header", s.skip_header},
                       {"max_rows", s.max_rows},
                       {"mu", s.mu}};
          if (s.alpha) body["alpha"] = *s.alpha;
          if (s.alpha_fraction) body["alpha_fraction"] = *s.alpha_fraction;
          return {{"csv", body}};
        }
      },
      spec);
}

RunConfig parse_run_config(const Json& j, const std::string& where) {
  try {
    return config_from_json(j, where);
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

std::string sanitize(const std::string& label) {
  std::string out = label;
  for (char& c : out)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  return out;
}

Json tally_json(const CaseTally& t) {
  return {{"A", t.a}, {"B", t.b}, {"C", t.c}, {"D", t.d}, {"drops", t.drops}, {"swaps", t.swaps},
          {"iterations", t.iterations}};
}

}  // namespace

ExperimentConfig parse_experiment(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config parse error at line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  reject_unknown(j, "<root>", {"problem", "algorithms", "output", "reference_solver"});
  ExperimentConfig cfg;
  if (!j.contains("problem")) config_fail("problem", "required");
  cfg.problem = parse_problem(j.at("problem"));
  if (!j.contains("algorithms") || !j.at("algorithms").is_array() || j.at("algorithms").empty())
    config_fail("algorithms", "must be a non-empty array");
  std::set<std::string> labels, files;
  const Json& algs = j.at("algorithms");
  for (std::size_t i = 0; i < algs.size(); ++i) {
    const std::string where = "algorithms[" + std::to_string(i) + "]";
    RunConfig rc = parse_run_config(algs[i], where);
    if (rc.label.empty()) rc.label = to_string(rc.algorithm);
    if (!labels.insert(rc.label).second) config_fail(where + ".label", "duplicate label '" + rc.label + "'");
    if (!files.insert(sanitize(rc.label)).second)
      config_fail(where + ".label", "label '" + rc.label + "' collides with another after file-name sanitizing");
    cfg.algorithms.push_back(std::move(rc));
  }
  read(j, "<root>", "output", cfg.output);
  if (j.contains("reference_solver")) {
    cfg.reference = parse_run_config(j.at("reference_solver"), "reference_solver");
    if (!is_deterministic_fw(cfg.reference.algorithm))
      config_fail("reference_solver.algorithm", "must be a deterministic method (FW, AFW or PFW)");
  }
  return cfg;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return parse_experiment(text);
}

Json experiment_to_json(const ExperimentConfig& config) {
  Json j;
  j["problem"] = problem_to_json(config.problem);
  Json algs = Json::array();
  for (const auto& a : config.algorithms) algs.push_back(config_to_json(a));
  j["algorithms"] = algs;
  j["output"] = config.output;
  j["reference_solver"] = config_to_json(config.reference);
  return j;
}

void override_seed(ExperimentConfig& config, std::uint64_t seed) {
  for (auto& a : config.algorithms) a.seed = seed;
  config.reference.seed = seed;
  std::visit(
      [seed](auto& s) {
        if constexpr (!std::is_same_v<std::decay_t<decltype(s)>, CsvProblem>) s.seed = seed;
      },
      config.problem);
}

Problem build_problem(const ExperimentConfig& config, const std::filesystem::path& base_dir) {
  return std::visit(
      [&](const auto& s) -> Problem {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SyntheticProblem>) {
          return generate_synthetic(s.n, s.p, s.l, s.u, s.seed);
        } else if constexpr (std::is_same_v<T, SyntheticRegressionProblem>) {
          Dataset d = generate_regression_data(s.n, s.p, s.seed);
          const double alpha = binding_radius(Objective::elastic_net(d.A, d.b, s.mu), s.alpha_fraction);
          return build_elastic_net(std::move(d.A), std::move(d.b), s.mu, alpha);
        } else {
          std::filesystem::path path(s.path);
          if (path.is_relative()) path = base_dir / path;
          CsvOptions opts;
          opts.target_column = s.target_column;
          opts.standardize = s.standardize;
          opts.skip_header = s.skip_header;
          opts.max_rows = s.max_rows;
          Dataset d = load_csv_dataset(path, opts);
          const double alpha =
              s.alpha ? *s.alpha : binding_radius(Objective::elastic_net(d.A, d.b, s.mu), *s.alpha_fraction);
          return build_elastic_net(std::move(d.A), std::move(d.b), s.mu, alpha);
        }
      },
      config.problem);
}

ExperimentResult run_experiment(const Problem& problem, const ExperimentConfig& config) {
  ExperimentResult result;
  result.reference = solve_reference(problem.objective, problem.polytope, config.reference);
  for (const auto& rc : config.algorithms) {
    AlgorithmOutcome out;
    out.config = rc;
    try {
      out.trace = run(problem.objective, problem.polytope, rc);
      out.trace->metadata["reference_objective"] = format_double(result.reference.objective);
    } catch (const std::exception& e) {
      out.error = e.what();
    }
    result.outcomes.push_back(std::move(out));
  }
  return result;
}

Json summarize(const Problem& problem, const ExperimentResult& result) {
  const double f_star = result.reference.objective;
  Json j;
  j["reference"] = {{"objective", f_star},
                    {"duality_gap", result.reference.gap},
                    {"iterations", result.reference.iterations},
                    {"status", to_string(result.reference.status)}};
  j["problem"] = {{"objective", to_string(problem.objective.kind())},
                  {"decomposition", problem.objective.decomposition()},
                  {"polytope", problem.polytope.describe()},
                  {"n", problem.objective.num_samples()},
                  {"p", problem.objective.dim()}};
  const VertexId start = problem.polytope.first_vertex().id;
  bool shared = true;
  Json algs = Json::array();
  for (const auto& out : result.outcomes) {
    Json a;
    a["label"] = out.config.label;
    a["algorithm"] = to_string(out.config.algorithm);
    if (!out.trace) {
      a["status"] = "Failed";
      a["error"] = out.error;
      algs.push_back(a);
      continue;
    }
    const RunTrace& t = *out.trace;
    shared = shared && t.start_vertex == start;
    const IterationRecord& last = t.records.back();
    a["status"] = to_string(t.status);
    a["iterations"] = last.k;
    a["wall_seconds"] = last.wall_seconds;
    a["final_objective"] = last.objective;
    a["running_min"] = last.running_min;
    const double tracked = t.algorithm == Algorithm::SVRF ? last.running_min : last.objective;
    a["final_relative_gap"] = relative_gap(tracked, f_star);
    a["cum_stoch_grads"] = last.cum_stoch_grads;
    try {
      const RateFit fit = rate_fit(t, f_star);
      a["rate_fit"] = {{"slope_per_iteration", fit.slope_per_iteration},
                       {"r_squared", fit.r_squared},
                       {"implied_factor", fit.implied_factor},
                       {"window", {fit.window_start, fit.window_end}},
                       {"points", fit.points}};
    } catch (const InvalidArgument& e) {
      a["rate_fit"] = {{"error", e.what()}};
    }
    if (t.algorithm != Algorithm::ProxSVRG) {
      const CaseTally tally = tally_cases(t);
      a["case_tally"] = tally_json(tally);
      Json audits;
      audits["drop_budget_violations"] = drop_budget_violations(t);
      audits["drop_budget_holds"] = drop_step_audit(tally, last.k);
      if (t.algorithm == Algorithm::PSFW || t.algorithm == Algorithm::PFW) {
        const PairwiseAudit pa = pairwise_budget_audit(tally, last.k, problem.polytope.num_vertices());
        audits["pairwise_budget"] = {{"bound", pa.bound}, {"holds", pa.holds}, {"enforced", pa.enforced}};
      }
      a["audits"] = audits;
    }
    Json meta = Json::object();
    for (const auto& [k, v] : t.metadata) meta[k] = v;
    a["metadata"] = meta;
    algs.push_back(a);
  }
  j["shared_start_vertex"] = start;
  j["start_vertex_shared"] = shared;
  j["algorithms"] = algs;
  j["clock"] = "monotonic wall time on the host, standing in for CPU time";
  return j;
}

std::optional<double> time_to_gap(const RunTrace& trace, double f_star, double threshold) {
  const bool use_min = trace.algorithm == Algorithm::SVRF;
  for (const auto& rec : trace.records)
    if (relative_gap(use_min ? rec.running_min : rec.objective, f_star) <= threshold) return rec.wall_seconds;
  return std::nullopt;
}

std::vector<CompareRow> compare_traces(const std::vector<RunTrace>& traces, double f_star) {
  std::vector<CompareRow> rows;
  for (const auto& t : traces) {
    rows.push_back({t.label,
                    {time_to_gap(t, f_star, kCompareThresholds[0]), time_to_gap(t, f_star, kCompareThresholds[1]),
                     time_to_gap(t, f_star, kCompareThresholds[2])}});
  }
  return rows;
}

std::string format_compare_table(const std::vector<CompareRow>& rows) {
  std::size_t width = 9;
  for (const auto& r : rows) width = std::max(width, r.label.size());
  std::ostringstream out;
  auto pad = [](std::string s, std::size_t w, std::size_t visible) {
    return s + std::string(w > visible ? w - visible : 0, ' ');
  };
  out << pad("algorithm", width, 9);
  for (double thr : kCompareThresholds) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "  t(gap<=%.0e)", thr);
    out << buf;
  }
  out << '\n';
  for (const auto& r : rows) {
    out << pad(r.label, width, r.label.size());
    for (const auto& t : r.times) {
      char buf[32];
      if (t) {
        std::snprintf(buf, sizeof buf, "  %12.4g", *t);
        out << buf;
      } else {
        out << "  " << std::string(11, ' ') << kNotReached;
      }
    }
    out << '\n';
  }
  return out.str();
}

std::filesystem::path resolve_output_dir(const std::string& flag, const ExperimentConfig& config) {
  if (!flag.empty()) return flag;
  if (!config.output.empty()) return config.output;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return "sfw_output";
}

std::string trace_csv_name(const std::string& label) { return sanitize(label) + ".trace.csv"; }
std::string trace_json_name(const std::string& label) { return sanitize(label) + ".trace.json"; }

}  // namespace sfw
