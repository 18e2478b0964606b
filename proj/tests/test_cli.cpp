#include "sfw/commands.hpp"
#include "sfw/experiment.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sfw;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sfw_bench");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "sfw_unit_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

// Four algorithms on a small ordered-box problem.
const char* kSmallConfig = R"({
  "problem": {"synthetic": {"n": 200, "p": 8, "l": -1, "u": 1, "seed": 3}},
  "algorithms": [
    {"label": "asfw", "algorithm": "ASFW", "max_iterations": 60},
    {"label": "psfw", "algorithm": "PSFW", "max_iterations": 60},
    {"label": "svrf", "algorithm": "SVRF", "max_iterations": 60},
    {"label": "prox", "algorithm": "ProxSVRG", "max_iterations": 800}
  ]
})";

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "experiment.json";
  write_text(p, text);
  return p;
}

std::string without_clock(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    const auto first = line.find(',');
    const auto second = line.find(',', first + 1);
    out += line.substr(0, first) + line.substr(second) + "\n";
  }
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("gen-data writes the requested shapes deterministically") {
    const fs::path a = scratch("gen_a"), b = scratch("gen_b");
    REQUIRE(cli({"gen-data", "--n", "30", "--p", "4", "--seed", "1", "--out", a.string()}).code == 0);
    REQUIRE(cli({"gen-data", "--n", "30", "--p", "4", "--seed", "1", "--out", b.string()}).code == 0);
    const std::string A = read_text(a / "A.csv");
    CHECK(count_lines(A) == 30);
    CHECK(std::count(A.begin(), A.begin() + static_cast<long>(A.find('\n')), ',') == 3);
    CHECK(count_lines(read_text(a / "b.csv")) == 30);
    const Json meta = Json::parse(read_text(a / "meta.json"));
    CHECK(meta.at("n") == 30);
    CHECK(meta.at("seed") == 1);
    for (const char* f : {"A.csv", "b.csv", "meta.json"}) CHECK(read_text(a / f) == read_text(b / f));
  }

  TEST_CASE("gen-data matches the library generator") {
    const fs::path dir = scratch("gen_lib");
    REQUIRE(cli({"gen-data", "--n", "5", "--p", "2", "--seed", "9", "--out", dir.string()}).code == 0);
    const Problem prob = generate_synthetic(5, 2, -1, 1, 9);
    std::istringstream in(read_text(dir / "A.csv"));
    std::string first;
    std::getline(in, first);
    CHECK(first == format_double(prob.objective.design()(0, 0)) + "," + format_double(prob.objective.design()(0, 1)));
  }

  TEST_CASE("usage errors exit with code 2") {
    CHECK(cli({"gen-data", "--n", "0", "--p", "3"}).code == 2);
    CHECK(cli({"gen-data", "--p", "3"}).code == 2);
    CHECK(cli({"gen-data", "--n", "3", "--p", "3", "--l", "1", "--u", "0"}).code == 2);
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"--help"}).code == 0);

    const fs::path dir = scratch("usage");
    std::string bad = kSmallConfig;
    bad.replace(bad.find("\"PSFW\""), 6, "\"SFW\"");
    const CliResult unknown = cli({"run", write_config(dir, bad).string(), "-o", dir.string()});
    CHECK(unknown.code == 2);
    CHECK(unknown.err.find("algorithms[1].algorithm") != std::string::npos);

    const CliResult syntax = cli({"run", write_config(dir, "{\n  \"problem\": ,\n}").string()});
    CHECK(syntax.code == 2);
    CHECK(syntax.err.find("line 2") != std::string::npos);

    const CliResult missing = cli({"run", (dir / "absent.json").string()});
    CHECK(missing.code == 2);
  }

  TEST_CASE("run, rerun, compare and plot-data") {
    const fs::path dir = scratch("run");
    const fs::path cfg = write_config(dir, kSmallConfig);
    const fs::path out1 = dir / "out1", out2 = dir / "out2";
    const CliResult first = cli({"run", cfg.string(), "-o", out1.string()});
    REQUIRE(first.code == 0);
    CHECK(first.out.find("reference objective") != std::string::npos);
    REQUIRE(cli({"run", cfg.string(), "-o", out2.string()}).code == 0);

    for (const char* label : {"asfw", "psfw", "svrf", "prox"}) {
      const std::string csv = read_text(out1 / trace_csv_name(label));
      CHECK(csv.rfind(kTraceCsvHeader, 0) == 0);
      CHECK(without_clock(csv) == without_clock(read_text(out2 / trace_csv_name(label))));
      const RunTrace t = trace_from_json(Json::parse(read_text(out1 / trace_json_name(label))));
      CHECK(count_lines(csv) == t.records.size() + 1);
      CHECK(t.label == label);
    }
    const Json summary = Json::parse(read_text(out1 / kSummaryName));
    CHECK(summary.at("algorithms").size() == 4);
    CHECK(summary.at("start_vertex_shared") == true);
    CHECK(summary.at("shared_start_vertex") == 0);
    CHECK(fs::exists(out1 / kPlotDataName));

    const CliResult cmp = cli({"compare", cfg.string(), "-o", out1.string()});
    CHECK(cmp.code == 0);
    for (const char* label : {"asfw", "psfw", "svrf", "prox"}) CHECK(cmp.out.find(label) != std::string::npos);

    const fs::path plot = dir / "plot.csv";
    CHECK(cli({"plot-data", cfg.string(), "-o", out1.string(), "--file", plot.string()}).code == 0);
    CHECK(read_text(plot).rfind("label,k,wall_seconds,objective,running_min\n", 0) == 0);
  }

  TEST_CASE("compare without traces") {
    const fs::path dir = scratch("compare");
    const fs::path cfg = write_config(dir, R"({
      "problem": {"synthetic": {"n": 50, "p": 4, "seed": 1}},
      "algorithms": [{"algorithm": "ASFW", "max_iterations": 20}]
    })");
    CHECK(cli({"compare", cfg.string(), "-o", (dir / "out").string()}).code == 1);
    const CliResult ran = cli({"compare", cfg.string(), "-o", (dir / "out").string(), "--run"});
    CHECK(ran.code == 0);
    // One algorithm, one row under the header.
    CHECK(count_lines(ran.out) == 1 + 2);
  }

  TEST_CASE("unreached thresholds print a dash") {
    RunTrace fast, stalled;
    fast.label = "fast";
    stalled.label = "stalled";
    for (long k = 0; k < 5; ++k) {
      IterationRecord r;
      r.k = k;
      r.wall_seconds = 0.1 * static_cast<double>(k);
      r.objective = r.running_min = 1.0 + std::pow(10.0, -2.0 * static_cast<double>(k));
      fast.records.push_back(r);
      r.objective = r.running_min = 1.5;
      stalled.records.push_back(r);
    }
    const auto rows = compare_traces({fast, stalled}, 1.0);
    CHECK(rows[0].times[0].has_value());
    CHECK(*rows[0].times[1] == doctest::Approx(0.2));
    CHECK_FALSE(rows[1].times[0].has_value());
    const std::string table = format_compare_table(rows);
    CHECK(table.find(kNotReached) != std::string::npos);
    CHECK(table.find("stalled") != std::string::npos);
  }

  TEST_CASE("experiment configs round-trip") {
    const ExperimentConfig a = parse_experiment(kSmallConfig);
    const Json once = experiment_to_json(a);
    const Json twice = experiment_to_json(parse_experiment(once.dump()));
    CHECK(once == twice);
    CHECK(a.algorithms[3].algorithm == Algorithm::ProxSVRG);

    ExperimentConfig b = a;
    override_seed(b, 77);
    for (const auto& rc : b.algorithms) CHECK(rc.seed == 77);
    CHECK(std::get<SyntheticProblem>(b.problem).seed == 77);
  }

  TEST_CASE("config validation names the field") {
    auto error_of = [](const std::string& text) {
      try {
        parse_experiment(text);
      } catch (const ConfigError& e) {
        return std::string(e.what());
      }
      return std::string();
    };
    CHECK(error_of(R"({"problem": {"synthetic": {}}, "algorithms": [{"algorithm": "ASFW", "bogus": 1}]})")
              .find("algorithms[0].bogus") != std::string::npos);
    CHECK(error_of(R"({"problem": {"synthetic": {"n": "ten"}}, "algorithms": [{"algorithm": "ASFW"}]})")
              .find("problem.synthetic.n") != std::string::npos);
    CHECK_FALSE(error_of(R"({"problem": {"synthetic": {}}, "algorithms": []})").empty());
    CHECK_FALSE(
        error_of(R"({"problem": {"synthetic": {}}, "algorithms": [{"algorithm": "ASFW"}, {"algorithm": "ASFW"}]})")
            .empty());
    CHECK_FALSE(error_of(R"({"problem": {"synthetic": {}}, "algorithms": [{"algorithm": "ASFW", "step_rule": "Harmonic"}]})")
                    .empty());
  }

  TEST_CASE("output directory resolution") {
    ExperimentConfig cfg = parse_experiment(kSmallConfig);
    CHECK(resolve_output_dir("flag", cfg) == fs::path("flag"));
    cfg.output = "from_config";
    CHECK(resolve_output_dir("", cfg) == fs::path("from_config"));
    cfg.output.clear();
    ::setenv(kOutputDirEnv, "from_env", 1);
    CHECK(resolve_output_dir("", cfg) == fs::path("from_env"));
    ::unsetenv(kOutputDirEnv);
    CHECK(resolve_output_dir("", cfg) == fs::path("sfw_output"));
  }
}
