#pragma once

#include "sfw/active_set.hpp"
#include "sfw/polytope.hpp"
#include "sfw/problems.hpp"

#include <chrono>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sfw {

enum class Algorithm { FW, AFW, PFW, ASFW, PSFW, SVRF, ProxSVRG };
enum class StepRule { Adaptive, ExactLineSearch, Harmonic };
enum class ScheduleKind { Experimental, Theoretical, FullBatch };
enum class ProxLipschitz { MaxTerm, FullPowerIteration };
enum class RunStatus { GapConverged, MaxIterations, TimeBudget, TargetReached, ScheduleExhausted };

std::string to_string(Algorithm a);
std::string to_string(StepRule r);
std::string to_string(ScheduleKind s);
std::string to_string(ProxLipschitz l);
std::string to_string(RunStatus s);
Algorithm parse_algorithm(const std::string& s);
StepRule parse_step_rule(const std::string& s);
ScheduleKind parse_schedule_kind(const std::string& s);
ProxLipschitz parse_prox_lipschitz(const std::string& s);
RunStatus parse_run_status(const std::string& s);

bool is_stochastic_fw(Algorithm a);
bool is_deterministic_fw(Algorithm a);

/// Per-iteration sample count m^(k).
struct BatchSchedule {
  ScheduleKind kind = ScheduleKind::Experimental;
  double c0 = 100.0;   // Experimental: ceil(c0 + base^k)
  double base = 1.04;
  double rho = 0.5;    // Theoretical: ceil((1 - rho)^-(2k + 2))

  static BatchSchedule experimental(double c0 = 100.0, double base = 1.04);
  static BatchSchedule theoretical(double rho);
  static BatchSchedule full_batch();
};

/// Batch sizes above this are rejected (not exactly representable in a double).
inline constexpr std::uint64_t kMaxBatchSize = std::uint64_t{1} << 53;

/// m^(k) for k >= 1; FullBatch returns n. Throws ComputationError beyond
/// kMaxBatchSize.
std::uint64_t batch_size(const BatchSchedule& schedule, long k, Index n);

struct RunConfig {
  std::string label;
  Algorithm algorithm = Algorithm::ASFW;
  StepRule step_rule = StepRule::Adaptive;
  BatchSchedule schedule;
  long max_iterations = 10000;
  double time_budget = std::numeric_limits<double>::infinity();  // seconds
  double gap_tolerance = 0.0;
  long gap_check_period = 50;
  std::uint64_t seed = 1;
  /// Stop once F(x) <= target (TargetReached).
  std::optional<double> objective_target;
  /// Prox-SVRG records one trace row per stride inner steps; 0 picks n/10.
  long record_stride = 0;
  ProxLipschitz prox_lipschitz = ProxLipschitz::MaxTerm;
  /// Replace with-replacement batches by the exact full index set once m >= n.
  bool exact_full_batches = false;
};

/// Throws InvalidArgument on inconsistent settings (e.g. Harmonic with ASFW).
void validate(const RunConfig& config);

struct IterationRecord {
  long k = 0;
  double wall_seconds = 0.0;
  double objective = 0.0;
  double running_min = 0.0;
  double duality_gap = std::numeric_limits<double>::quiet_NaN();
  StepKind step;
  double gamma = 0.0;
  double gamma_max = 0.0;
  std::uint64_t batch_size = 0;
  std::uint64_t cum_stoch_grads = 0;
  std::size_t active_set_size = 0;
  /// <g^(k), d^(k)> for the step taken.
  double directional_derivative = std::numeric_limits<double>::quiet_NaN();
  /// F^(k)(x^(k+1)) - F^(k)(x^(k)) on the step's own batch.
  double surrogate_change = std::numeric_limits<double>::quiet_NaN();
};

struct RunTrace {
  std::string label;
  Algorithm algorithm = Algorithm::ASFW;
  std::vector<IterationRecord> records;
  RunStatus status = RunStatus::MaxIterations;
  VertexId start_vertex = 0;
  Vector final_point;
  std::vector<std::pair<VertexId, double>> final_weights;
  std::map<std::string, std::string> metadata;
};

/// Monotonic stopwatch that only accumulates while running.
class Stopwatch {
public:
  void start() {
    if (!running_) {
      begin_ = std::chrono::steady_clock::now();
      running_ = true;
    }
  }
  void stop() {
    if (running_) {
      elapsed_ += std::chrono::steady_clock::now() - begin_;
      running_ = false;
    }
  }
  double seconds() const {
    auto total = elapsed_;
    if (running_) total += std::chrono::steady_clock::now() - begin_;
    return std::chrono::duration<double>(total).count();
  }

private:
  std::chrono::steady_clock::duration elapsed_{};
  std::chrono::steady_clock::time_point begin_{};
  bool running_ = false;
};

struct StepContext {
  long k = 1;
  /// d' H d of the (sampled) objective; needed by ExactLineSearch.
  double curvature = std::numeric_limits<double>::quiet_NaN();
};

/// gamma in [0, gamma_max]. Adaptive: -<g,d> / (L ||d||^2); ExactLineSearch:
/// -<g,d> / curvature; Harmonic: 2 / (k + 2). Throws on d = 0.
double step_size(const Vector& g, const Vector& d, double lipschitz, double gamma_max, StepRule rule,
                 const StepContext& context);

/// Mutable state of one active-set run.
struct SolverState {
  VertexRepresentation rep;
  Rng rng;
  std::uint64_t cum_stoch_grads = 0;

  SolverState(const Vertex& start, std::uint64_t seed) : rep(start), rng(seed) {}
};

/// One step's record plus what the diagnostics need to re-evaluate it.
struct StepResult {
  IterationRecord record;
  SampleBatch batch;
  Vector direction;
};

StepResult asfw_step(SolverState& state, const Objective& obj, const Polytope& poly,
                     const RunConfig& config, long k);
StepResult psfw_step(SolverState& state, const Objective& obj, const Polytope& poly,
                     const RunConfig& config, long k);

// Deterministic baselines using exact gradients.
StepResult fw_step(SolverState& state, const Objective& obj, const Polytope& poly,
                   const RunConfig& config, long k);
StepResult afw_step(SolverState& state, const Objective& obj, const Polytope& poly,
                    const RunConfig& config, long k);
StepResult pfw_step(SolverState& state, const Objective& obj, const Polytope& poly,
                    const RunConfig& config, long k);

/// Runs the configured algorithm from the polytope's first vertex.
RunTrace run(const Objective& obj, const Polytope& poly, const RunConfig& config);

/// Epoch-based variance-reduced Frank-Wolfe: step 2/(k+1), batch 96(k+1),
/// epoch t has 2^(t+3) - 2 inner iterations.
RunTrace svrf_run(const Objective& obj, const Polytope& poly, const RunConfig& config);
long svrf_epoch_length(long epoch);
std::uint64_t svrf_batch_size(long inner_k);

/// Proximal SVRG with projection: epoch length 2n, step 0.1/L, one sample
/// per inner step.
RunTrace prox_svrg_run(const Objective& obj, const Polytope& poly, const RunConfig& config);
long prox_svrg_epoch_length(Index n);
double prox_svrg_step(double lipschitz);

struct RateConstants {
  double rho = 0.0;    // away-step schedule constant
  double kappa = 0.0;  // pairwise schedule constant
};

/// rho = min{1/2, Omega^2 sigma_F / (16 N^2 L_F D^2)}, kappa uses 8 in place of 16.
RateConstants theoretical_rho(double omega, double sigma_min, double lipschitz_max, double diameter,
                              double num_vertices);
RateConstants theoretical_rho(const Objective& obj, const GeometryConstants& geometry, std::size_t N);

/// F* estimate: deterministic AFW with exact line search to a 1e-10 gap.
struct ReferenceSolution {
  double objective = 0.0;
  double gap = 0.0;
  long iterations = 0;
  Vector point;
  RunStatus status = RunStatus::MaxIterations;
};

RunConfig default_reference_config();
ReferenceSolution solve_reference(const Objective& obj, const Polytope& poly,
                                  const RunConfig& config = default_reference_config());

/// Exact FW duality gap max_v <grad F(x), x - v>.
double duality_gap(const Objective& obj, const Polytope& poly, const Vector& x);

}  // namespace sfw
