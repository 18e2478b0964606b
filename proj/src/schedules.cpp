#include "sfw/algorithms.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace sfw {

namespace {

template <class E, std::size_t N>
E parse_enum(const std::string& s, const std::array<std::pair<const char*, E>, N>& table, const char* what) {
  for (const auto& [name, value] : table)
    if (s == name) return value;
  throw InvalidArgument(std::string("unknown ") + what + " '" + s + "'");
}

constexpr std::array<std::pair<const char*, Algorithm>, 7> kAlgorithms{{
    {"FW", Algorithm::FW},
    {"AFW", Algorithm::AFW},
    {"PFW", Algorithm::PFW},
    {"ASFW", Algorithm::ASFW},
    {"PSFW", Algorithm::PSFW},
    {"SVRF", Algorithm::SVRF},
    {"ProxSVRG", Algorithm::ProxSVRG},
}};
constexpr std::array<std::pair<const char*, StepRule>, 3> kStepRules{{
    {"Adaptive", StepRule::Adaptive},
    {"ExactLineSearch", StepRule::ExactLineSearch},
    {"Harmonic", StepRule::Harmonic},
}};
constexpr std::array<std::pair<const char*, ScheduleKind>, 3> kSchedules{{
    {"Experimental", ScheduleKind::Experimental},
    {"Theoretical", ScheduleKind::Theoretical},
    {"FullBatch", ScheduleKind::FullBatch},
}};
constexpr std::array<std::pair<const char*, ProxLipschitz>, 2> kProxLipschitz{{
    {"MaxTerm", ProxLipschitz::MaxTerm},
    {"FullPowerIteration", ProxLipschitz::FullPowerIteration},
}};
constexpr std::array<std::pair<const char*, RunStatus>, 5> kStatuses{{
    {"GapConverged", RunStatus::GapConverged},
    {"MaxIterations", RunStatus::MaxIterations},
    {"TimeBudget", RunStatus::TimeBudget},
    {"TargetReached", RunStatus::TargetReached},
    {"ScheduleExhausted", RunStatus::ScheduleExhausted},
}};

template <class E, std::size_t N>
std::string name_of(E value, const std::array<std::pair<const char*, E>, N>& table) {
  for (const auto& [name, v] : table)
    if (v == value) return name;
  return "?";
}

}  // namespace

std::string to_string(Algorithm a) { return name_of(a, kAlgorithms); }
std::string to_string(StepRule r) { return name_of(r, kStepRules); }
std::string to_string(ScheduleKind s) { return name_of(s, kSchedules); }
std::string to_string(ProxLipschitz l) { return name_of(l, kProxLipschitz); }
std::string to_string(RunStatus s) { return name_of(s, kStatuses); }
Algorithm parse_algorithm(const std::string& s) { return parse_enum(s, kAlgorithms, "algorithm"); }
StepRule parse_step_rule(const std::string& s) { return parse_enum(s, kStepRules, "step rule"); }
ScheduleKind parse_schedule_kind(const std::string& s) { return parse_enum(s, kSchedules, "batch schedule"); }
ProxLipschitz parse_prox_lipschitz(const std::string& s) {
  return parse_enum(s, kProxLipschitz, "prox lipschitz estimator");
}
RunStatus parse_run_status(const std::string& s) { return parse_enum(s, kStatuses, "run status"); }

bool is_stochastic_fw(Algorithm a) { return a == Algorithm::ASFW || a == Algorithm::PSFW; }
bool is_deterministic_fw(Algorithm a) {
  return a == Algorithm::FW || a == Algorithm::AFW || a == Algorithm::PFW;
}

BatchSchedule BatchSchedule::experimental(double c0, double base) {
  return BatchSchedule{ScheduleKind::Experimental, c0, base, 0.5};
}
BatchSchedule BatchSchedule::theoretical(double rho) {
  BatchSchedule s;
  s.kind = ScheduleKind::Theoretical;
  s.rho = rho;
  return s;
}
BatchSchedule BatchSchedule::full_batch() {
  BatchSchedule s;
  s.kind = ScheduleKind::FullBatch;
  return s;
}

std::uint64_t batch_size(const BatchSchedule& schedule, long k, Index n) {
  if (k < 1) throw InvalidArgument("batch_size: iteration index must be >= 1");
  double m = 0.0;
  switch (schedule.kind) {
    case ScheduleKind::FullBatch: return static_cast<std::uint64_t>(n);
    case ScheduleKind::Experimental:
      m = std::ceil(schedule.c0 + std::pow(schedule.base, static_cast<double>(k)));
      break;
    case ScheduleKind::Theoretical:
      m = std::ceil(std::pow(1.0 - schedule.rho, -static_cast<double>(2 * k + 2)));
      break;
  }
  if (!(m <= static_cast<double>(kMaxBatchSize)))
    throw ComputationError("batch_size: schedule exceeds 2^53 at k = " + std::to_string(k));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(m));
}

double step_size(const Vector& g, const Vector& d, double lipschitz, double gamma_max, StepRule rule,
                 const StepContext& context) {
  if (g.size() != d.size()) throw DimensionMismatch("step_size: direction", g.size(), d.size());
  if (!(gamma_max > 0.0)) throw InvalidArgument("step_size: gamma_max must be > 0");
  const double d_sq = d.squaredNorm();
  if (d_sq == 0.0) throw InvalidArgument("step_size: degenerate zero direction");
  const double gd = g.dot(d);
  double gamma = 0.0;
  switch (rule) {
    case StepRule::Adaptive:
      if (!(lipschitz > 0.0)) throw InvalidArgument("step_size: Lipschitz constant must be > 0");
      gamma = -gd / (lipschitz * d_sq);
      break;
    case StepRule::ExactLineSearch:
      if (!(context.curvature > 0.0)) throw InvalidArgument("step_size: curvature must be > 0");
      gamma = -gd / context.curvature;
      break;
    case StepRule::Harmonic:
      gamma = 2.0 / (static_cast<double>(context.k) + 2.0);
      break;
  }
  return std::clamp(gamma, 0.0, gamma_max);
}

void validate(const RunConfig& c) {
  if (c.max_iterations < 0) throw InvalidArgument("max_iterations must be >= 0");
  if (!(c.time_budget > 0.0)) throw InvalidArgument("time_budget must be > 0");
  if (!(c.gap_tolerance >= 0.0)) throw InvalidArgument("gap_tolerance must be >= 0");
  if (c.gap_check_period < 1) throw InvalidArgument("gap_check_period must be >= 1");
  if (c.record_stride < 0) throw InvalidArgument("record_stride must be >= 0");
  if (c.step_rule == StepRule::Harmonic && c.algorithm != Algorithm::FW)
    throw InvalidArgument("Harmonic step rule is only valid for FW, not " + to_string(c.algorithm));
  if (is_stochastic_fw(c.algorithm)) {
    const auto& s = c.schedule;
    if (s.kind == ScheduleKind::Theoretical && !(s.rho > 0.0 && s.rho < 1.0))
      throw InvalidArgument("Theoretical schedule requires rho in (0, 1)");
    if (s.kind == ScheduleKind::Experimental && !(s.base > 1.0))
      throw InvalidArgument("Experimental schedule requires base > 1");
    if (s.kind == ScheduleKind::Experimental && !(s.c0 >= 0.0))
      throw InvalidArgument("Experimental schedule requires c0 >= 0");
  }
}

RateConstants theoretical_rho(double omega, double sigma_min, double lipschitz_max, double diameter,
                              double num_vertices) {
  if (!(omega > 0.0) || !(sigma_min > 0.0) || !(lipschitz_max > 0.0) || !(diameter > 0.0) ||
      !(num_vertices >= 1.0))
    throw InvalidArgument("theoretical_rho: constants must be positive");
  const double base = omega * omega * sigma_min / (num_vertices * num_vertices * lipschitz_max * diameter * diameter);
  return RateConstants{std::min(0.5, base / 16.0), std::min(0.5, base / 8.0)};
}

RateConstants theoretical_rho(const Objective& obj, const GeometryConstants& geometry, std::size_t N) {
  return theoretical_rho(geometry.omega, obj.sigma_min(), obj.lipschitz_max(), geometry.diameter,
                         static_cast<double>(N));
}

long svrf_epoch_length(long epoch) {
  if (epoch < 1 || epoch > 55) throw InvalidArgument("svrf_epoch_length: epoch out of range");
  return (1L << (epoch + 3)) - 2;
}

std::uint64_t svrf_batch_size(long inner_k) {
  if (inner_k < 1) throw InvalidArgument("svrf_batch_size: k must be >= 1");
  return 96 * static_cast<std::uint64_t>(inner_k + 1);
}

long prox_svrg_epoch_length(Index n) { return 2 * static_cast<long>(n); }

double prox_svrg_step(double lipschitz) {
  if (!(lipschitz > 0.0)) throw InvalidArgument("prox_svrg_step: L must be > 0");
  return 0.1 / lipschitz;
}

}  // namespace sfw
