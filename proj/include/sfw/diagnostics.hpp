#pragma once

#include "sfw/algorithms.hpp"

#include <cstdint>
#include <vector>

namespace sfw {

/// (f - f_star) / |f_star|, or f - f_star when f_star == 0.
double relative_gap(double f, double f_star);

/// Step-size regimes of an away-step iteration.
///   A: gamma_max >= 1, gamma < 1      B: gamma_max >= 1, gamma >= 1
///   C: gamma_max < 1, gamma < gamma_max   D: gamma_max < 1, gamma = gamma_max
enum class StepCase { A, B, C, D };

std::string to_string(StepCase c);

inline constexpr double kCaseTolerance = 1e-12;

/// Throws InvalidArgument unless 0 <= gamma <= gamma_max (+ tolerance).
StepCase classify_step(double gamma, double gamma_max);

struct CaseTally {
  std::uint64_t a = 0, b = 0, c = 0, d = 0;
  std::uint64_t drops = 0;
  std::uint64_t swaps = 0;
  std::uint64_t iterations = 0;
};

/// Tallies every record with k >= 1 of an active-set run.
CaseTally tally_cases(const RunTrace& trace);

/// 2 * drops <= k + 1.
bool drop_step_audit(const CaseTally& tally, long k);

struct PairwiseAudit {
  double bound = 0.0;   // (1 - 1/(3|V|! + 1)) k
  bool holds = true;
  bool enforced = true;  // false when |V| > 4
};

/// drops + swaps against the pairwise budget. Reported only for |V| > 4.
PairwiseAudit pairwise_budget_audit(const CaseTally& tally, long k, std::size_t num_vertices);

/// Number of prefixes k of the trace at which drop_step_audit fails.
std::uint64_t drop_budget_violations(const RunTrace& trace);

struct RateFit {
  double slope_per_iteration = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  long window_start = 0;
  long window_end = 0;
  std::size_t points = 0;
  double implied_factor = 1.0;
};

inline constexpr std::size_t kMinRateFitPoints = 20;

/// Least-squares fit of log(gap) against k. R^2 is 1 when the residual and
/// total variation both vanish.
RateFit fit_log_linear(const std::vector<double>& ks, const std::vector<double>& gaps);

/// Fits log(F(x_k) - f_star) over the last tail_fraction of records with a
/// positive gap. SVRF traces use the running minimum. Throws
/// InvalidArgument with fewer than kMinRateFitPoints qualifying records.
RateFit rate_fit(const RunTrace& trace, double f_star, double tail_fraction = 0.5);

/// Monte-Carlo mean over replications of max_j |F_batch(x_j) - F(x_j)|.
/// Replication r uses a generator seeded from (seed, r). With exact_full the
/// batch for m >= n is the index set itself.
double empirical_sup_deviation(const Objective& obj, std::uint64_t m, const std::vector<Vector>& probes,
                               int replications, std::uint64_t seed, bool exact_full = false);

}  // namespace sfw
