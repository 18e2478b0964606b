#include "sfw/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sfw {

std::string to_string(StepCase c) {
  switch (c) {
    case StepCase::A: return "A";
    case StepCase::B: return "B";
    case StepCase::C: return "C";
    case StepCase::D: return "D";
  }
  return "?";
}

double relative_gap(double f, double f_star) {
  return f_star == 0.0 ? f - f_star : (f - f_star) / std::abs(f_star);
}

StepCase classify_step(double gamma, double gamma_max) {
  if (!std::isfinite(gamma) || std::isnan(gamma_max))
    throw InvalidArgument("classify_step: non-finite step");
  if (gamma < 0.0) throw InvalidArgument("classify_step: negative step");
  if (gamma > gamma_max + kCaseTolerance) throw InvalidArgument("classify_step: gamma exceeds gamma_max");
  if (gamma_max >= 1.0) return gamma < 1.0 ? StepCase::A : StepCase::B;
  return std::abs(gamma - gamma_max) <= kCaseTolerance ? StepCase::D : StepCase::C;
}

CaseTally tally_cases(const RunTrace& trace) {
  CaseTally t;
  for (const auto& rec : trace.records) {
    if (rec.k < 1) continue;
    switch (classify_step(rec.gamma, rec.gamma_max)) {
      case StepCase::A: ++t.a; break;
      case StepCase::B: ++t.b; break;
      case StepCase::C: ++t.c; break;
      case StepCase::D: ++t.d; break;
    }
    if (rec.step.is_drop) ++t.drops;
    if (rec.step.is_swap) ++t.swaps;
    ++t.iterations;
  }
  return t;
}

bool drop_step_audit(const CaseTally& tally, long k) {
  return 2 * static_cast<long double>(tally.drops) <= static_cast<long double>(k) + 1;
}

PairwiseAudit pairwise_budget_audit(const CaseTally& tally, long k, std::size_t num_vertices) {
  PairwiseAudit audit;
  audit.enforced = num_vertices <= 4;
  // 3|V|! overflows double beyond |V| = 170; the bound is then k.
  double factorial = 1.0;
  for (std::size_t i = 2; i <= num_vertices && std::isfinite(factorial); ++i) factorial *= static_cast<double>(i);
  audit.bound = (1.0 - 1.0 / (3.0 * factorial + 1.0)) * static_cast<double>(k);
  audit.holds = static_cast<double>(tally.drops + tally.swaps) <= audit.bound;
  return audit;
}

std::uint64_t drop_budget_violations(const RunTrace& trace) {
  std::uint64_t violations = 0;
  CaseTally running;
  for (const auto& rec : trace.records) {
    if (rec.k < 1) continue;
    if (rec.step.is_drop) ++running.drops;
    if (!drop_step_audit(running, rec.k)) ++violations;
  }
  return violations;
}

RateFit fit_log_linear(const std::vector<double>& ks, const std::vector<double>& gaps) {
  if (ks.size() != gaps.size()) throw InvalidArgument("fit_log_linear: length mismatch");
  if (ks.size() < 2) throw InvalidArgument("fit_log_linear: need at least two points");
  const double n = static_cast<double>(ks.size());
  double mk = 0.0, my = 0.0;
  std::vector<double> ys(gaps.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (!(gaps[i] > 0.0)) throw InvalidArgument("fit_log_linear: non-positive gap");
    ys[i] = std::log(gaps[i]);
    mk += ks[i];
    my += ys[i];
  }
  mk /= n;
  my /= n;
  double skk = 0.0, sky = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    skk += (ks[i] - mk) * (ks[i] - mk);
    sky += (ks[i] - mk) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (skk == 0.0) throw InvalidArgument("fit_log_linear: all k identical");
  RateFit fit;
  fit.slope_per_iteration = sky / skk;
  fit.intercept = my - fit.slope_per_iteration * mk;
  double sse = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope_per_iteration * ks[i]);
    sse += r * r;
  }
  fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(1.0 - sse / syy, 0.0, 1.0);
  fit.window_start = static_cast<long>(ks.front());
  fit.window_end = static_cast<long>(ks.back());
  fit.points = ks.size();
  fit.implied_factor = std::exp(fit.slope_per_iteration);
  return fit;
}

RateFit rate_fit(const RunTrace& trace, double f_star, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
    throw InvalidArgument("rate_fit: tail_fraction must lie in (0, 1]");
  const bool use_min = trace.algorithm == Algorithm::SVRF;
  std::vector<double> ks, gaps;
  for (const auto& rec : trace.records) {
    const double gap = (use_min ? rec.running_min : rec.objective) - f_star;
    if (gap > 0.0) {
      ks.push_back(static_cast<double>(rec.k));
      gaps.push_back(gap);
    }
  }
  if (ks.size() < kMinRateFitPoints)
    throw InvalidArgument("rate_fit: only " + std::to_string(ks.size()) +
                          " records with positive gap; shrink the window");
  const auto keep = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(ks.size()))));
  const auto first = static_cast<std::ptrdiff_t>(ks.size() - std::min(keep, ks.size()));
  return fit_log_linear(std::vector<double>(ks.begin() + first, ks.end()),
                        std::vector<double>(gaps.begin() + first, gaps.end()));
}

double empirical_sup_deviation(const Objective& obj, std::uint64_t m, const std::vector<Vector>& probes,
                               int replications, std::uint64_t seed, bool exact_full) {
  if (probes.empty()) throw InvalidArgument("empirical_sup_deviation: empty probe set");
  if (replications < 1) throw InvalidArgument("empirical_sup_deviation: replications must be >= 1");
  if (m < 1) throw InvalidArgument("empirical_sup_deviation: batch size must be >= 1");
  const Index n = obj.num_samples();
  std::vector<double> exact(probes.size());
  for (std::size_t j = 0; j < probes.size(); ++j) exact[j] = obj.evaluate(probes[j]);

  double total = 0.0;
  for (int r = 0; r < replications; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(r)};
    Rng rng(seq);
    const SampleBatch batch =
        (exact_full && m >= static_cast<std::uint64_t>(n)) ? SampleBatch::full_set(n) : draw_batch(n, m, rng);
    double worst = 0.0;
    for (std::size_t j = 0; j < probes.size(); ++j)
      worst = std::max(worst, std::abs(obj.sampled_value(probes[j], batch) - exact[j]));
    total += worst;
  }
  return total / static_cast<double>(replications);
}

}  // namespace sfw
