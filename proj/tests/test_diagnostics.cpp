#include "support.hpp"

#include "sfw/diagnostics.hpp"

#include <doctest.h>

#include <cmath>

using namespace sfw;
using sfw::testing::random_feasible;

namespace {

RunTrace trace_from_gaps(const std::vector<double>& gaps, double f_star) {
  RunTrace t;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    IterationRecord r;
    r.k = static_cast<long>(i);
    r.objective = f_star + gaps[i];
    r.running_min = r.objective;
    t.records.push_back(r);
  }
  return t;
}

}  // namespace

TEST_SUITE("diagnostics") {
  TEST_CASE("relative gap") {
    CHECK(relative_gap(11.0, 10.0) == doctest::Approx(0.1));
    CHECK(relative_gap(-9.0, -10.0) == doctest::Approx(0.1));
    CHECK(relative_gap(0.25, 0.0) == 0.25);
  }

  TEST_CASE("step classification examples") {
    CHECK(classify_step(0.3, 1.0) == StepCase::A);
    CHECK(classify_step(1.0, 1.0) == StepCase::B);
    CHECK(classify_step(1.0, 3.0) == StepCase::B);
    CHECK(classify_step(0.2, 0.5) == StepCase::C);
    CHECK(classify_step(0.5, 0.5) == StepCase::D);
    CHECK(classify_step(0.5 - 1e-13, 0.5) == StepCase::D);
    CHECK_THROWS_AS(classify_step(0.6, 0.5), InvalidArgument);
    CHECK_THROWS_AS(classify_step(-0.1, 0.5), InvalidArgument);
    CHECK(to_string(StepCase::C) == "C");
  }

  TEST_CASE("log-linear fit examples") {
    const RateFit exact = fit_log_linear({1, 2, 3, 4}, {1, 0.5, 0.25, 0.125});
    CHECK(exact.slope_per_iteration == doctest::Approx(std::log(0.5)).epsilon(1e-12));
    CHECK(exact.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(exact.implied_factor == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(exact.window_start == 1);
    CHECK(exact.window_end == 4);

    const RateFit flat = fit_log_linear({1, 2, 3, 4, 5}, {0.3, 0.3, 0.3, 0.3, 0.3});
    CHECK(flat.slope_per_iteration == 0.0);
    CHECK(flat.r_squared == 1.0);

    Rng rng(21);
    std::uniform_real_distribution<double> noise(0.9, 1.1);
    std::vector<double> ks, gaps;
    for (int k = 1; k <= 100; ++k) {
      ks.push_back(k);
      gaps.push_back(std::pow(0.5, k) * noise(rng));
    }
    const RateFit noisy = fit_log_linear(ks, gaps);
    CHECK(std::abs(noisy.slope_per_iteration / std::log(0.5) - 1.0) <= 0.1);
    CHECK(noisy.r_squared >= 0.95);
    CHECK(noisy.r_squared <= 1.0);
  }

  TEST_CASE("rate fit over a trace tail") {
    std::vector<double> gaps;
    for (int k = 0; k < 40; ++k) gaps.push_back(k < 20 ? std::pow(0.5, k) : std::pow(0.5, 20) * std::pow(0.9, k - 20));
    const RateFit fit = rate_fit(trace_from_gaps(gaps, 3.0), 3.0, 0.5);
    CHECK(fit.points == 20);
    CHECK(fit.window_start == 20);
    CHECK(fit.slope_per_iteration == doctest::Approx(std::log(0.9)).epsilon(1e-6));

    CHECK_THROWS_AS(rate_fit(trace_from_gaps(std::vector<double>(19, 1.0), 0.0), 0.0), InvalidArgument);
    // Non-positive gaps are excluded before the count.
    std::vector<double> some_zero(30, 0.0);
    for (int i = 0; i < 10; ++i) some_zero[i] = 1.0;
    CHECK_THROWS_AS(rate_fit(trace_from_gaps(some_zero, 0.0), 0.0), InvalidArgument);
  }

  TEST_CASE("rate fit uses the running minimum for SVRF") {
    std::vector<double> gaps;
    for (int k = 0; k < 30; ++k) gaps.push_back(std::pow(0.8, k) * (k % 2 ? 4.0 : 1.0));
    RunTrace t = trace_from_gaps(gaps, 0.0);
    t.algorithm = Algorithm::SVRF;
    double best = t.records[0].objective;
    for (auto& r : t.records) r.running_min = best = std::min(best, r.objective);
    const RateFit fit = rate_fit(t, 0.0, 1.0);
    CHECK(fit.slope_per_iteration == doctest::Approx(std::log(0.8)).epsilon(0.05));
  }

  TEST_CASE("drop budget audit examples") {
    CaseTally tally;
    tally.drops = 5;
    CHECK(drop_step_audit(tally, 9));
    tally.drops = 6;
    CHECK_FALSE(drop_step_audit(tally, 9));

    tally.drops = 10;
    tally.swaps = 8;
    const PairwiseAudit small = pairwise_budget_audit(tally, 19, 3);
    CHECK(small.bound == doctest::Approx(19.0 * 18.0 / 19.0));
    CHECK(small.holds);
    CHECK(small.enforced);
    tally.swaps = 9;
    CHECK_FALSE(pairwise_budget_audit(tally, 19, 3).holds);
    CHECK_FALSE(pairwise_budget_audit(tally, 19, 200).enforced);
  }

  TEST_CASE("case tallies of a seeded run") {
    const Problem prob = generate_synthetic(2000, 50, -1, 1, 1);
    RunConfig cfg;
    cfg.algorithm = Algorithm::ASFW;
    cfg.max_iterations = 400;
    const RunTrace t = run(prob.objective, prob.polytope, cfg);
    const CaseTally tally = tally_cases(t);
    CHECK(tally.iterations == 400);
    CHECK(tally.a + tally.b + tally.c + tally.d == tally.iterations);
    CHECK(tally.swaps == 0);
    CHECK(drop_budget_violations(t) == 0);
    // Every drop is a full step to gamma_max, so it lands in case B or D.
    for (const auto& r : t.records)
      if (r.step.is_drop) CHECK(std::abs(r.gamma - r.gamma_max) <= kCaseTolerance);
    CHECK(tally.drops <= tally.b + tally.d);
  }

  TEST_CASE("drop budget violations counts failing prefixes") {
    RunTrace t;
    t.records.push_back(IterationRecord{});
    for (long k = 1; k <= 4; ++k) {
      IterationRecord r;
      r.k = k;
      r.step.is_drop = true;
      t.records.push_back(r);
    }
    // drops = k at every prefix; 2k <= k + 1 holds only for k = 1.
    CHECK(drop_budget_violations(t) == 3);
  }

  TEST_CASE("sup-deviation examples") {
    const Problem prob = generate_synthetic(50, 4, -1, 1, 2);
    Rng rng(3);
    std::vector<Vector> probes;
    for (int j = 0; j < 8; ++j) probes.push_back(random_feasible(rng, prob.polytope));
    CHECK(empirical_sup_deviation(prob.objective, 50, probes, 20, 7, true) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(empirical_sup_deviation(prob.objective, 50, probes, 20, 7, false) > 0.0);

    const Problem single = generate_synthetic(1, 4, -1, 1, 2);
    CHECK(empirical_sup_deviation(single.objective, 37, probes, 10, 7) == doctest::Approx(0.0).epsilon(1e-12));

    CHECK(empirical_sup_deviation(prob.objective, 10, probes, 30, 9) ==
          empirical_sup_deviation(prob.objective, 10, probes, 30, 9));
  }

  TEST_CASE("sup-deviation shrinks with the batch size") {
    const Problem prob = generate_synthetic(500, 5, -1, 1, 4);
    Rng rng(5);
    std::vector<Vector> probes;
    for (int j = 0; j < 10; ++j) probes.push_back(random_feasible(rng, prob.polytope));
    double prev = std::numeric_limits<double>::infinity();
    for (std::uint64_t m : {10u, 100u, 1000u, 10000u}) {
      const double dev = empirical_sup_deviation(prob.objective, m, probes, 100, 11);
      CHECK(dev < prev);
      prev = dev;
    }
  }
}
