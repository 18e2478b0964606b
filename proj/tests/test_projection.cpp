#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace sfw;
using sfw::testing::random_feasible;
using sfw::testing::random_vector;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

// Soft threshold level theta with sum max(|x_i| - theta, 0) = radius, by bisection.
double l1_threshold(const Vector& x, double radius) {
  double lo = 0.0, hi = x.cwiseAbs().maxCoeff();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double mass = (x.cwiseAbs().array() - mid).max(0.0).sum();
    (mass > radius ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Vector l1_oracle(const Vector& x, double radius) {
  if (x.lpNorm<1>() <= radius) return x;
  const double theta = l1_threshold(x, radius);
  Vector y(x.size());
  for (Index i = 0; i < x.size(); ++i) y[i] = std::copysign(std::max(std::abs(x[i]) - theta, 0.0), x[i]);
  return y;
}

// Shift tau with sum max(x_i - tau, 0) = 1, by bisection.
Vector simplex_oracle(const Vector& x) {
  double lo = x.minCoeff() - 1.0, hi = x.maxCoeff();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double mass = (x.array() - mid).max(0.0).sum();
    (mass > 1.0 ? lo : hi) = mid;
  }
  const double tau = 0.5 * (lo + hi);
  return (x.array() - tau).max(0.0).matrix();
}

// y is the projection of x iff y is feasible and <x - y, v - y> <= 0 for
// every vertex v; returns the largest violation.
double variational_violation(const Polytope& poly, const Vector& x, const Vector& y) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& v : poly.vertices()) worst = std::max(worst, (x - y).dot(v.coords - y));
  return worst;
}

}  // namespace

TEST_SUITE("projection") {
  TEST_CASE("l1 projection examples") {
    CHECK(project_l1(vec({0.5, 0.5}), 1.0) == vec({0.5, 0.5}));
    CHECK((project_l1(vec({2, 0}), 1.0) - vec({1, 0})).norm() < 1e-15);
    CHECK((project_l1(vec({1, 1}), 1.0) - vec({0.5, 0.5})).norm() < 1e-15);
    CHECK((project_l1(vec({-3, 1}), 2.0) - vec({-2, 0})).norm() < 1e-15);
  }

  TEST_CASE("l1 projection matches a bisection oracle") {
    Rng rng(5);
    for (Index p : {1, 2, 4, 9, 30}) {
      for (int t = 0; t < 200; ++t) {
        const double radius = 0.1 + std::abs(random_vector(rng, 1)[0]);
        const Vector x = random_vector(rng, p, 2.0);
        const Vector y = project_l1(x, radius);
        CHECK((y - l1_oracle(x, radius)).norm() <= 1e-9 * (1.0 + x.norm()));
        CHECK(y.lpNorm<1>() <= radius * (1.0 + 1e-12));
      }
    }
  }

  TEST_CASE("simplex projection matches a bisection oracle") {
    Rng rng(6);
    CHECK((project_simplex(vec({0.2, 0.8})) - vec({0.2, 0.8})).norm() < 1e-15);
    CHECK((project_simplex(vec({2, 0})) - vec({1, 0})).norm() < 1e-15);
    CHECK((project_simplex(vec({1, 1})) - vec({0.5, 0.5})).norm() < 1e-15);
    for (Index p : {1, 2, 5, 17}) {
      for (int t = 0; t < 200; ++t) {
        const Vector x = random_vector(rng, p, 2.0);
        const Vector y = project_simplex(x);
        CHECK((y - simplex_oracle(x)).norm() <= 1e-9);
        CHECK(y.minCoeff() >= 0.0);
        CHECK(std::abs(y.sum() - 1.0) <= 1e-12);
      }
    }
  }

  TEST_CASE("ordered box projection examples") {
    CHECK(project_ordered_box(vec({0.5, -0.5}), -1, 1) == vec({0, 0}));
    CHECK(project_ordered_box(vec({-3, 0.2, 5}), -1, 1) == vec({-1, 0.2, 1}));
    CHECK((project_ordered_box(vec({1, 0, 0.5}), -1, 1) - vec({0.5, 0.5, 0.5})).norm() < 1e-15);
    CHECK(project_ordered_box(vec({4, 3}), -1, 1) == vec({1, 1}));
  }

  TEST_CASE("every projection satisfies the variational inequality") {
    Rng rng(7);
    for (const auto& poly : sfw::testing::builtin_polytopes()) {
      if (poly.dim() > 10) continue;
      for (int t = 0; t < 100; ++t) {
        const Vector x = random_vector(rng, poly.dim(), 3.0);
        const Vector y = poly.project(x);
        CHECK(poly.contains(y, 1e-12));
        CHECK(variational_violation(poly, x, y) <= 1e-10 * (1.0 + x.squaredNorm()));
      }
    }
  }

  TEST_CASE("projection is no farther than any feasible point") {
    Rng rng(8);
    for (const auto& poly : sfw::testing::builtin_polytopes()) {
      for (int t = 0; t < 50; ++t) {
        const Vector x = random_vector(rng, poly.dim(), 3.0);
        const Vector y = poly.project(x);
        const Vector z = random_feasible(rng, poly);
        CHECK((x - y).norm() <= (x - z).norm() + 1e-12);
      }
    }
  }

  TEST_CASE("projection fixes feasible points") {
    Rng rng(9);
    for (const auto& poly : sfw::testing::builtin_polytopes()) {
      const Vector z = random_feasible(rng, poly);
      CHECK((poly.project(z) - z).norm() <= 1e-12);
    }
  }

  TEST_CASE("projection argument checks") {
    CHECK_THROWS_AS(project_l1(vec({1, 2}), 0.0), InvalidArgument);
    CHECK_THROWS_AS(project_ordered_box(vec({1, 2}), 1.0, -1.0), InvalidArgument);
    CHECK_THROWS_AS(Polytope::simplex(3).project(vec({1, 2})), DimensionMismatch);
  }
}
