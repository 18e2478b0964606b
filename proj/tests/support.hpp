#pragma once

#include "sfw/algorithms.hpp"

#include <random>
#include <vector>

namespace sfw::testing {

inline Vector random_vector(Rng& rng, Index p, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector v(p);
  for (Index i = 0; i < p; ++i) v[i] = normal(rng);
  return v;
}

inline Matrix random_matrix(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

/// Random convex combination of the polytope's vertices.
inline Vector random_feasible(Rng& rng, const Polytope& poly) {
  const auto verts = poly.vertices();
  std::exponential_distribution<double> expo(1.0);
  Vector x = Vector::Zero(poly.dim());
  double total = 0.0;
  std::vector<double> w(verts.size());
  for (auto& wi : w) total += (wi = expo(rng));
  for (std::size_t i = 0; i < verts.size(); ++i) x += (w[i] / total) * verts[i].coords;
  return x;
}

/// The built-in shapes with p <= 12 used by property tests.
inline std::vector<Polytope> builtin_polytopes() {
  std::vector<Polytope> out;
  for (Index p : {1, 2, 3, 5, 8, 12}) {
    out.push_back(Polytope::ordered_box(-1.0, 1.0, p));
    out.push_back(Polytope::ordered_box(0.5, 3.0, p));
    out.push_back(Polytope::l1_ball(1.0, p));
    out.push_back(Polytope::l1_ball(2.5, p));
    out.push_back(Polytope::simplex(p));
  }
  return out;
}

/// Small quadratic least-squares problem for algorithm-level tests.
inline Objective small_least_squares(Index n, Index p, std::uint64_t seed) {
  Rng rng(seed);
  Matrix A = random_matrix(rng, n, p);
  Vector b = random_vector(rng, n);
  return Objective::ordered_least_squares(std::move(A), std::move(b));
}

}  // namespace sfw::testing
