#pragma once

#include "sfw/polytope.hpp"
#include "sfw/types.hpp"

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace sfw {

using Rng = std::mt19937_64;

/// A multiset of sample indices drawn i.i.d. uniformly with replacement.
///
/// Small batches store one entry per draw. Batches larger than the dataset
/// store per-index multiplicities drawn from the equivalent multinomial, so
/// the cost of a batch never exceeds one pass over the data. A `full` batch
/// is the exact index set {0..n-1} and is evaluated through the full
/// objective.
struct SampleBatch {
  std::vector<Index> indices;
  std::vector<std::uint64_t> counts;
  std::uint64_t size = 0;
  bool full = false;

  static SampleBatch full_set(Index n);
  static SampleBatch from_indices(std::vector<Index> indices);
};

/// Draws `m` indices i.i.d. uniform on [0, n).
SampleBatch draw_batch(Index n, std::uint64_t m, Rng& rng);

enum class ObjectiveKind { OrderedLeastSquares, ElasticNetLS };

std::string to_string(ObjectiveKind kind);

struct BatchGradient {
  Vector gradient;
  double lipschitz = 0.0;  // mean of L_i over the batch
  double sigma = 0.0;      // mean of sigma_i over the batch
};

/// Finite-sum quadratic objective F(x) = (1/n) sum_i f_i(x).
///
/// OrderedLeastSquares: F = ||Ax - b||^2 + 0.5 ||x||^2 with
///   f_i = n (a_i.x - b_i)^2 + 0.5 ||x||^2, sigma_i = 1, L_i = 2n||a_i||^2 + 1.
/// ElasticNetLS: F = (1/n)||Ax - b||^2 + mu ||x||^2 with
///   f_i = (a_i.x - b_i)^2 + mu ||x||^2, sigma_i = 2 mu, L_i = 2||a_i||^2 + 2 mu.
class Objective {
public:
  static Objective ordered_least_squares(Matrix A, Vector b);
  static Objective elastic_net(Matrix A, Vector b, double mu);

  ObjectiveKind kind() const { return kind_; }
  Index num_samples() const { return A_.rows(); }
  Index dim() const { return A_.cols(); }
  const Matrix& design() const { return A_; }
  const Vector& response() const { return b_; }
  double mu() const { return mu_; }

  const Vector& sigma_terms() const { return sigma_; }
  const Vector& lipschitz_terms() const { return lip_; }
  double sigma_min() const { return sigma_.minCoeff(); }
  /// L_F as the largest per-term constant.
  double lipschitz_max() const { return lip_.maxCoeff(); }
  /// (1/n) sum L_i, a gradient Lipschitz bound for F itself.
  double lipschitz_mean() const { return lip_.mean(); }
  bool strongly_convex() const { return sigma_min() > 0.0; }

  double evaluate(const Vector& x) const;
  Vector full_gradient(const Vector& x) const;
  /// d' (Hessian of F) d.
  double curvature(const Vector& d) const;

  double term_value(Index i, const Vector& x) const;
  Vector term_gradient(Index i, const Vector& x) const;
  /// grad f_i(x) - grad f_i(y).
  Vector term_gradient_difference(Index i, const Vector& x, const Vector& y) const;

  BatchGradient stochastic_gradient(const Vector& x, const SampleBatch& batch) const;
  /// F^(k)(x) = (1/m) sum over the batch of f_i(x).
  double sampled_value(const Vector& x, const SampleBatch& batch) const;
  /// d' (Hessian of F^(k)) d.
  double sampled_curvature(const Vector& d, const SampleBatch& batch) const;
  /// (1/m) sum over the batch of grad f_i(x) - grad f_i(y).
  Vector sampled_gradient_difference(const Vector& x, const Vector& y, const SampleBatch& batch) const;

  /// Minimizer of the smooth objective over all of R^p.
  Vector unconstrained_minimizer() const;
  /// Largest Hessian eigenvalue of F by power iteration.
  double full_lipschitz_power_iteration(int iterations = 100) const;

  /// Human-readable description of the finite-sum split, for run metadata.
  std::string decomposition() const;

private:
  Objective(ObjectiveKind kind, Matrix A, Vector b, double mu);

  double residual(Index i, const Vector& x) const { return A_.row(i).dot(x) - b_[i]; }
  // f_i = scale * r_i^2 + ridge/2 * ||x||^2
  double term_scale() const;
  double ridge() const;
  void check_point(const Vector& x, const char* what) const;
  void check_batch(const SampleBatch& batch) const;

  ObjectiveKind kind_;
  Matrix A_;
  Vector b_;
  double mu_;
  Vector sigma_;
  Vector lip_;
};

/// Problem size used by the full-scale simulated experiment.
struct FullScaleSynthetic {
  static constexpr Index n = 1000000;
  static constexpr Index p = 1000;
  static constexpr double l = -1.0;
  static constexpr double u = 1.0;
};

struct Problem {
  Objective objective;
  Polytope polytope;
};

/// Ordered-box least squares with A, b i.i.d. standard normal.
Problem generate_synthetic(Index n, Index p, double lower, double upper, std::uint64_t seed);

struct Dataset {
  Matrix A;
  Vector b;
  Index rows() const { return A.rows(); }
  Index cols() const { return A.cols(); }
};

struct CsvOptions {
  Index target_column = 0;
  bool standardize = false;
  bool skip_header = false;
  Index max_rows = 0;  // 0 means all rows
};

/// Dense CSV reader; errors carry the 1-based line number.
Dataset load_csv_dataset(const std::filesystem::path& path, const CsvOptions& options);

/// Shifts/scales each column to mean 0, population variance 1. Constant
/// columns become 0.
void standardize_columns(Matrix& A);

/// Elastic-net least squares paired with the l1 ball of radius alpha.
/// mu = 0 is accepted; the objective then reports strongly_convex() == false.
Problem build_elastic_net(Matrix A, Vector b, double mu, double alpha);

/// Stand-in for a real regression dataset: A i.i.d. N(0,1), b = A w + e with
/// w and e i.i.d. N(0,1).
Dataset generate_regression_data(Index n, Index p, std::uint64_t seed);

/// fraction * ||x_unc||_1, where x_unc minimizes the smooth objective over
/// R^p. Any fraction in (0, 1) makes an l1 constraint of that radius bind.
double binding_radius(const Objective& obj, double fraction);

}  // namespace sfw
