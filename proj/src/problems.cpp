#include "sfw/problems.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace sfw {

std::string to_string(ObjectiveKind kind) {
  return kind == ObjectiveKind::OrderedLeastSquares ? "OrderedLeastSquares" : "ElasticNetLS";
}

// Batches --------------------------------------------------------------------

SampleBatch SampleBatch::full_set(Index n) {
  SampleBatch batch;
  batch.indices.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) batch.indices[static_cast<std::size_t>(i)] = i;
  batch.counts.assign(static_cast<std::size_t>(n), 1);
  batch.size = static_cast<std::uint64_t>(n);
  batch.full = true;
  return batch;
}

SampleBatch SampleBatch::from_indices(std::vector<Index> indices) {
  SampleBatch batch;
  batch.counts.assign(indices.size(), 1);
  batch.size = indices.size();
  batch.indices = std::move(indices);
  return batch;
}

SampleBatch draw_batch(Index n, std::uint64_t m, Rng& rng) {
  if (n < 1) throw InvalidArgument("draw_batch: empty dataset");
  if (m < 1) throw InvalidArgument("draw_batch: batch size must be >= 1");
  SampleBatch batch;
  batch.size = m;
  if (m <= static_cast<std::uint64_t>(n)) {
    std::uniform_int_distribution<Index> pick(0, n - 1);
    batch.indices.resize(m);
    for (auto& idx : batch.indices) idx = pick(rng);
    batch.counts.assign(m, 1);
    return batch;
  }
  // Multinomial(m; 1/n, ..., 1/n) by sequential conditional binomials.
  std::uint64_t remaining = m;
  for (Index i = 0; i < n && remaining > 0; ++i) {
    std::uint64_t c = remaining;
    if (i + 1 < n) {
      std::binomial_distribution<std::int64_t> binom(static_cast<std::int64_t>(remaining),
                                                     1.0 / static_cast<double>(n - i));
      c = static_cast<std::uint64_t>(binom(rng));
    }
    if (c > 0) {
      batch.indices.push_back(i);
      batch.counts.push_back(c);
      remaining -= c;
    }
  }
  return batch;
}

// Objective ------------------------------------------------------------------

Objective::Objective(ObjectiveKind kind, Matrix A, Vector b, double mu)
    : kind_(kind), A_(std::move(A)), b_(std::move(b)), mu_(mu) {
  if (A_.rows() < 1 || A_.cols() < 1) throw InvalidArgument("objective: empty design matrix");
  if (b_.size() != A_.rows()) throw DimensionMismatch("objective: response", A_.rows(), b_.size());
  if (!A_.allFinite() || !b_.allFinite()) throw InvalidArgument("objective: non-finite data");
  if (!(mu_ >= 0.0) || !std::isfinite(mu_)) throw InvalidArgument("objective: mu must be >= 0");
  const Index n = A_.rows();
  const Vector row_sq = A_.rowwise().squaredNorm();
  const double c = 2.0 * term_scale();
  lip_ = (c * row_sq.array() + ridge()).matrix();
  sigma_ = Vector::Constant(n, ridge());
}

Objective Objective::ordered_least_squares(Matrix A, Vector b) {
  return Objective(ObjectiveKind::OrderedLeastSquares, std::move(A), std::move(b), 0.5);
}

Objective Objective::elastic_net(Matrix A, Vector b, double mu) {
  return Objective(ObjectiveKind::ElasticNetLS, std::move(A), std::move(b), mu);
}

double Objective::term_scale() const {
  return kind_ == ObjectiveKind::OrderedLeastSquares ? static_cast<double>(A_.rows()) : 1.0;
}

double Objective::ridge() const {
  // OrderedLeastSquares stores its fixed 1/2 ridge weight in mu_.
  return 2.0 * mu_;
}

void Objective::check_point(const Vector& x, const char* what) const {
  if (x.size() != dim()) throw DimensionMismatch(what, dim(), x.size());
  require_finite(x, what);
}

void Objective::check_batch(const SampleBatch& batch) const {
  if (batch.size == 0 || batch.indices.empty()) throw InvalidArgument("empty sample batch");
  if (batch.indices.size() != batch.counts.size())
    throw InvalidArgument("sample batch: indices/counts length mismatch");
  for (const Index i : batch.indices)
    if (i < 0 || i >= num_samples()) throw InvalidArgument("sample batch: index out of range");
}

double Objective::evaluate(const Vector& x) const {
  check_point(x, "evaluate");
  double sq = 0.0;
  for (Index i = 0; i < num_samples(); ++i) {
    const double r = residual(i, x);
    sq += r * r;
  }
  const double data = kind_ == ObjectiveKind::OrderedLeastSquares
                          ? sq
                          : (1.0 / static_cast<double>(num_samples())) * sq;
  return data + mu_ * x.squaredNorm();
}

Vector Objective::full_gradient(const Vector& x) const {
  check_point(x, "full_gradient");
  // grad F = sum_i coef_i a_i + 2 mu x with coef_i = 2 r_i (scaled by 1/n
  // for the averaged loss).
  const double c = kind_ == ObjectiveKind::OrderedLeastSquares
                       ? 2.0
                       : 2.0 / static_cast<double>(num_samples());
  Vector g = ridge() * x;
  for (Index i = 0; i < num_samples(); ++i) g.noalias() += (c * residual(i, x)) * A_.row(i).transpose();
  return g;
}

double Objective::curvature(const Vector& d) const {
  check_point(d, "curvature");
  const double c = kind_ == ObjectiveKind::OrderedLeastSquares
                       ? 2.0
                       : 2.0 / static_cast<double>(num_samples());
  return c * (A_ * d).squaredNorm() + ridge() * d.squaredNorm();
}

double Objective::term_value(Index i, const Vector& x) const {
  check_point(x, "term_value");
  if (i < 0 || i >= num_samples()) throw InvalidArgument("term_value: index out of range");
  const double r = residual(i, x);
  return term_scale() * (r * r) + mu_ * x.squaredNorm();
}

Vector Objective::term_gradient(Index i, const Vector& x) const {
  check_point(x, "term_gradient");
  if (i < 0 || i >= num_samples()) throw InvalidArgument("term_gradient: index out of range");
  return (2.0 * term_scale() * residual(i, x)) * A_.row(i).transpose() + ridge() * x;
}

Vector Objective::term_gradient_difference(Index i, const Vector& x, const Vector& y) const {
  if (i < 0 || i >= num_samples()) throw InvalidArgument("term_gradient_difference: index out of range");
  const Vector delta = x - y;
  return (2.0 * term_scale() * A_.row(i).dot(delta)) * A_.row(i).transpose() + ridge() * delta;
}

BatchGradient Objective::stochastic_gradient(const Vector& x, const SampleBatch& batch) const {
  check_point(x, "stochastic_gradient");
  check_batch(batch);
  BatchGradient out;
  if (batch.full) {
    out.gradient = full_gradient(x);
    out.lipschitz = lipschitz_mean();
    out.sigma = sigma_.mean();
    return out;
  }
  const double m = static_cast<double>(batch.size);
  const double c = 2.0 * term_scale();
  out.gradient = ridge() * x;
  double lip = 0.0;
  double sig = 0.0;
  for (std::size_t e = 0; e < batch.indices.size(); ++e) {
    const Index i = batch.indices[e];
    const double w = static_cast<double>(batch.counts[e]) / m;
    out.gradient.noalias() += ((w * c) * residual(i, x)) * A_.row(i).transpose();
    lip += w * lip_[i];
    sig += w * sigma_[i];
  }
  out.lipschitz = lip;
  out.sigma = sig;
  return out;
}

double Objective::sampled_value(const Vector& x, const SampleBatch& batch) const {
  check_point(x, "sampled_value");
  check_batch(batch);
  if (batch.full) return evaluate(x);
  const double m = static_cast<double>(batch.size);
  double data = 0.0;
  for (std::size_t e = 0; e < batch.indices.size(); ++e) {
    const double r = residual(batch.indices[e], x);
    data += (static_cast<double>(batch.counts[e]) / m) * (term_scale() * (r * r));
  }
  return data + mu_ * x.squaredNorm();
}

double Objective::sampled_curvature(const Vector& d, const SampleBatch& batch) const {
  check_point(d, "sampled_curvature");
  check_batch(batch);
  if (batch.full) return curvature(d);
  const double m = static_cast<double>(batch.size);
  const double c = 2.0 * term_scale();
  double acc = 0.0;
  for (std::size_t e = 0; e < batch.indices.size(); ++e) {
    const double ad = A_.row(batch.indices[e]).dot(d);
    acc += (static_cast<double>(batch.counts[e]) / m) * (c * ad * ad);
  }
  return acc + ridge() * d.squaredNorm();
}

Vector Objective::sampled_gradient_difference(const Vector& x, const Vector& y,
                                              const SampleBatch& batch) const {
  check_point(x, "sampled_gradient_difference");
  check_point(y, "sampled_gradient_difference");
  check_batch(batch);
  const Vector delta = x - y;
  if (batch.full) return full_gradient(x) - full_gradient(y);
  const double m = static_cast<double>(batch.size);
  const double c = 2.0 * term_scale();
  Vector out = ridge() * delta;
  for (std::size_t e = 0; e < batch.indices.size(); ++e) {
    const Index i = batch.indices[e];
    const double w = static_cast<double>(batch.counts[e]) / m;
    out.noalias() += ((w * c) * A_.row(i).dot(delta)) * A_.row(i).transpose();
  }
  return out;
}

Vector Objective::unconstrained_minimizer() const {
  const double c = kind_ == ObjectiveKind::OrderedLeastSquares
                       ? 2.0
                       : 2.0 / static_cast<double>(num_samples());
  Eigen::MatrixXd H = c * (A_.transpose() * A_);
  H.diagonal().array() += ridge();
  const Vector rhs = c * (A_.transpose() * b_);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
  if (ldlt.info() != Eigen::Success) throw ComputationError("unconstrained_minimizer: factorization failed");
  return ldlt.solve(rhs);
}

double Objective::full_lipschitz_power_iteration(int iterations) const {
  Vector v = Vector::Ones(dim()).normalized();
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Vector w = A_.transpose() * (A_ * v);
    const double nrm = w.norm();
    if (nrm == 0.0) break;
    lambda = v.dot(w);
    v = w / nrm;
  }
  const double c = kind_ == ObjectiveKind::OrderedLeastSquares
                       ? 2.0
                       : 2.0 / static_cast<double>(num_samples());
  return c * lambda + ridge();
}

std::string Objective::decomposition() const {
  if (kind_ == ObjectiveKind::OrderedLeastSquares)
    return "f_i(x) = n (a_i'x - b_i)^2 + 0.5||x||^2; sigma_i = 1; L_i = 2n||a_i||^2 + 1";
  return "f_i(x) = (a_i'x - b_i)^2 + mu||x||^2; sigma_i = 2mu; L_i = 2||a_i||^2 + 2mu";
}

// Problem builders -----------------------------------------------------------

Problem generate_synthetic(Index n, Index p, double lower, double upper, std::uint64_t seed) {
  if (n < 1 || p < 1) throw InvalidArgument("generate_synthetic: n and p must be >= 1");
  if (!(lower < upper)) throw InvalidArgument("generate_synthetic: requires l < u");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix A(n, p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j) A(i, j) = normal(rng);
  Vector b(n);
  for (Index i = 0; i < n; ++i) b[i] = normal(rng);
  return Problem{Objective::ordered_least_squares(std::move(A), std::move(b)),
                 Polytope::ordered_box(lower, upper, p)};
}

namespace {

double parse_cell(std::string_view cell, std::size_t line) {
  while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
  while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r'))
    cell.remove_suffix(1);
  double value = 0.0;
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(value))
    throw InvalidArgument("csv line " + std::to_string(line) + ": non-numeric cell '" +
                          std::string(cell) + "'");
  return value;
}

}  // namespace

void standardize_columns(Matrix& A) {
  const double n = static_cast<double>(A.rows());
  for (Index j = 0; j < A.cols(); ++j) {
    const double mean = A.col(j).sum() / n;
    A.col(j).array() -= mean;
    const double var = A.col(j).squaredNorm() / n;
    if (var > 0.0) {
      A.col(j) /= std::sqrt(var);
    } else {
      A.col(j).setZero();
    }
  }
}

Dataset load_csv_dataset(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open csv file: " + path.string());
  std::vector<double> values;
  Index cols = -1;
  Index rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && options.skip_header) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Index count = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string_view cell(line.data() + start,
                                  (comma == std::string::npos ? line.size() : comma) - start);
      values.push_back(parse_cell(cell, line_no));
      ++count;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cols < 0) {
      cols = count;
      if (options.target_column < 0 || options.target_column >= cols)
        throw InvalidArgument("csv: target_column " + std::to_string(options.target_column) +
                              " out of range for " + std::to_string(cols) + " columns");
      if (cols < 2) throw InvalidArgument("csv: need at least one feature column besides the target");
    } else if (count != cols) {
      throw InvalidArgument("csv line " + std::to_string(line_no) + ": expected " +
                            std::to_string(cols) + " fields, got " + std::to_string(count));
    }
    ++rows;
    if (options.max_rows > 0 && rows >= options.max_rows) break;
  }
  if (rows == 0) throw InvalidArgument("csv: empty file " + path.string());

  Dataset data{Matrix(rows, cols - 1), Vector(rows)};
  for (Index i = 0; i < rows; ++i) {
    Index out = 0;
    for (Index j = 0; j < cols; ++j) {
      const double v = values[static_cast<std::size_t>(i * cols + j)];
      if (j == options.target_column) {
        data.b[i] = v;
      } else {
        data.A(i, out++) = v;
      }
    }
  }
  if (options.standardize) standardize_columns(data.A);
  return data;
}

Problem build_elastic_net(Matrix A, Vector b, double mu, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("build_elastic_net: alpha must be > 0");
  const Index p = A.cols();
  return Problem{Objective::elastic_net(std::move(A), std::move(b), mu), Polytope::l1_ball(alpha, p)};
}

Dataset generate_regression_data(Index n, Index p, std::uint64_t seed) {
  if (n < 1 || p < 1) throw InvalidArgument("generate_regression_data: n and p must be >= 1");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Dataset data{Matrix(n, p), Vector(n)};
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j) data.A(i, j) = normal(rng);
  Vector w(p);
  for (Index j = 0; j < p; ++j) w[j] = normal(rng);
  for (Index i = 0; i < n; ++i) data.b[i] = data.A.row(i).dot(w) + normal(rng);
  return data;
}

double binding_radius(const Objective& obj, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw InvalidArgument("binding_radius: fraction must lie in (0, 1)");
  const double norm = obj.unconstrained_minimizer().lpNorm<1>();
  if (!(norm > 0.0)) throw ComputationError("binding_radius: unconstrained minimizer is zero");
  return fraction * norm;
}

}  // namespace sfw
