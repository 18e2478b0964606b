#include "sfw/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace sfw {

namespace {

// Threshold theta with sum(max(v_i - theta, 0)) = radius for v >= 0 whose
// sum exceeds radius.
double simplex_threshold(std::vector<double> v, double radius) {
  std::sort(v.begin(), v.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    cumsum += v[j];
    const double candidate = (cumsum - radius) / static_cast<double>(j + 1);
    if (v[j] - candidate > 0.0) theta = candidate;
  }
  return theta;
}

}  // namespace

Vector project_l1(const Vector& x, double radius) {
  require_finite(x, "project_l1: point");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("project_l1: alpha must be > 0");
  if (x.lpNorm<1>() <= radius) return x;
  std::vector<double> mags(static_cast<std::size_t>(x.size()));
  for (Index i = 0; i < x.size(); ++i) mags[static_cast<std::size_t>(i)] = std::abs(x[i]);
  const double theta = simplex_threshold(std::move(mags), radius);
  Vector y(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    const double shrunk = std::max(std::abs(x[i]) - theta, 0.0);
    y[i] = x[i] < 0.0 ? -shrunk : shrunk;
  }
  return y;
}

Vector project_simplex(const Vector& x) {
  require_finite(x, "project_simplex: point");
  std::vector<double> v(x.data(), x.data() + x.size());
  const double theta = simplex_threshold(std::move(v), 1.0);
  return (x.array() - theta).cwiseMax(0.0).matrix();
}

Vector project_ordered_box(const Vector& x, double lower, double upper) {
  require_finite(x, "project_ordered_box: point");
  if (!(lower < upper)) throw InvalidArgument("project_ordered_box: requires l < u");
  // Pool adjacent violators: blocks of (mean, size) kept nondecreasing.
  std::vector<double> mean;
  std::vector<Index> size;
  mean.reserve(static_cast<std::size_t>(x.size()));
  size.reserve(static_cast<std::size_t>(x.size()));
  for (Index i = 0; i < x.size(); ++i) {
    double m = x[i];
    Index s = 1;
    while (!mean.empty() && mean.back() > m) {
      const double total = mean.back() * static_cast<double>(size.back()) + m * static_cast<double>(s);
      s += size.back();
      m = total / static_cast<double>(s);
      mean.pop_back();
      size.pop_back();
    }
    mean.push_back(m);
    size.push_back(s);
  }
  Vector y(x.size());
  Index pos = 0;
  for (std::size_t b = 0; b < mean.size(); ++b) {
    const double value = std::clamp(mean[b], lower, upper);
    y.segment(pos, size[b]).setConstant(value);
    pos += size[b];
  }
  return y;
}

}  // namespace sfw
