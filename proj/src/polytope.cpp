#include "sfw/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace sfw {

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw InvalidArgument(std::string(what) + ": non-finite entry");
}

std::string to_string(PolytopeKind kind) {
  switch (kind) {
    case PolytopeKind::OrderedBox: return "OrderedBox";
    case PolytopeKind::L1Ball: return "L1Ball";
    case PolytopeKind::Simplex: return "Simplex";
    case PolytopeKind::ExplicitHRep: return "ExplicitHRep";
  }
  return "?";
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_dim(Index expected, const Vector& v, const char* what) {
  if (v.size() != expected) throw DimensionMismatch(what, expected, v.size());
}

// Visits every k-subset of {0..n-1} in lexicographic order.
template <class F>
void for_each_subset(Index n, Index k, F&& visit) {
  if (k > n) return;
  std::vector<Index> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), Index{0});
  while (true) {
    visit(idx);
    Index i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (Index j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

Matrix select_rows(const Matrix& C, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), C.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = C.row(rows[r]);
  return out;
}

double feas_tol(const Matrix& C, const Vector& d) {
  const double scale = std::max({1.0, d.cwiseAbs().maxCoeff(), C.cwiseAbs().maxCoeff()});
  return 1e-9 * scale;
}

}  // namespace

// Construction ---------------------------------------------------------------

Polytope Polytope::ordered_box(double lower, double upper, Index dim) {
  if (dim < 1) throw InvalidArgument("OrderedBox: dimension must be >= 1");
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper))
    throw InvalidArgument("OrderedBox: requires finite l < u");
  return Polytope(OrderedBox{lower, upper, dim}, dim);
}

Polytope Polytope::l1_ball(double radius, Index dim) {
  if (dim < 1) throw InvalidArgument("L1Ball: dimension must be >= 1");
  if (!std::isfinite(radius) || !(radius > 0.0)) throw InvalidArgument("L1Ball: alpha must be > 0");
  return Polytope(L1Ball{radius, dim}, dim);
}

Polytope Polytope::simplex(Index dim) {
  if (dim < 1) throw InvalidArgument("Simplex: dimension must be >= 1");
  return Polytope(Simplex{dim}, dim);
}

Polytope Polytope::explicit_hrep(Matrix C, Vector d) {
  const Index p = C.cols();
  if (p < 1) throw InvalidArgument("ExplicitHRep: dimension must be >= 1");
  if (C.rows() != d.size()) throw DimensionMismatch("ExplicitHRep: rhs", C.rows(), d.size());
  if (p > kMaxExplicitDim)
    throw ComputationError("ExplicitHRep: dimension " + std::to_string(p) +
                           " exceeds vertex enumeration guard " + std::to_string(kMaxExplicitDim));
  if (!C.allFinite() || !d.allFinite()) throw InvalidArgument("ExplicitHRep: non-finite entry");
  if (has_recession_direction(C)) throw ComputationError("ExplicitHRep: polyhedron is unbounded");
  auto verts = enumerate_basic_solutions(C, d);
  if (verts.empty()) throw ComputationError("ExplicitHRep: polyhedron is empty");
  Polytope poly(HalfSpaces{std::move(C), std::move(d)}, p);
  poly.explicit_vertices_ = std::move(verts);
  return poly;
}

PolytopeKind Polytope::kind() const {
  return std::visit(overloaded{
                        [](const OrderedBox&) { return PolytopeKind::OrderedBox; },
                        [](const L1Ball&) { return PolytopeKind::L1Ball; },
                        [](const Simplex&) { return PolytopeKind::Simplex; },
                        [](const HalfSpaces&) { return PolytopeKind::ExplicitHRep; },
                    },
                    shape_);
}

// LMO ------------------------------------------------------------------------

Vertex Polytope::lmo(const Vector& g) const {
  check_dim(dim_, g, "lmo: gradient");
  require_finite(g, "lmo: gradient");
  const VertexId id = std::visit(
      overloaded{
          [&](const OrderedBox& box) -> VertexId {
            // Breakpoint j puts x_0..x_{j-1} at l and the rest at u, so its
            // value is l * prefix_j + u * (total - prefix_j).
            const double total = g.sum();
            double prefix = 0.0;
            double best = box.upper * total;
            VertexId best_j = 0;
            for (Index j = 1; j <= box.dim; ++j) {
              prefix += g[j - 1];
              const double value = box.lower * prefix + box.upper * (total - prefix);
              if (value < best) {
                best = value;
                best_j = static_cast<VertexId>(j);
              }
            }
            return best_j;
          },
          [&](const L1Ball&) -> VertexId {
            Index best = 0;
            double best_abs = std::abs(g[0]);
            for (Index i = 1; i < g.size(); ++i) {
              if (std::abs(g[i]) > best_abs) {
                best_abs = std::abs(g[i]);
                best = i;
              }
            }
            return 2 * static_cast<VertexId>(best) + (g[best] < 0.0 ? 1 : 0);
          },
          [&](const Simplex&) -> VertexId {
            Index best = 0;
            for (Index i = 1; i < g.size(); ++i)
              if (g[i] < g[best]) best = i;
            return static_cast<VertexId>(best);
          },
          [&](const HalfSpaces&) -> VertexId {
            std::size_t best = 0;
            double best_value = g.dot(explicit_vertices_[0]);
            for (std::size_t i = 1; i < explicit_vertices_.size(); ++i) {
              const double value = g.dot(explicit_vertices_[i]);
              if (value < best_value) {
                best_value = value;
                best = i;
              }
            }
            return static_cast<VertexId>(best);
          },
      },
      shape_);
  return vertex(id);
}

// Vertices -------------------------------------------------------------------

std::size_t Polytope::num_vertices() const {
  return std::visit(overloaded{
                        [](const OrderedBox& b) { return static_cast<std::size_t>(b.dim + 1); },
                        [](const L1Ball& b) { return static_cast<std::size_t>(2 * b.dim); },
                        [](const Simplex& s) { return static_cast<std::size_t>(s.dim); },
                        [this](const HalfSpaces&) { return explicit_vertices_.size(); },
                    },
                    shape_);
}

Vertex Polytope::vertex(VertexId id) const {
  if (id >= num_vertices())
    throw InvalidArgument("vertex id " + std::to_string(id) + " out of range");
  Vertex v{id, Vector::Zero(dim_)};
  std::visit(overloaded{
                 [&](const OrderedBox& box) {
                   const auto j = static_cast<Index>(id);
                   v.coords.head(j).setConstant(box.lower);
                   v.coords.tail(dim_ - j).setConstant(box.upper);
                 },
                 [&](const L1Ball& ball) {
                   const auto i = static_cast<Index>(id / 2);
                   v.coords[i] = (id % 2 == 0) ? -ball.radius : ball.radius;
                 },
                 [&](const Simplex&) { v.coords[static_cast<Index>(id)] = 1.0; },
                 [&](const HalfSpaces&) { v.coords = explicit_vertices_[id]; },
             },
             shape_);
  return v;
}

std::vector<Vertex> Polytope::vertices() const {
  std::vector<Vertex> out;
  const std::size_t count = num_vertices();
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(vertex(static_cast<VertexId>(i)));
  return out;
}

bool Polytope::contains(const Vector& x, double tol) const {
  check_dim(dim_, x, "contains: point");
  require_finite(x, "contains: point");
  if (tol < 0.0) throw InvalidArgument("contains: tolerance must be >= 0");
  return std::visit(overloaded{
                        [&](const OrderedBox& box) {
                          if (x[0] < box.lower - tol) return false;
                          for (Index i = 0; i + 1 < x.size(); ++i)
                            if (x[i] > x[i + 1] + tol) return false;
                          return x[x.size() - 1] <= box.upper + tol;
                        },
                        [&](const L1Ball& ball) { return x.lpNorm<1>() <= ball.radius + tol; },
                        [&](const Simplex&) {
                          return x.minCoeff() >= -tol && std::abs(x.sum() - 1.0) <= tol;
                        },
                        [&](const HalfSpaces& h) {
                          return ((h.C * x - h.d).array() <= tol).all();
                        },
                    },
                    shape_);
}

double Polytope::diameter() const {
  return std::visit(
      overloaded{
          // Extreme pair is all-u vs all-l.
          [](const OrderedBox& b) { return (b.upper - b.lower) * std::sqrt(static_cast<double>(b.dim)); },
          [](const L1Ball& b) { return 2.0 * b.radius; },
          [](const Simplex& s) { return s.dim == 1 ? 0.0 : std::sqrt(2.0); },
          [this](const HalfSpaces&) {
            double best = 0.0;
            for (std::size_t i = 0; i < explicit_vertices_.size(); ++i)
              for (std::size_t j = i + 1; j < explicit_vertices_.size(); ++j)
                best = std::max(best, (explicit_vertices_[i] - explicit_vertices_[j]).norm());
            return best;
          },
      },
      shape_);
}

HalfSpaces Polytope::to_hrep() const {
  return std::visit(
      overloaded{
          [](const OrderedBox& b) {
            const Index p = b.dim;
            HalfSpaces h{Matrix::Zero(p + 1, p), Vector::Zero(p + 1)};
            h.C(0, 0) = -1.0;
            h.d[0] = -b.lower;
            for (Index i = 0; i + 1 < p; ++i) {
              h.C(i + 1, i) = 1.0;
              h.C(i + 1, i + 1) = -1.0;
            }
            h.C(p, p - 1) = 1.0;
            h.d[p] = b.upper;
            return h;
          },
          [](const L1Ball& b) {
            const Index p = b.dim;
            if (p > kMaxExplicitDim)
              throw ComputationError("L1Ball: H-representation needs 2^p rows; p too large");
            const Index rows = Index{1} << p;
            HalfSpaces h{Matrix(rows, p), Vector::Constant(rows, b.radius)};
            for (Index r = 0; r < rows; ++r)
              for (Index i = 0; i < p; ++i) h.C(r, i) = ((r >> i) & 1) ? -1.0 : 1.0;
            return h;
          },
          [](const Simplex& s) {
            const Index p = s.dim;
            HalfSpaces h{Matrix::Zero(p + 2, p), Vector::Zero(p + 2)};
            for (Index i = 0; i < p; ++i) h.C(i, i) = -1.0;
            h.C.row(p).setOnes();
            h.d[p] = 1.0;
            h.C.row(p + 1).setConstant(-1.0);
            h.d[p + 1] = -1.0;
            return h;
          },
          [](const HalfSpaces& h) { return h; },
      },
      shape_);
}

bool Polytope::has_projection() const { return kind() != PolytopeKind::ExplicitHRep; }

Vector Polytope::project(const Vector& x) const {
  check_dim(dim_, x, "project: point");
  return std::visit(overloaded{
                        [&](const OrderedBox& b) { return project_ordered_box(x, b.lower, b.upper); },
                        [&](const L1Ball& b) { return project_l1(x, b.radius); },
                        [&](const Simplex&) { return project_simplex(x); },
                        [&](const HalfSpaces&) -> Vector {
                          throw InvalidArgument("ExplicitHRep polytope has no projection routine");
                        },
                    },
                    shape_);
}

std::string Polytope::describe() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const OrderedBox& b) {
                   os << "OrderedBox(l=" << b.lower << ", u=" << b.upper << ", p=" << b.dim << ")";
                 },
                 [&](const L1Ball& b) { os << "L1Ball(alpha=" << b.radius << ", p=" << b.dim << ")"; },
                 [&](const Simplex& s) { os << "Simplex(p=" << s.dim << ")"; },
                 [&](const HalfSpaces& h) {
                   os << "ExplicitHRep(m=" << h.C.rows() << ", p=" << h.C.cols() << ")";
                 },
             },
             shape_);
  return os.str();
}

// Enumeration ----------------------------------------------------------------

std::vector<Vector> enumerate_basic_solutions(const Matrix& C, const Vector& d) {
  const Index p = C.cols();
  if (p > kMaxExplicitDim) throw ComputationError("vertex enumeration guard exceeded");
  const double tol = feas_tol(C, d);
  std::vector<Vector> found;
  for_each_subset(C.rows(), p, [&](const std::vector<Index>& rows) {
    const Matrix sub = select_rows(C, rows);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    if (lu.rank() < p) return;
    Vector rhs(p);
    for (Index i = 0; i < p; ++i) rhs[i] = d[rows[static_cast<std::size_t>(i)]];
    const Vector x = lu.solve(rhs);
    if (((C * x - d).array() <= tol).all()) found.push_back(x);
  });
  // Canonical order is lexicographic on coordinates; near-duplicates from
  // degenerate vertices (more than p tight rows) collapse to one.
  std::sort(found.begin(), found.end(), [](const Vector& a, const Vector& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  std::vector<Vector> unique;
  for (auto& v : found) {
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](const Vector& u) {
      return (u - v).cwiseAbs().maxCoeff() <= tol;
    });
    if (!dup) unique.push_back(std::move(v));
  }
  return unique;
}

bool has_recession_direction(const Matrix& C) {
  const Index p = C.cols();
  Eigen::FullPivLU<Eigen::MatrixXd> full(C);
  if (full.rank() < p) return true;  // nontrivial lineality space
  // Pointed cone {y : Cy <= 0}: any extreme ray lies in the null space of
  // p-1 linearly independent rows.
  const double tol = 1e-10 * std::max(1.0, C.cwiseAbs().maxCoeff());
  bool found = false;
  auto probe = [&](const Vector& y) {
    const Vector cy = C * y;
    if ((cy.array() <= tol).all() || (cy.array() >= -tol).all()) found = true;
  };
  if (p == 1) {
    probe(Vector::Ones(1));
    return found;
  }
  for_each_subset(C.rows(), p - 1, [&](const std::vector<Index>& rows) {
    if (found) return;
    const Matrix sub = select_rows(C, rows);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    if (lu.rank() < p - 1) return;
    const Eigen::MatrixXd kernel = lu.kernel();
    Vector y = kernel.col(0);
    y.normalize();
    probe(y);
  });
  return found;
}

GeometryConstants omega_constant(const Polytope& poly) {
  const HalfSpaces h = poly.to_hrep();
  const auto verts = poly.vertices();
  if (verts.empty()) throw ComputationError("omega_constant: no vertices");

  double zeta = std::numeric_limits<double>::infinity();
  for (const auto& v : verts) {
    const Vector slack = h.d - h.C * v.coords;
    for (Index i = 0; i < slack.size(); ++i) {
      const double tol = 1e-9 * (1.0 + std::abs(h.d[i]));
      if (slack[i] > tol) zeta = std::min(zeta, slack[i]);
    }
  }
  if (!std::isfinite(zeta))
    throw ComputationError("omega_constant: no vertex has a strictly slack row");

  double phi = 0.0;
  for (Index i = 0; i < h.C.rows(); ++i) phi = std::max(phi, h.C.row(i).norm());
  if (!(phi > 0.0)) throw ComputationError("omega_constant: all rows are zero");

  GeometryConstants g;
  g.zeta = zeta;
  g.phi = phi;
  g.omega = zeta / phi;
  g.diameter = poly.diameter();
  g.num_vertices = verts.size();
  return g;
}

}  // namespace sfw
