#pragma once

#include "sfw/types.hpp"

#include <string>
#include <variant>
#include <vector>

namespace sfw {

/// {x : l <= x_1 <= x_2 <= ... <= x_p <= u}
struct OrderedBox {
  double lower;
  double upper;
  Index dim;
};

/// {x : ||x||_1 <= radius}
struct L1Ball {
  double radius;
  Index dim;
};

/// Probability simplex {x >= 0, sum x = 1}.
struct Simplex {
  Index dim;
};

/// {x : C x <= d}; validated bounded and nonempty at construction.
struct HalfSpaces {
  Matrix C;
  Vector d;
};

enum class PolytopeKind { OrderedBox, L1Ball, Simplex, ExplicitHRep };

std::string to_string(PolytopeKind kind);

/// Canonical vertex identifier.
///
/// OrderedBox: breakpoint j in [0, p], the number of leading coordinates at
///   the lower bound.
/// L1Ball: 2*i + (s < 0) where s is the sign of the gradient coordinate that
///   selects the vertex; the vertex itself is -s * radius * e_i.
/// Simplex: coordinate index i (vertex e_i).
/// ExplicitHRep: index into the enumerated vertex list.
using VertexId = std::uint64_t;

struct Vertex {
  VertexId id = 0;
  Vector coords;
};

struct GeometryConstants {
  double omega = 0.0;
  double zeta = 0.0;
  double phi = 0.0;
  double diameter = 0.0;
  std::size_t num_vertices = 0;
};

/// Largest dimension for which explicit H-representations are accepted
/// (vertex enumeration is combinatorial in the row count).
inline constexpr Index kMaxExplicitDim = 15;

class Polytope {
public:
  using Shape = std::variant<OrderedBox, L1Ball, Simplex, HalfSpaces>;

  static Polytope ordered_box(double lower, double upper, Index dim);
  static Polytope l1_ball(double radius, Index dim);
  static Polytope simplex(Index dim);
  /// Enumerates all vertices; throws if the set is empty, unbounded or the
  /// dimension exceeds kMaxExplicitDim.
  static Polytope explicit_hrep(Matrix C, Vector d);

  PolytopeKind kind() const;
  Index dim() const { return dim_; }
  const Shape& shape() const { return shape_; }

  /// Exact linear minimization oracle: a vertex minimizing <g, v>.
  /// Ties break toward the smallest canonical id.
  Vertex lmo(const Vector& g) const;

  bool contains(const Vector& x, double tol) const;

  std::size_t num_vertices() const;
  std::vector<Vertex> vertices() const;
  Vertex vertex(VertexId id) const;
  /// Vertex with the smallest canonical id; used as the common start point.
  Vertex first_vertex() const { return vertex(0); }

  double diameter() const;

  /// Row-wise H-representation. Simplex equality becomes a pair of opposing
  /// inequalities; L1Ball expands into 2^p sign rows (p <= kMaxExplicitDim).
  HalfSpaces to_hrep() const;

  bool has_projection() const;
  /// Euclidean projection; throws InvalidArgument for ExplicitHRep.
  Vector project(const Vector& x) const;

  std::string describe() const;

private:
  Polytope(Shape shape, Index dim) : shape_(std::move(shape)), dim_(dim) {}

  Shape shape_;
  Index dim_;
  // Enumerated vertices for ExplicitHRep, in canonical order.
  std::vector<Vector> explicit_vertices_;
};

/// Geometry constants omega = zeta / phi, with phi taken over all rows.
GeometryConstants omega_constant(const Polytope& poly);

/// Vertices of {Cx <= d} via basic-solution enumeration (p <= kMaxExplicitDim).
std::vector<Vector> enumerate_basic_solutions(const Matrix& C, const Vector& d);

/// True if {Cx <= d} has a nonzero recession direction.
bool has_recession_direction(const Matrix& C);

// Projections -------------------------------------------------------------

/// Euclidean projection onto the l1 ball of the given radius (sort-based).
Vector project_l1(const Vector& x, double radius);

/// Euclidean projection onto the unit simplex (sort-based).
Vector project_simplex(const Vector& x);

/// Euclidean projection onto {l <= x_1 <= ... <= x_p <= u}: pool adjacent
/// violators for the monotone fit, then clip to [l, u].
Vector project_ordered_box(const Vector& x, double lower, double upper);

}  // namespace sfw
