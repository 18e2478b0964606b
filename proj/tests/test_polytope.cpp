#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace sfw;
using sfw::testing::random_vector;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

// Independent vertex lists built directly from the set definitions.
std::vector<Vector> box_vertices_by_pattern(double l, double u, Index p) {
  std::vector<Vector> out;
  for (Index j = 0; j <= p; ++j) {
    Vector v(p);
    for (Index i = 0; i < p; ++i) v[i] = i < j ? l : u;
    out.push_back(v);
  }
  return out;
}

std::vector<Vector> oracle_vertices(const Polytope& poly) {
  const Index p = poly.dim();
  if (const auto* box = std::get_if<OrderedBox>(&poly.shape()))
    return box_vertices_by_pattern(box->lower, box->upper, p);
  std::vector<Vector> out;
  if (const auto* ball = std::get_if<L1Ball>(&poly.shape())) {
    for (Index i = 0; i < p; ++i)
      for (double s : {1.0, -1.0}) {
        Vector v = Vector::Zero(p);
        v[i] = s * ball->radius;
        out.push_back(v);
      }
    return out;
  }
  for (Index i = 0; i < p; ++i) out.push_back(Vector::Unit(p, i));
  return out;
}

}  // namespace

TEST_SUITE("polytope") {
  TEST_CASE("lmo examples") {
    const auto l1 = Polytope::l1_ball(1.0, 3).lmo(vec({3, -1, 2}));
    CHECK(l1.coords == vec({-1, 0, 0}));
    CHECK(l1.id == 0);

    const Polytope box = Polytope::ordered_box(-1, 1, 3);
    const auto v = box.lmo(vec({1, -2, 1}));
    CHECK(v.coords == vec({-1, 1, 1}));
    CHECK(vec({1, -2, 1}).dot(v.coords) == -2.0);

    CHECK(Polytope::simplex(3).lmo(vec({0.5, -0.2, 0.1})).coords == vec({0, 1, 0}));
    CHECK(Polytope::l1_ball(2.0, 2).lmo(vec({0, 0})).coords == vec({-2, 0}));
  }

  TEST_CASE("lmo rejects bad gradients") {
    const Polytope box = Polytope::ordered_box(-1, 1, 3);
    CHECK_THROWS_AS(box.lmo(vec({1, 2})), DimensionMismatch);
    CHECK_THROWS_AS(box.lmo(vec({1, std::numeric_limits<double>::quiet_NaN(), 0})), InvalidArgument);
    CHECK_THROWS_AS(box.lmo(vec({1, std::numeric_limits<double>::infinity(), 0})), InvalidArgument);
  }

  TEST_CASE("lmo attains the vertex minimum on every built-in shape") {
    Rng rng(11);
    for (const auto& poly : sfw::testing::builtin_polytopes()) {
      const auto verts = poly.vertices();
      const auto oracle = oracle_vertices(poly);
      REQUIRE(verts.size() == oracle.size());
      for (int t = 0; t < 1000; ++t) {
        const Vector g = random_vector(rng, poly.dim());
        const Vertex v = poly.lmo(g);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& w : oracle) best = std::min(best, g.dot(w));
        CHECK(g.dot(v.coords) == best);
        CHECK(poly.contains(v.coords, 0.0));
      }
    }
  }

  TEST_CASE("ties break toward the smallest id") {
    // All breakpoints tie for g = 0.
    CHECK(Polytope::ordered_box(-1, 1, 4).lmo(Vector::Zero(4)).id == 0);
    CHECK(Polytope::simplex(4).lmo(Vector::Constant(4, 0.3)).id == 0);
    CHECK(Polytope::l1_ball(1, 3).lmo(vec({2, -2, 1})).id == 0);
  }

  TEST_CASE("vertex ids round-trip") {
    for (const auto& poly : sfw::testing::builtin_polytopes())
      for (const auto& v : poly.vertices()) CHECK(poly.vertex(v.id).coords == v.coords);
    CHECK_THROWS_AS(Polytope::simplex(3).vertex(3), InvalidArgument);
  }

  TEST_CASE("contains examples") {
    const Polytope box = Polytope::ordered_box(-1, 1, 3);
    CHECK(box.contains(vec({-1, 0, 1}), 0.0));
    CHECK_FALSE(box.contains(vec({0, -0.5, 1}), 0.0));
    CHECK(Polytope::l1_ball(1, 2).contains(vec({0.5, 0.5}), 0.0));
    CHECK_FALSE(Polytope::l1_ball(1, 2).contains(vec({0.6, 0.5}), 0.0));
    CHECK(Polytope::l1_ball(1, 2).contains(vec({0.6, 0.5}), 0.11));
    CHECK_THROWS_AS(box.contains(vec({0, std::numeric_limits<double>::quiet_NaN(), 0}), 0.0), InvalidArgument);
  }

  TEST_CASE("enumeration examples") {
    const auto box = Polytope::ordered_box(-1, 1, 2).vertices();
    REQUIRE(box.size() == 3);
    CHECK(box[0].coords == vec({1, 1}));
    CHECK(box[1].coords == vec({-1, 1}));
    CHECK(box[2].coords == vec({-1, -1}));

    const auto simplex = Polytope::simplex(2).vertices();
    REQUIRE(simplex.size() == 2);
    CHECK(simplex[0].coords == vec({1, 0}));
    CHECK(simplex[1].coords == vec({0, 1}));

    const auto ball = Polytope::l1_ball(1, 2).vertices();
    REQUIRE(ball.size() == 4);
    std::vector<Vector> expected = {vec({1, 0}), vec({-1, 0}), vec({0, 1}), vec({0, -1})};
    for (const auto& e : expected) {
      bool found = false;
      for (const auto& v : ball) found = found || v.coords == e;
      CHECK(found);
    }
  }

  TEST_CASE("vertex counts") {
    CHECK(Polytope::ordered_box(-1, 1, 7).num_vertices() == 8);
    CHECK(Polytope::l1_ball(1, 7).num_vertices() == 14);
    CHECK(Polytope::simplex(7).num_vertices() == 7);
  }

  TEST_CASE("vertices are extreme points") {
    // No vertex is the midpoint of two others.
    for (const auto& poly : sfw::testing::builtin_polytopes()) {
      const auto verts = poly.vertices();
      for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t j = 0; j < verts.size(); ++j)
          for (std::size_t k = j + 1; k < verts.size(); ++k) {
            if (j == i || k == i) continue;
            CHECK((0.5 * (verts[j].coords + verts[k].coords) - verts[i].coords).norm() > 1e-12);
          }
    }
  }

  TEST_CASE("diameter examples") {
    CHECK(Polytope::l1_ball(1, 2).diameter() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(Polytope::ordered_box(-1, 1, 2).diameter() == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-15));
    CHECK(Polytope::simplex(3).diameter() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  }

  TEST_CASE("diameter is the attained maximum pairwise distance") {
    for (const auto& poly : sfw::testing::builtin_polytopes()) {
      const auto verts = poly.vertices();
      double best = 0.0;
      for (const auto& v : verts)
        for (const auto& w : verts) {
          const double d = (v.coords - w.coords).norm();
          CHECK(poly.diameter() >= d - 1e-12);
          best = std::max(best, d);
        }
      CHECK(poly.diameter() == doctest::Approx(best).epsilon(1e-12));
    }
  }

  TEST_CASE("explicit H-representation") {
    Matrix C(4, 2);
    C << 1, 0, 0, 1, -1, 0, 0, -1;
    const Vector d = vec({1, 1, 0, 0});
    const Polytope sq = Polytope::explicit_hrep(C, d);
    CHECK(sq.num_vertices() == 4);
    CHECK(sq.diameter() == doctest::Approx(std::sqrt(2.0)));
    CHECK(sq.lmo(vec({1, -1})).coords == vec({0, 1}));
    CHECK(sq.contains(vec({0.5, 0.5}), 0.0));
    CHECK_FALSE(sq.has_projection());
    CHECK_THROWS_AS(sq.project(vec({2, 2})), InvalidArgument);

    const GeometryConstants g = omega_constant(sq);
    CHECK(g.zeta == doctest::Approx(1.0));
    CHECK(g.phi == doctest::Approx(1.0));
    CHECK(g.omega == doctest::Approx(1.0));
    CHECK(g.num_vertices == 4);
  }

  TEST_CASE("explicit H-representation errors") {
    Matrix half(1, 2);
    half << 1, 0;
    CHECK_THROWS_AS(Polytope::explicit_hrep(half, vec({1})), ComputationError);

    Matrix C(4, 2);
    C << 1, 0, 0, 1, -1, 0, 0, -1;
    CHECK_THROWS_AS(Polytope::explicit_hrep(C, vec({-1, 1, 0, 0})), ComputationError);  // x <= -1 and x >= 0

    Matrix wedge(3, 2);
    wedge << -1, 0, 0, -1, 1, -1;  // x >= 0, y >= 0, x <= y: unbounded along (1, 1)
    CHECK_THROWS_AS(Polytope::explicit_hrep(wedge, vec({0, 0, 0})), ComputationError);

    const Index big = kMaxExplicitDim + 1;
    Matrix cube(2 * big, big);
    cube << Matrix::Identity(big, big), -Matrix::Identity(big, big);
    CHECK_THROWS_AS(Polytope::explicit_hrep(cube, Vector::Ones(2 * big)), ComputationError);
    CHECK_THROWS_AS(Polytope::explicit_hrep(C, vec({1, 1})), DimensionMismatch);
  }

  TEST_CASE("explicit H-representation of a built-in shape matches its vertices") {
    for (const auto& poly : {Polytope::ordered_box(-1, 2, 4), Polytope::simplex(4), Polytope::l1_ball(1.5, 3)}) {
      const HalfSpaces h = poly.to_hrep();
      const Polytope ex = Polytope::explicit_hrep(h.C, h.d);
      REQUIRE(ex.num_vertices() == poly.num_vertices());
      for (const auto& v : poly.vertices()) {
        bool found = false;
        for (const auto& w : ex.vertices()) found = found || (v.coords - w.coords).norm() < 1e-9;
        CHECK(found);
      }
      Rng rng(3);
      for (int t = 0; t < 200; ++t) {
        const Vector g = random_vector(rng, poly.dim());
        CHECK(g.dot(ex.lmo(g).coords) == doctest::Approx(g.dot(poly.lmo(g).coords)).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("omega constant examples") {
    const GeometryConstants interval = omega_constant(Polytope::ordered_box(-1, 1, 1));
    CHECK(interval.zeta == doctest::Approx(2.0));
    CHECK(interval.phi == doctest::Approx(1.0));
    CHECK(interval.omega == doctest::Approx(2.0));

    // Rows -x1 <= 0, -x2 <= 0, x1 + x2 <= 1, -x1 - x2 <= -1; slack 1 on the
    // coordinate row of the nonzero entry, largest row norm sqrt(2).
    const GeometryConstants s2 = omega_constant(Polytope::simplex(2));
    CHECK(s2.zeta == doctest::Approx(1.0));
    CHECK(s2.phi == doctest::Approx(std::sqrt(2.0)));
    CHECK(s2.omega == doctest::Approx(1.0 / std::sqrt(2.0)));
  }

  TEST_CASE("omega constant is positive and consistent") {
    for (const auto& poly : sfw::testing::builtin_polytopes()) {
      if (poly.kind() == PolytopeKind::Simplex && poly.dim() == 1) continue;
      const GeometryConstants g = omega_constant(poly);
      CHECK(g.zeta > 0.0);
      CHECK(g.phi > 0.0);
      CHECK(g.omega == g.zeta / g.phi);
      CHECK(g.diameter == poly.diameter());
      CHECK(g.num_vertices == poly.num_vertices());
    }
  }

  TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(Polytope::ordered_box(1, 1, 3), InvalidArgument);
    CHECK_THROWS_AS(Polytope::ordered_box(-1, 1, 0), InvalidArgument);
    CHECK_THROWS_AS(Polytope::l1_ball(0.0, 3), InvalidArgument);
    CHECK_THROWS_AS(Polytope::l1_ball(-1.0, 3), InvalidArgument);
    CHECK_THROWS_AS(Polytope::simplex(0), InvalidArgument);
  }
}
