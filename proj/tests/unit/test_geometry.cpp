#include "doctest.h"

#include <cmath>
#include <random>

#include "dudley/errors.hpp"
#include "dudley/geometry.hpp"
#include "oracles.hpp"

using namespace dudley;
using oracle::vec2;
using oracle::vec3;

TEST_CASE("support of the square") {
  const VPolytope sq = oracle::square();
  const SupportResult r = support(sq, vec2(1, 0));
  CHECK(r.value == doctest::Approx(1.0));
  CHECK(r.witness[0] == doctest::Approx(1.0));
  CHECK(std::abs(r.witness[1]) == doctest::Approx(1.0));

  const double s = 1.0 / std::sqrt(2.0);
  CHECK(support(sq, vec2(s, s)).value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("support of a ball scales with |u|") {
  const Ball disk(vec2(0, 0), 1.0);
  CHECK(support(disk, vec2(0, 2)).value == doctest::Approx(2.0));
  const Ball shifted(vec2(3, -1), 0.5);
  const SupportResult r = support(shifted, vec2(0, 1));
  CHECK(r.value == doctest::Approx(-0.5));
  CHECK((r.witness - vec2(3, -0.5)).norm() < 1e-15);
}

TEST_CASE("support rejects zero and mismatched directions") {
  const VPolytope sq = oracle::square();
  CHECK_THROWS_AS(support(sq, vec2(0, 0)), InvalidArgument);
  CHECK_THROWS_AS(support(sq, vec3(1, 0, 0)), DimensionMismatch);
  CHECK_THROWS_AS(support(Ball(vec2(0, 0), 1.0), vec2(0, 0)), InvalidArgument);
}

TEST_CASE("signed distance") {
  const Halfspace h(vec2(1, 0), 1.0);
  CHECK(signed_distance(h, vec2(0, 0)) == doctest::Approx(-1.0));
  CHECK(signed_distance(h, vec2(1, 0)) == doctest::Approx(0.0));
  CHECK(signed_distance(h, vec2(3, 4)) == doctest::Approx(2.0));
  CHECK_THROWS_AS(signed_distance(h, vec3(0, 0, 0)), DimensionMismatch);
}

TEST_CASE("halfspace normalization") {
  const Halfspace h(vec2(3, 4), 10.0);
  CHECK(h.normal().norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(h.offset() == doctest::Approx(2.0));
  CHECK_THROWS_AS(Halfspace(vec2(0, 0), 1.0), InvalidArgument);
  CHECK_THROWS_AS(Halfspace(vec2(1, NAN), 1.0), InvalidArgument);
}

TEST_CASE("halfspace_through examples") {
  Halfspace h = halfspace_through(vec2(1, 0), vec2(2, 0));
  CHECK((h.normal() - vec2(1, 0)).norm() < 1e-15);
  CHECK(h.offset() == doctest::Approx(1.0));

  h = halfspace_through(vec2(0, 0), vec2(0, -5));
  CHECK((h.normal() - vec2(0, -1)).norm() < 1e-15);
  CHECK(h.offset() == doctest::Approx(0.0));

  h = halfspace_through(vec2(1, 1), vec2(1, 1));
  const double s = 1.0 / std::sqrt(2.0);
  CHECK((h.normal() - vec2(s, s)).norm() < 1e-15);
  CHECK(h.offset() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  CHECK_THROWS_AS(halfspace_through(vec2(1, 1), vec2(0, 0)), InvalidArgument);
}

TEST_CASE("halfspace_through contains exactly the points behind it") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-5, 5);
  for (int t = 0; t < 1000; ++t) {
    const Vector p = vec3(U(rng), U(rng), U(rng));
    const Vector v = vec3(U(rng), U(rng), U(rng));
    if (v.norm() < 1e-3) continue;
    const Halfspace h = halfspace_through(p, v);
    CHECK(std::abs(h.signed_distance(p)) < 1e-12);
    const Vector x = vec3(U(rng), U(rng), U(rng));
    const double side = v.dot(x - p);
    if (side <= -1e-9) CHECK(h.contains(x));
    if (side >= 1e-9) CHECK_FALSE(h.contains(x, 0.0));
  }
}

TEST_CASE("expand_body adds eps to every support value") {
  const VPolytope point({vec2(0, 0)});
  CHECK(expand_body(point, 1.0).support(vec2(1, 0)).value == doctest::Approx(1.0));

  const VPolytope sq = oracle::square();
  CHECK(expand_body(sq, 0.0).support(vec2(0.3, -0.7)).value ==
        doctest::Approx(support(sq, vec2(0.3, -0.7)).value));
  CHECK(expand_body(sq, 0.5).support(vec2(1, 0)).value == doctest::Approx(1.5));
  CHECK_THROWS_AS(expand_body(sq, -0.1), InvalidArgument);

  std::mt19937_64 rng(2);
  const Ball ball(vec3(0.2, 0.1, -0.3), 0.8);
  for (int t = 0; t < 200; ++t) {
    const Vector u = oracle::gaussian_unit(rng, 3);
    const double eps = 0.37;
    CHECK(expand_body(ball, eps).support(u).value - support(ball, u).value == doctest::Approx(eps).epsilon(1e-12));
  }
}

TEST_CASE("support witnesses and homogeneity") {
  std::mt19937_64 rng(3);
  std::vector<Vector> pts;
  for (int i = 0; i < 20; ++i) pts.push_back(oracle::gaussian_unit(rng, 3) * 2.0);
  const VPolytope poly(pts);
  const Ball ball(vec3(1, 2, 3), 0.5);
  for (int t = 0; t < 500; ++t) {
    const Vector u = oracle::gaussian_unit(rng, 3);
    for (const Body& b : {Body(poly), Body(ball)}) {
      const SupportResult r = support(b, u);
      CHECK(u.dot(r.witness) == doctest::Approx(r.value).epsilon(1e-12));
      const double t2 = 3.7;
      CHECK(support(b, t2 * u).value == doctest::Approx(t2 * r.value).epsilon(1e-12));
    }
    // Witness lies in the body.
    CHECK((support(ball, u).witness - ball.center()).norm() <= ball.radius() + 1e-12);
    bool is_vertex = false;
    for (const auto& p : pts) is_vertex = is_vertex || (p - support(poly, u).witness).norm() == 0.0;
    CHECK(is_vertex);
  }
}

TEST_CASE("constructors validate their inputs") {
  CHECK_THROWS_AS(VPolytope({}), InvalidArgument);
  CHECK_THROWS_AS(VPolytope({vec2(0, 0), vec3(0, 0, 0)}), DimensionMismatch);
  CHECK_THROWS_AS(Ball(vec2(0, 0), 0.0), InvalidArgument);
  CHECK_THROWS_AS(Ball(vec2(0, 0), -1.0), InvalidArgument);
  CHECK_THROWS_AS(HPolytope({}), InvalidArgument);
  CHECK_THROWS_AS(HPolytope({Halfspace(vec2(1, 0), 1), Halfspace(vec3(1, 0, 0), 1)}), DimensionMismatch);
}

TEST_CASE("circumradius and reference center") {
  const VPolytope sq = oracle::square();
  CHECK(circumradius_about(sq, vec2(0, 0)) == doctest::Approx(std::sqrt(2.0)));
  CHECK((reference_center(sq) - vec2(0, 0)).norm() < 1e-15);
  const Ball b(vec2(1, 0), 2.0);
  CHECK(circumradius_about(b, vec2(0, 0)) == doctest::Approx(3.0));
  CHECK((reference_center(b) - vec2(1, 0)).norm() == 0.0);
}
