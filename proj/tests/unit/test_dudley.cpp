#include "doctest.h"

#include <cmath>
#include <random>

#include "dudley/dudley.hpp"
#include "dudley/errors.hpp"
#include "oracles.hpp"

using namespace dudley;
using oracle::vec2;
using oracle::vec3;

namespace {

DudleyConfig config(double eps, Mode mode = Mode::paper_exact, std::uint64_t seed = 1) {
  DudleyConfig c;
  c.epsilon = eps;
  c.mode = mode;
  c.seed = seed;
  return c;
}

void check_invariants(const Construction& c) {
  REQUIRE(c.result.size() == c.packing.size());
  REQUIRE(c.contacts.size() == c.packing.size());
  for (std::size_t i = 0; i < c.result.size(); ++i) {
    const Halfspace& h = c.result.halfspaces()[i];
    const Contact& k = c.contacts[i];
    CHECK(k.q == c.packing.points()[i]);
    CHECK(std::abs(h.signed_distance(k.nq)) <= 1e-8);
    const Vector x = k.q - k.nq;
    const double cosine = x.dot(h.normal()) / (x.norm() * h.normal().norm());
    CHECK(cosine >= 1.0 - 1e-12);
    // Supporting: the body touches the plane and stays inside.
    const double hc = oracle::support_value(c.body, h.normal());
    CHECK(hc <= h.offset() + 1e-8);
    CHECK(hc >= h.offset() - 1e-7 * h.normal().norm());
  }
}

}  // namespace

TEST_CASE("validate_sandwich examples") {
  const SandwichReport disk = validate_sandwich(Ball(vec2(0, 0), 1.0), 2);
  CHECK(disk.inradius == doctest::Approx(1.0));
  CHECK(disk.circumradius == doctest::Approx(1.0));
  CHECK(disk.ok);

  const SandwichReport sq = validate_sandwich(oracle::square(1.5), 2);
  CHECK(sq.inradius == doctest::Approx(1.5));
  CHECK(sq.circumradius == doctest::Approx(1.5 * std::sqrt(2.0)));
  CHECK_FALSE(sq.ok);
  CHECK(sq.exact);

  const SandwichReport shifted = validate_sandwich(Ball(vec2(0.5, 0), 1.0), 2);
  CHECK(shifted.inradius == doctest::Approx(0.5));
  CHECK_FALSE(shifted.ok);

  const SandwichReport unit_square = validate_sandwich(oracle::square(), 2);
  CHECK(unit_square.inradius == doctest::Approx(1.0));
  CHECK(unit_square.circumradius == doctest::Approx(std::sqrt(2.0)));
  CHECK(unit_square.ok);

  const SandwichReport outside = validate_sandwich(VPolytope({vec2(2, 0), vec2(3, 0), vec2(2, 1)}), 2);
  CHECK(outside.inradius < 0.0);
  CHECK_FALSE(outside.ok);

  // Cube [-1,1]^3: inradius 1, circumradius sqrt 3 <= 3.
  std::vector<Vector> cube;
  for (int m = 0; m < 8; ++m) cube.push_back(vec3(m & 1 ? 1 : -1, m & 2 ? 1 : -1, m & 4 ? 1 : -1));
  const SandwichReport c3 = validate_sandwich(VPolytope(cube), 3);
  CHECK(c3.inradius == doctest::Approx(1.0));
  CHECK(c3.circumradius == doctest::Approx(std::sqrt(3.0)));
  CHECK(c3.ok);
}

TEST_CASE("construction parameters") {
  const ConstructionPlan disk = plan_construction(Ball(vec2(0, 0), 1.0), 0.1, Mode::paper_exact);
  CHECK(disk.delta == doctest::Approx(0.15811).epsilon(1e-4));
  CHECK(disk.delta == doctest::Approx(std::sqrt(2.0 * 0.1 / 8.0)));
  CHECK(disk.sphere_radius == doctest::Approx(4.0));
  CHECK(disk.sphere_center.norm() == 0.0);

  const ConstructionPlan gen = plan_construction(Ball(vec2(3, 1), 2.0), 0.1, Mode::generalized);
  CHECK(gen.sphere_radius == doctest::Approx(4.0));
  CHECK((gen.sphere_center - vec2(3, 1)).norm() < 1e-15);
  CHECK(gen.delta == doctest::Approx(std::sqrt(2.0 * 0.1 / 12.0)));

  // Vertex centroid (0, 1/3) of a triangle.
  const ConstructionPlan tri =
      plan_construction(VPolytope({vec2(-1, 0), vec2(1, 0), vec2(0, 1)}), 0.05, Mode::generalized);
  CHECK((tri.sphere_center - vec2(0, 1.0 / 3.0)).norm() < 1e-15);
  CHECK(tri.scale == doctest::Approx(std::sqrt(1.0 + 1.0 / 9.0)));

  CHECK_THROWS_AS(plan_construction(Ball(vec2(0, 0), 1.0), 0.0, Mode::paper_exact), InvalidArgument);
  CHECK_THROWS_AS(plan_construction(Ball(vec2(0, 0), 1.0), -1.0, Mode::paper_exact), InvalidArgument);
}

TEST_CASE("modes parse and print") {
  CHECK(std::string(to_string(Mode::paper_exact)) == "paper-exact");
  CHECK(std::string(to_string(Mode::generalized)) == "generalized");
  CHECK(parse_mode("paper-exact") == Mode::paper_exact);
  CHECK(parse_mode("generalized") == Mode::generalized);
  CHECK_THROWS_AS(parse_mode("exact"), InvalidArgument);
}

TEST_CASE("disk at eps 0.1") {
  const auto [c, r] = approximate(Ball(vec2(0, 0), 1.0), config(0.1, Mode::paper_exact, 7));
  CHECK(r.containment_ok);
  CHECK(r.bounded);
  REQUIRE(r.hausdorff_estimate.has_value());
  CHECK(*r.hausdorff_estimate >= 0.0);
  CHECK(*r.hausdorff_estimate <= 0.1);
  REQUIRE(r.exact_gap.has_value());
  const double oracle_gap = oracle::exact_gap_bruteforce_2d(c.body, c.result);
  CHECK(*r.exact_gap == doctest::Approx(oracle_gap).epsilon(1e-9));
  CHECK(oracle_gap <= 0.1);
  CHECK(*r.hausdorff_estimate <= oracle_gap + 1e-12);
  CHECK(r.halfspace_count == c.result.size());
  CHECK(c.sphere_radius == 4.0);
  check_invariants(c);
}

TEST_CASE("square at eps 0.05") {
  const auto [c, r] = approximate(oracle::square(), config(0.05, Mode::paper_exact, 3));
  CHECK(r.containment_ok);
  REQUIRE(r.hausdorff_estimate.has_value());
  CHECK(*r.hausdorff_estimate <= 0.05);
  CHECK(oracle::exact_gap_bruteforce_2d(c.body, c.result) <= 0.05);
  CHECK(r.envelope_ratio > 0.0);
  CHECK(r.envelope_ratio <= 4.0);
  check_invariants(c);
}

TEST_CASE("one point gives a single halfspace") {
  const Ball segment(Vector::Zero(1), 1.0);
  const auto [c, r] = approximate(segment, config(200.0));
  CHECK(c.packing.size() == 1);
  CHECK(c.result.size() == 1);
  CHECK(r.containment_ok);
  CHECK_FALSE(r.bounded);
  CHECK(std::isinf(*r.hausdorff_estimate));
  check_invariants(c);
}

TEST_CASE("paper-exact mode checks its hypothesis") {
  CHECK_THROWS_AS(approximate(Ball(vec2(0.5, 0), 1.0), config(0.1)), SandwichViolation);
  CHECK_THROWS_AS(approximate(oracle::square(1.5), config(0.1)), SandwichViolation);
  CHECK_THROWS_AS(approximate(oracle::square(), config(0.0)), InvalidArgument);

  const auto [c, r] = approximate(Ball(vec2(0.5, 0), 1.0), config(0.1, Mode::generalized));
  CHECK(r.containment_ok);
  CHECK(*r.exact_gap <= 0.1);
  check_invariants(c);
}

TEST_CASE("generalized mode on random 3D polytopes") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.5, 2.0);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<Vector> v;
    for (int i = 0; i < 12; ++i) v.push_back(vec3(1, -2, 0.5) + U(rng) * oracle::gaussian_unit(rng, 3));
    const VPolytope body(v);
    const auto [c, r] = approximate(body, config(0.3, Mode::generalized, static_cast<std::uint64_t>(trial)));
    CHECK(r.containment_ok);
    CHECK(r.bounded);
    CHECK(*r.hausdorff_estimate <= 0.3);
    check_invariants(c);
  }
}

TEST_CASE("construction is deterministic") {
  const auto a = approximate(oracle::square(), config(0.1, Mode::paper_exact, 11)).first;
  const auto b = approximate(oracle::square(), config(0.1, Mode::paper_exact, 11)).first;
  REQUIRE(a.result.size() == b.result.size());
  for (std::size_t i = 0; i < a.result.size(); ++i) {
    CHECK(a.result.halfspaces()[i].normal() == b.result.halfspaces()[i].normal());
    CHECK(a.result.halfspaces()[i].offset() == b.result.halfspaces()[i].offset());
  }

  const Ball ball(Vector::Zero(3), 1.0);
  const auto p = approximate(ball, config(0.3, Mode::generalized, 2)).first;
  const auto q = approximate(ball, config(0.3, Mode::generalized, 2)).first;
  REQUIRE(p.packing.size() == q.packing.size());
  for (std::size_t i = 0; i < p.packing.size(); ++i) CHECK(p.packing.points()[i] == q.packing.points()[i]);
}

TEST_CASE("audit of a valid construction") {
  const auto c = approximate(Ball(vec2(0, 0), 1.0), config(0.1, Mode::paper_exact, 7)).first;
  const ProofAudit audit = audit_proof(c, 10000, 7);
  CHECK(audit.passed());
  CHECK(audit.violations.empty());
  CHECK(audit.records.size() == 10000);
  CHECK(audit.bounds.delta == doctest::Approx(c.delta));
  CHECK(audit.bounds.sin_gamma == doctest::Approx(4.0 * c.delta / 2.0));
  CHECK(audit.bounds.boundary == doctest::Approx(0.05));
  for (const auto& rec : audit.records) {
    // p is on the unit circle and p' on the sphere of radius 4.
    CHECK(rec.p.norm() == doctest::Approx(1.0));
    CHECK(rec.p_prime.norm() == doctest::Approx(4.0));
    CHECK(rec.gap_pprime_q <= c.delta + kAuditTol);
    CHECK(rec.dist_p_boundary <= 0.05);
  }

  const ProofAudit one = audit_proof(c, 1, 3);
  REQUIRE(one.records.size() == 1);
  CHECK(one.violations.size() <= 1);
  const AuditRecord& r = one.records.front();
  for (double x : {r.gap_pprime_q, r.gap_p_nq, r.ell, r.sin_gamma, r.dist_p_boundary}) CHECK(std::isfinite(x));

  CHECK_THROWS_AS(audit_proof(c, 0, 1), InvalidArgument);
}

TEST_CASE("audit of the square") {
  const auto c = approximate(oracle::square(), config(0.05, Mode::paper_exact, 2)).first;
  const ProofAudit audit = audit_proof(c, 10000, 2);
  CHECK(audit.passed());
  // Samples land at corners with a whole cone of normals; every p is on the boundary.
  for (const auto& rec : audit.records) CHECK(rec.p.cwiseAbs().maxCoeff() == doctest::Approx(1.0));
}

TEST_CASE("audit detects a packing hole") {
  const auto c = approximate(Ball(vec2(0, 0), 1.0), config(0.1, Mode::paper_exact, 7)).first;
  std::vector<Vector> kept;
  for (std::size_t i = 0; i < c.packing.size(); ++i) {
    if (i < 10 || i >= 14) kept.push_back(c.packing.points()[i]);
  }
  SpherePacking holed(kept, c.packing.center(), c.packing.radius(), c.packing.delta(), c.packing.seed());
  const Construction broken = build_construction(c.body, c.mode, c.epsilon, holed, c.projection_tol);
  const ProofAudit audit = audit_proof(broken, 10000, 1);
  CHECK_FALSE(audit.passed());
  CHECK(audit.failures[0] > 0);
}
