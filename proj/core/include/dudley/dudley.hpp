#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dudley/geometry.hpp"
#include "dudley/packing.hpp"

namespace dudley {

enum class Mode { paper_exact, generalized };

/// "paper-exact" / "generalized".
const char* to_string(Mode mode);
Mode parse_mode(const std::string& text);

struct DudleyConfig {
  double epsilon = 0.1;
  Mode mode = Mode::paper_exact;
  std::uint64_t seed = 0;
  double projection_tol = kDefaultTol;
  PackingOptions packing;
  /// Directions for the sampled Hausdorff estimate in the report; 0 skips it.
  std::size_t verify_directions = 10000;
};

struct SandwichReport {
  double inradius;
  double circumradius;
  bool ok;
  /// False when the inradius came from sampled directions.
  bool exact = true;
};

/// Inradius about the origin (min over unit u of h_C(u); negative when the
/// origin is outside C) and circumradius about the origin, against the
/// bounds 1 and d. Exact by facet enumeration when the vertex count allows,
/// otherwise a sampled upper estimate of the inradius.
SandwichReport validate_sandwich(const Body& body, std::size_t d);

struct Contact {
  Vector q;
  Vector nq;
};

struct Construction {
  Body body;
  Mode mode;
  double epsilon;
  double delta;
  Vector sphere_center;
  double sphere_radius;
  /// d in paper-exact mode, the circumradius R about the centroid otherwise.
  double scale;
  double projection_tol;
  SpherePacking packing;
  std::vector<Contact> contacts;
  HPolytope result;
};

struct ApproximationReport {
  std::size_t halfspace_count;
  double delta;
  double epsilon;
  std::size_t dim;
  Mode mode;
  std::uint64_t seed;
  double sphere_radius;
  double theoretical_envelope;
  double envelope_ratio;
  bool containment_ok;
  double containment_worst;
  bool bounded;
  /// Sampled lower estimate; +inf when D is unbounded, nullopt when skipped.
  std::optional<double> hausdorff_estimate;
  std::size_t hausdorff_directions;
  /// Exact gap in the plane.
  std::optional<double> exact_gap;
  double runtime_ms;
};

/// Sphere parameters and delta for a body, epsilon and mode.
struct ConstructionPlan {
  Vector sphere_center;
  double sphere_radius;
  double scale;
  double delta;
};
ConstructionPlan plan_construction(const Body& body, double epsilon, Mode mode);

/// One supporting halfspace per packing point: through n(q) with normal q - n(q).
Construction build_construction(const Body& body, Mode mode, double epsilon, SpherePacking packing,
                                double projection_tol = kDefaultTol);

/// Full pipeline: sandwich gate (paper-exact), packing, halfspaces, checks.
/// Throws SandwichViolation in paper-exact mode when the hypothesis fails.
std::pair<Construction, ApproximationReport> approximate(const Body& body, const DudleyConfig& config);

struct AuditRecord {
  Vector p;
  Vector v;
  Vector p_prime;
  std::size_t q_index;
  Vector q;
  Vector nq;
  double gap_pprime_q;
  double gap_p_nq;
  double ell;
  double sin_gamma;
  double dist_p_boundary;
  /// Checks (a) through (e).
  std::array<bool, 5> ok;
};

struct AuditBounds {
  double delta;
  double contraction_slack;
  double ell;
  double sin_gamma;
  double boundary;
};

struct ProofAudit {
  std::size_t n_samples;
  std::uint64_t seed;
  AuditBounds bounds;
  std::vector<AuditRecord> records;
  /// Samples failing only check (a), within the coverage allowance.
  std::vector<std::size_t> coverage_misses;
  /// Result of re-verifying the packing after coverage misses.
  std::optional<bool> packing_reverified;
  std::vector<std::size_t> violations;
  /// Per check (a)..(e): number of failing samples.
  std::array<std::size_t, 5> failures;

  bool passed() const { return violations.empty(); }
};

inline constexpr double kAuditTol = 1e-7;
/// Fraction of samples allowed to fail check (a) alone.
inline constexpr double kCoverageAllowance = 1e-3;

ProofAudit audit_proof(const Construction& construction, std::size_t n_samples, std::uint64_t seed);

}  // namespace dudley
