#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dudley/geometry.hpp"

namespace dudley {

struct ContainmentResult {
  bool ok;
  /// Largest signed distance of C past any halfspace of D.
  double worst_violation;
};

/// Exact check of C inside D: every vertex against every halfspace, or the
/// ball's support along every normal.
ContainmentResult check_containment(const Body& C, const HPolytope& D, double tol = 1e-8);

struct HausdorffEstimate {
  double estimate;
  Vector worst_direction;
  std::size_t n_directions;
  /// Sampled estimates are lower bounds, never certificates.
  bool certified = false;
};

/// max over sampled unit directions u of h_D(u) - h_C(u), clamped at 0.
/// Throws UnboundedError if D is unbounded.
HausdorffEstimate hausdorff_gap(const Body& C, const HPolytope& D, std::size_t n_directions,
                                std::uint64_t seed);

/// Vertices of a bounded 2D H-polytope in counterclockwise order.
/// Throws UnboundedError if D is unbounded and InfeasibleError if empty.
std::vector<Vector> polygon_vertices(const HPolytope& D);

/// Exact Hausdorff distance for C inside D in the plane: the largest
/// distance from a vertex of D to C.
double exact_gap_2d(const Body& C, const HPolytope& D);

}  // namespace dudley
