#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "dudley/geometry.hpp"

namespace dudley {

/// Uniform-grid index over points in R^d for radius and nearest-neighbor
/// queries. Cells are cubes of side `cell`; keys are packed into 64 bits.
class PointGrid {
 public:
  static constexpr std::size_t kMaxDim = 16;

  PointGrid(std::size_t dim, const Vector& origin, double cell, double extent);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return count_; }
  double cell() const { return cell_; }

  void insert(const Vector& p);

  /// Point `i` in insertion order.
  Eigen::Map<const Vector> point(std::size_t i) const {
    return Eigen::Map<const Vector>(coords_.data() + i * dim_, static_cast<Eigen::Index>(dim_));
  }

  /// True if some indexed point lies within `radius` (<= cell) of `x`.
  bool any_within(const Vector& x, double radius) const;

  /// Index and distance of the nearest indexed point; nullopt when empty.
  struct Nearest {
    std::size_t index;
    double distance;
  };
  std::optional<Nearest> nearest(const Vector& x) const;

  /// Indices of all points within `radius` (<= cell) of `x`.
  void within(const Vector& x, double radius, std::vector<std::size_t>& out) const;

  /// Smallest distance between two distinct indexed points (+inf if < 2).
  double min_pairwise_distance() const;

 private:
  using CellIndex = std::array<std::int64_t, kMaxDim>;

  std::uint64_t key_of(const CellIndex& cell) const;
  void cell_of(const double* x, CellIndex& out) const;
  std::uint32_t head(std::uint64_t key) const;
  void set_head(std::uint64_t key, std::uint32_t value);
  void grow_table();

  template <class Visit>
  bool visit_block(const CellIndex& base, std::int64_t radius, Visit&& visit) const;

  template <class Visit>
  bool visit_ball(const double* x, double r2, Visit&& visit) const;

  double sq_dist(std::size_t j, const double* x) const {
    const double* p = coords_.data() + j * dim_;
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) s += (p[i] - x[i]) * (p[i] - x[i]);
    return s;
  }

  double brute_nearest(const Vector& x, std::size_t& best) const;

  std::size_t dim_;
  Vector origin_;
  double cell_;
  std::int64_t bias_;
  unsigned bits_;
  std::size_t count_ = 0;
  std::vector<double> coords_;
  std::vector<std::uint32_t> next_;
  // Open addressing table: key -> head point index.
  struct Slot {
    std::uint64_t key;
    std::uint32_t head;
  };
  std::vector<Slot> slots_;
  std::size_t used_ = 0;
};

/// A point set Q on the sphere of radius `radius` about `center`, built
/// with separation `delta`.
class SpherePacking {
 public:
  /// Checks that every point lies on the sphere (relative tolerance 1e-9).
  /// Separation is not checked here; see verify_packing.
  SpherePacking(std::vector<Vector> points, Vector center, double radius, double delta,
                std::uint64_t seed);

  const std::vector<Vector>& points() const { return points_; }
  const Vector& center() const { return center_; }
  double radius() const { return radius_; }
  double delta() const { return delta_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t dim() const { return static_cast<std::size_t>(center_.size()); }
  std::size_t size() const { return points_.size(); }

  /// Grid over the points sized for queries at scale delta.
  PointGrid make_index() const;

 private:
  std::vector<Vector> points_;
  Vector center_;
  double radius_;
  double delta_;
  std::uint64_t seed_;
};

struct PackingOptions {
  /// Greedy insertion stops after this many consecutive rejections.
  std::size_t max_consecutive_rejections = 10000;
  /// Sampled coverage sweeps, used only where exact cell completion is not
  /// available (d >= 5 or very coarse delta).
  std::size_t sweep_samples = 200000;
  std::size_t clean_sweeps = 2;
  std::size_t max_sweeps = 200;
  /// Samples for the closing verify_packing call; construction throws if it
  /// fails. 0 disables the check.
  std::size_t final_check_samples = 100000;
};

/// Builds a maximal delta-packing of the sphere of radius R about `center`.
///
/// d = 1: the two points center +- R. d = 2: floor(2 pi / theta) equally
/// spaced points, theta = 2 asin(delta / 2R), so adjacent chords are >= delta
/// and half-steps are <= delta. d >= 3: greedy insertion of uniform sphere
/// samples, rejecting those within delta of an accepted point, stopped
/// after `max_consecutive_rejections` consecutive rejections. For d = 3, 4
/// the greedy set is then completed exactly: every spherical Voronoi cell
/// with a vertex farther than delta from its site gets that vertex inserted,
/// until none remain. Higher dimensions fall back to sampled sweeps.
/// delta > 2R yields a single point, which covers S.
SpherePacking build_packing(std::size_t d, const Vector& center, double R, double delta,
                            std::uint64_t seed, const PackingOptions& options = {});

struct PackingReport {
  double max_gap;
  double min_separation;
  bool pass;
};

/// Exact minimum separation and sampled covering radius of a packing.
PackingReport verify_packing(const SpherePacking& packing, std::size_t n_samples, std::uint64_t seed);

/// Reference envelope (4R / delta)^(d-1) for reporting measured counts.
double packing_cardinality_bound(std::size_t d, double R, double delta);

}  // namespace dudley
