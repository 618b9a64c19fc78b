#include "dudley/packing.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>
#include <limits>
#include <numbers>

#include "dudley/errors.hpp"
#include "dudley/random.hpp"
#include "tangent_cells.hpp"

namespace dudley {

namespace {

constexpr std::uint64_t kEmpty = ~std::uint64_t{0};
constexpr std::uint32_t kNone = ~std::uint32_t{0};

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

PointGrid::PointGrid(std::size_t dim, const Vector& origin, double cell, double extent)
    : dim_(dim), origin_(origin), cell_(cell) {
  if (dim_ < 1 || dim_ > kMaxDim) throw InvalidArgument("grid dimension must be in [1, 16]");
  require_dim(origin_, dim_);
  if (!(cell_ > 0.0)) throw InvalidArgument("grid cell size must be positive");
  bits_ = static_cast<unsigned>(std::min<std::size_t>(32, 64 / dim_));
  const auto max_half = static_cast<double>((std::int64_t{1} << (bits_ - 1)) - 4);
  if (extent / cell_ + 2.0 > max_half) cell_ = extent / (max_half - 2.0);
  bias_ = std::int64_t{1} << (bits_ - 1);
  slots_.assign(1024, Slot{kEmpty, kNone});
}

void PointGrid::cell_of(const double* x, CellIndex& out) const {
  for (std::size_t i = 0; i < dim_; ++i) {
    out[i] = static_cast<std::int64_t>(std::floor((x[i] - origin_[static_cast<Eigen::Index>(i)]) / cell_));
  }
}

std::uint64_t PointGrid::key_of(const CellIndex& cell) const {
  std::uint64_t key = 0;
  const std::uint64_t mask = bits_ >= 64 ? kEmpty : ((std::uint64_t{1} << bits_) - 1);
  for (std::size_t i = 0; i < dim_; ++i) {
    key |= (static_cast<std::uint64_t>(cell[i] + bias_) & mask) << (i * bits_);
  }
  return key;
}

std::uint32_t PointGrid::head(std::uint64_t key) const {
  const std::size_t mask = slots_.size() - 1;
  for (std::size_t slot = mix(key) & mask;; slot = (slot + 1) & mask) {
    if (slots_[slot].key == key) return slots_[slot].head;
    if (slots_[slot].key == kEmpty) return kNone;
  }
}

void PointGrid::set_head(std::uint64_t key, std::uint32_t value) {
  if (2 * (used_ + 1) > slots_.size()) grow_table();
  const std::size_t mask = slots_.size() - 1;
  for (std::size_t slot = mix(key) & mask;; slot = (slot + 1) & mask) {
    if (slots_[slot].key == key) {
      slots_[slot].head = value;
      return;
    }
    if (slots_[slot].key == kEmpty) {
      slots_[slot] = {key, value};
      ++used_;
      return;
    }
  }
}

void PointGrid::grow_table() {
  std::vector<Slot> old = std::move(slots_);
  slots_.assign(old.size() * 2, Slot{kEmpty, kNone});
  used_ = 0;
  for (const Slot& s : old) {
    if (s.key != kEmpty) set_head(s.key, s.head);
  }
}

void PointGrid::insert(const Vector& p) {
  require_dim(p, dim_);
  if (count_ >= kNone - 1) throw Error("point grid is full");
  CellIndex c{};
  cell_of(p.data(), c);
  const std::uint64_t key = key_of(c);
  coords_.insert(coords_.end(), p.data(), p.data() + p.size());
  next_.push_back(head(key));
  set_head(key, static_cast<std::uint32_t>(count_));
  ++count_;
}

template <class Visit>
bool PointGrid::visit_block(const CellIndex& base, std::int64_t radius, Visit&& visit) const {
  CellIndex offset{};
  CellIndex cell{};
  for (std::size_t i = 0; i < dim_; ++i) offset[i] = -radius;
  while (true) {
    for (std::size_t i = 0; i < dim_; ++i) cell[i] = base[i] + offset[i];
    for (std::uint32_t j = head(key_of(cell)); j != kNone; j = next_[j]) {
      if (visit(static_cast<std::size_t>(j))) return true;
    }
    std::size_t axis = 0;
    while (axis < dim_ && offset[axis] == radius) offset[axis++] = -radius;
    if (axis == dim_) return false;
    ++offset[axis];
  }
}

template <class Visit>
bool PointGrid::visit_ball(const double* x, double r2, Visit&& visit) const {
  if (std::pow(3.0, static_cast<double>(dim_)) > static_cast<double>(count_)) {
    for (std::size_t j = 0; j < count_; ++j) {
      if (visit(j)) return true;
    }
    return false;
  }
  CellIndex base{};
  cell_of(x, base);
  // Squared distance from x to the lower and upper neighbor slabs per axis.
  std::array<double, kMaxDim> lo{};
  std::array<double, kMaxDim> hi{};
  for (std::size_t i = 0; i < dim_; ++i) {
    const double t = x[i] - origin_[static_cast<Eigen::Index>(i)] - static_cast<double>(base[i]) * cell_;
    lo[i] = t * t;
    hi[i] = (cell_ - t) * (cell_ - t);
  }
  for (std::uint32_t j = head(key_of(base)); j != kNone; j = next_[j]) {
    if (visit(static_cast<std::size_t>(j))) return true;
  }
  CellIndex offset{};
  CellIndex cell{};
  for (std::size_t i = 0; i < dim_; ++i) offset[i] = -1;
  while (true) {
    double gap = 0.0;
    bool centre = true;
    for (std::size_t i = 0; i < dim_; ++i) {
      cell[i] = base[i] + offset[i];
      if (offset[i] < 0) gap += lo[i];
      if (offset[i] > 0) gap += hi[i];
      centre = centre && offset[i] == 0;
    }
    if (!centre && gap <= r2) {
      for (std::uint32_t j = head(key_of(cell)); j != kNone; j = next_[j]) {
        if (visit(static_cast<std::size_t>(j))) return true;
      }
    }
    std::size_t axis = 0;
    while (axis < dim_ && offset[axis] == 1) offset[axis++] = -1;
    if (axis == dim_) return false;
    ++offset[axis];
  }
}

bool PointGrid::any_within(const Vector& x, double radius) const {
  if (radius > cell_) throw InvalidArgument("any_within radius exceeds the grid cell");
  require_dim(x, dim_);
  const double r2 = radius * radius;
  const double* px = x.data();
  return visit_ball(px, r2, [&](std::size_t j) { return sq_dist(j, px) <= r2; });
}

void PointGrid::within(const Vector& x, double radius, std::vector<std::size_t>& out) const {
  if (radius > cell_) throw InvalidArgument("within radius exceeds the grid cell");
  require_dim(x, dim_);
  out.clear();
  const double r2 = radius * radius;
  const double* px = x.data();
  visit_ball(px, r2, [&](std::size_t j) {
    if (sq_dist(j, px) <= r2) out.push_back(j);
    return false;
  });
}

double PointGrid::brute_nearest(const Vector& x, std::size_t& best) const {
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < count_; ++j) {
    const double d2 = (point(j) - x).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = j;
    }
  }
  return best_d2;
}

std::optional<PointGrid::Nearest> PointGrid::nearest(const Vector& x) const {
  require_dim(x, dim_);
  if (count_ == 0) return std::nullopt;
  const double* px = x.data();
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  auto consider = [&](std::size_t j) {
    const double d2 = sq_dist(j, px);
    if (d2 < best_d2 || (d2 == best_d2 && j < best)) {
      best_d2 = d2;
      best = j;
    }
    return false;
  };
  visit_ball(px, cell_ * cell_, consider);
  if (best_d2 <= cell_ * cell_) return Nearest{best, std::sqrt(best_d2)};

  CellIndex base{};
  cell_of(px, base);
  for (std::int64_t r = 2;; ++r) {
    const double block = std::pow(static_cast<double>(2 * r + 1), static_cast<double>(dim_));
    if (block > static_cast<double>(count_)) {
      best_d2 = brute_nearest(x, best);
      break;
    }
    visit_block(base, r, consider);
    const double reach = static_cast<double>(r) * cell_;
    if (best_d2 <= reach * reach) break;
  }
  return Nearest{best, std::sqrt(best_d2)};
}

double PointGrid::min_pairwise_distance() const {
  if (count_ < 2) return std::numeric_limits<double>::infinity();
  double best_d2 = std::numeric_limits<double>::infinity();
  const double reach2 = cell_ * cell_;
  for (std::size_t i = 0; i < count_; ++i) {
    const double* p = coords_.data() + i * dim_;
    visit_ball(p, reach2, [&](std::size_t j) {
      if (j != i) best_d2 = std::min(best_d2, sq_dist(j, p));
      return false;
    });
  }
  // Pairs closer than one cell are always found above; beyond that, fall
  // back to a coarser grid.
  if (best_d2 < reach2) return std::sqrt(best_d2);
  double extent = 0.0;
  for (std::size_t i = 0; i < count_; ++i) extent = std::max(extent, (point(i) - origin_).norm());
  PointGrid coarse(dim_, origin_, cell_ * 2.0, extent);
  for (std::size_t i = 0; i < count_; ++i) coarse.insert(point(i));
  return coarse.min_pairwise_distance();
}

SpherePacking::SpherePacking(std::vector<Vector> points, Vector center, double radius, double delta,
                             std::uint64_t seed)
    : points_(std::move(points)), center_(std::move(center)), radius_(radius), delta_(delta), seed_(seed) {
  require_valid(center_);
  if (!(radius_ > 0.0)) throw InvalidArgument("sphere radius must be positive");
  if (!(delta_ > 0.0)) throw InvalidArgument("packing delta must be positive");
  for (const auto& p : points_) {
    require_dim(p, dim());
    if (std::abs((p - center_).norm() - radius_) > 1e-9 * radius_) {
      throw InvalidArgument("packing point is not on the sphere");
    }
  }
}

PointGrid SpherePacking::make_index() const {
  PointGrid grid(dim(), center_, std::min(delta_, 2.0 * radius_), radius_);
  for (const auto& p : points_) grid.insert(p);
  return grid;
}

namespace {

SpherePacking circle_packing(const Vector& center, double R, double delta, std::uint64_t seed) {
  const double theta = 2.0 * std::asin(std::min(1.0, delta / (2.0 * R)));
  const auto n = static_cast<std::size_t>(std::floor(2.0 * std::numbers::pi / theta + 1e-9));
  std::vector<Vector> points;
  points.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    Vector p = center;
    p[0] += R * std::cos(a);
    p[1] += R * std::sin(a);
    points.push_back(std::move(p));
  }
  return SpherePacking(std::move(points), center, R, delta, seed);
}

// Inserts the farthest vertex of every spherical Voronoi cell that lies more
// than delta from its site, until no cell has such a vertex. Cells are
// clipped in the tangent plane of their site against all neighbors within
// the completeness radius, which covers every bisector that can cut the
// clipping box. Returns false when delta is too coarse for the tangent
// construction.
bool complete_cells(std::size_t d, const Vector& center, double R, double delta, PointGrid& grid,
                    std::vector<Vector>& points) {
  const double theta_delta = 2.0 * std::asin(delta / (2.0 * R));
  if (d < 3 || d > 4 || theta_delta > 0.5) return false;
  const double t_delta = std::tan(theta_delta);
  const double box = 1.05 * t_delta;
  const double theta_corner = std::atan(box * std::sqrt(static_cast<double>(d - 1)));
  const double full_reach = 2.0 * (2.0 * R * std::sin(theta_corner / 2.0)) * (1.0 + 1e-6);
  // Most cells are resolved with neighbors within `near_reach`; the result
  // is exact whenever the farthest vertex is within near_reach / 2.
  const double near_reach = std::min(full_reach, 2.1 * delta);

  PointGrid near_grid(d, center, near_reach, R);
  PointGrid full_grid(d, center, full_reach, R);
  for (const auto& p : points) {
    near_grid.insert(p);
    full_grid.insert(p);
  }

  std::deque<std::size_t> queue(points.size());
  std::iota(queue.begin(), queue.end(), std::size_t{0});
  std::vector<std::size_t> near;
  std::vector<detail::TangentHalfspace> halfspaces;
  Eigen::VectorXd farthest;
  detail::CellClipper clipper;
  const double threshold = t_delta * t_delta * (1.0 + 1e-9);

  auto cell_radius2 = [&](std::size_t i, const Vector& s, const Eigen::MatrixXd& E, const PointGrid& g,
                          double reach) {
    g.within(points[i], reach, near);
    halfspaces.clear();
    for (std::size_t j : near) {
      if (j == i) continue;
      const Vector sj = (points[j] - center) / R;
      const Eigen::VectorXd proj = E.transpose() * sj;
      const Eigen::Vector3d a(proj[0], proj[1], d == 4 ? proj[2] : 0.0);
      const double b = 1.0 - sj.dot(s);
      const double len = a.norm();
      halfspaces.push_back({a, b, len > 0.0 ? b / len : std::numeric_limits<double>::infinity()});
    }
    std::sort(halfspaces.begin(), halfspaces.end(),
              [](const auto& l, const auto& r) { return l.plane_distance < r.plane_distance; });
    return clipper.farthest_vertex(d - 1, box, halfspaces, farthest);
  };

  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    const Vector s = (points[i] - center) / R;
    const Eigen::MatrixXd E = detail::tangent_frame(s);
    double r2 = cell_radius2(i, s, E, near_grid, near_reach);
    if (r2 <= threshold) continue;
    const double chord = 2.0 * R * std::sin(std::atan(std::sqrt(r2)) / 2.0);
    if (2.0 * chord > near_reach) {
      r2 = cell_radius2(i, s, E, full_grid, full_reach);
      if (r2 <= threshold) continue;
    }
    Vector dir = s + E * farthest.head(static_cast<Eigen::Index>(d - 1));
    dir.normalize();
    Vector x = center + R * dir;
    if (grid.any_within(x, delta)) continue;
    grid.insert(x);
    near_grid.insert(x);
    full_grid.insert(x);
    points.push_back(std::move(x));
    queue.push_back(i);
    queue.push_back(points.size() - 1);
  }
  return true;
}

SpherePacking greedy_packing(std::size_t d, const Vector& center, double R, double delta,
                             std::uint64_t seed, const PackingOptions& options) {
  PointGrid grid(d, center, delta, R);
  std::vector<Vector> points;
  Vector u(static_cast<Eigen::Index>(d));
  Vector x(static_cast<Eigen::Index>(d));

  auto try_insert = [&](const Vector& candidate) {
    if (grid.any_within(candidate, delta)) return false;
    grid.insert(candidate);
    points.push_back(candidate);
    return true;
  };

  // Samples near a hole ascend the distance to their nearest points: each
  // step moves away from the points within a thin band of the nearest one.
  std::vector<std::size_t> near;
  auto climb = [&](Vector& y) {
    for (int step = 0; step < 30; ++step) {
      const double r = grid.nearest(y)->distance;
      if (r > delta) return try_insert(y);
      if (r < 0.9 * delta) return false;
      grid.within(y, std::min(delta, r + 0.05 * delta), near);
      const Vector radial = (y - center) / R;
      Vector g = Vector::Zero(static_cast<Eigen::Index>(d));
      for (std::size_t j : near) {
        const Vector away = y - grid.point(j);
        g += away / away.norm();
      }
      g -= radial * radial.dot(g);
      const double len = g.norm();
      if (!(len > 1e-12)) return false;
      const double h = std::max(delta - r, 0.01 * delta);
      y = center + R * (radial + (h / R) * (g / len)).normalized();
    }
    return false;
  };

  Rng rng(split_seed(seed, 0));
  std::size_t rejections = 0;
  while (rejections < options.max_consecutive_rejections) {
    random_unit(rng, u);
    x = center + R * u;
    if (try_insert(x)) {
      rejections = 0;
    } else {
      ++rejections;
    }
  }

  if (!complete_cells(d, center, R, delta, grid, points)) {
    std::size_t clean = 0;
    for (std::size_t sweep = 0; clean < options.clean_sweeps; ++sweep) {
      if (sweep >= options.max_sweeps) {
        throw Error("packing coverage did not converge within the sweep budget");
      }
      Rng sweep_rng(split_seed(seed, 1000 + sweep));
      std::size_t inserted = 0;
      for (std::size_t s = 0; s < options.sweep_samples; ++s) {
        random_unit(sweep_rng, u);
        x = center + R * u;
        if (try_insert(x) || climb(x)) ++inserted;
      }
      clean = inserted == 0 ? clean + 1 : 0;
    }
  }

  SpherePacking packing(std::move(points), center, R, delta, seed);
  if (options.final_check_samples > 0) {
    const PackingReport check = verify_packing(packing, options.final_check_samples, split_seed(seed, 99));
    if (!check.pass) {
      throw Error("packing failed its coverage/separation check (max gap " + std::to_string(check.max_gap) +
                  ", min separation " + std::to_string(check.min_separation) + ")");
    }
  }
  return packing;
}

}  // namespace

SpherePacking build_packing(std::size_t d, const Vector& center, double R, double delta,
                            std::uint64_t seed, const PackingOptions& options) {
  if (d < 1) throw InvalidArgument("packing dimension must be >= 1");
  require_valid(center);
  require_dim(center, d);
  if (!(R > 0.0) || !std::isfinite(R)) throw InvalidArgument("sphere radius must be positive");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidArgument("packing delta must be positive");

  Vector e1 = Vector::Zero(static_cast<Eigen::Index>(d));
  e1[0] = R;
  if (delta > 2.0 * R) {
    // Every point of S is within 2R < delta of any single point.
    return SpherePacking({center + e1}, center, R, delta, seed);
  }
  if (d == 1) return SpherePacking({center - e1, center + e1}, center, R, delta, seed);
  if (d == 2) return circle_packing(center, R, delta, seed);
  return greedy_packing(d, center, R, delta, seed, options);
}

PackingReport verify_packing(const SpherePacking& packing, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw InvalidArgument("verify_packing needs at least one sample");
  PackingReport report{};
  const double delta = packing.delta();
  if (packing.size() == 0) {
    report.max_gap = std::numeric_limits<double>::infinity();
    report.min_separation = std::numeric_limits<double>::infinity();
    report.pass = false;
    return report;
  }
  PointGrid grid = packing.make_index();
  report.min_separation = grid.min_pairwise_distance();

  const std::size_t d = packing.dim();
  Rng rng(split_seed(seed, 7));
  Vector u(static_cast<Eigen::Index>(d));
  double max_gap = 0.0;
  if (d == 1) {
    // The 0-sphere has two points; check both exactly.
    for (double s : {-1.0, 1.0}) {
      Vector x = packing.center();
      x[0] += s * packing.radius();
      max_gap = std::max(max_gap, grid.nearest(x)->distance);
    }
  } else {
    for (std::size_t s = 0; s < n_samples; ++s) {
      random_unit(rng, u);
      const Vector x = packing.center() + packing.radius() * u;
      max_gap = std::max(max_gap, grid.nearest(x)->distance);
    }
  }
  report.max_gap = max_gap;
  report.pass = report.min_separation >= delta * (1.0 - 1e-9) && max_gap <= delta;
  return report;
}

double packing_cardinality_bound(std::size_t d, double R, double delta) {
  if (d < 1 || !(R > 0.0) || !(delta > 0.0)) throw InvalidArgument("cardinality bound needs positive inputs");
  return std::pow(4.0 * R / delta, static_cast<double>(d - 1));
}

}  // namespace dudley
