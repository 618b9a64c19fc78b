#include "tangent_cells.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dudley::detail {

namespace {

constexpr double kOnPlane = 1e-14;

}  // namespace

double CellClipper::farthest_2d(double box, const std::vector<TangentHalfspace>& hs,
                                Eigen::VectorXd& farthest) {
  poly_ = {{-box, -box}, {box, -box}, {box, box}, {-box, box}};
  double reach2 = 2.0 * box * box;
  for (const auto& h : hs) {
    if (h.plane_distance * h.plane_distance >= reach2) break;
    const Eigen::Vector2d a = h.normal.head<2>();
    double worst = -1.0;
    for (const auto& p : poly_) worst = std::max(worst, a.dot(p) - h.offset);
    if (worst <= kOnPlane) continue;

    next_poly_.clear();
    const std::size_t n = poly_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::Vector2d& p = poly_[i];
      const Eigen::Vector2d& q = poly_[(i + 1) % n];
      const double dp = a.dot(p) - h.offset;
      const double dq = a.dot(q) - h.offset;
      if (dp <= 0.0) next_poly_.push_back(p);
      if ((dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0)) {
        next_poly_.push_back(p + (q - p) * (dp / (dp - dq)));
      }
    }
    poly_.swap(next_poly_);
    if (poly_.empty()) break;
    reach2 = 0.0;
    for (const auto& p : poly_) reach2 = std::max(reach2, p.squaredNorm());
  }
  double best = -1.0;
  farthest = Eigen::VectorXd::Zero(2);
  for (const auto& p : poly_) {
    if (p.squaredNorm() > best) {
      best = p.squaredNorm();
      farthest = p;
    }
  }
  return std::max(best, 0.0);
}

// Each face is Sutherland-Hodgman clipped; the cut is closed by a cap face
// through the crossing points, ordered by angle about their centroid.
void CellClipper::clip_3d(const Eigen::Vector3d& a, double b) {
  next_pts_.clear();
  next_start_.clear();
  cap_.clear();
  const std::size_t faces = start_.size() - 1;
  for (std::size_t f = 0; f < faces; ++f) {
    const std::size_t lo = start_[f];
    const std::size_t n = start_[f + 1] - lo;
    const std::size_t first = next_pts_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::Vector3d& p = pts_[lo + i];
      const Eigen::Vector3d& q = pts_[lo + (i + 1) % n];
      const double dp = a.dot(p) - b;
      const double dq = a.dot(q) - b;
      if (dp <= kOnPlane) next_pts_.push_back(p);
      if (std::abs(dp) <= kOnPlane) cap_.push_back(p);
      if ((dp < -kOnPlane && dq > kOnPlane) || (dp > kOnPlane && dq < -kOnPlane)) {
        const Eigen::Vector3d x = p + (q - p) * (dp / (dp - dq));
        next_pts_.push_back(x);
        cap_.push_back(x);
      }
    }
    if (next_pts_.size() - first >= 3) {
      next_start_.push_back(first);
    } else {
      next_pts_.resize(first);
    }
  }

  if (cap_.size() >= 3) {
    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    for (const auto& p : cap_) centroid += p;
    centroid /= static_cast<double>(cap_.size());
    const Eigen::Vector3d n = a.normalized();
    Eigen::Vector3d u = std::abs(n.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    u = (u - n * n.dot(u)).normalized();
    const Eigen::Vector3d w = n.cross(u);
    ordered_.clear();
    for (const auto& p : cap_) {
      const Eigen::Vector3d r = p - centroid;
      ordered_.emplace_back(std::atan2(r.dot(w), r.dot(u)), p);
    }
    std::sort(ordered_.begin(), ordered_.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
    const std::size_t first = next_pts_.size();
    for (const auto& [angle, p] : ordered_) {
      if (next_pts_.size() == first || (p - next_pts_.back()).squaredNorm() > 1e-28) next_pts_.push_back(p);
    }
    while (next_pts_.size() > first + 1 && (next_pts_[first] - next_pts_.back()).squaredNorm() <= 1e-28) {
      next_pts_.pop_back();
    }
    if (next_pts_.size() - first >= 3) {
      next_start_.push_back(first);
    } else {
      next_pts_.resize(first);
    }
  }
  next_start_.push_back(next_pts_.size());
  pts_.swap(next_pts_);
  start_.swap(next_start_);
}

double CellClipper::farthest_3d(double box, const std::vector<TangentHalfspace>& hs,
                                Eigen::VectorXd& farthest) {
  auto v = [box](int x, int y, int z) { return Eigen::Vector3d(x * box, y * box, z * box); };
  pts_ = {v(-1, -1, -1), v(-1, 1, -1), v(-1, 1, 1),  v(-1, -1, 1), v(1, -1, -1), v(1, 1, -1),
          v(1, 1, 1),    v(1, -1, 1),  v(-1, -1, -1), v(1, -1, -1), v(1, -1, 1), v(-1, -1, 1),
          v(-1, 1, -1),  v(1, 1, -1),  v(1, 1, 1),    v(-1, 1, 1),  v(-1, -1, -1), v(1, -1, -1),
          v(1, 1, -1),   v(-1, 1, -1), v(-1, -1, 1),  v(1, -1, 1),  v(1, 1, 1),    v(-1, 1, 1)};
  start_ = {0, 4, 8, 12, 16, 20, 24};

  double reach2 = 3.0 * box * box;
  for (const auto& h : hs) {
    if (h.plane_distance * h.plane_distance >= reach2) break;
    double worst = -1.0;
    for (const auto& p : pts_) worst = std::max(worst, h.normal.dot(p) - h.offset);
    if (worst <= kOnPlane) continue;
    clip_3d(h.normal, h.offset);
    if (pts_.empty()) break;
    reach2 = 0.0;
    for (const auto& p : pts_) reach2 = std::max(reach2, p.squaredNorm());
  }
  double best = -1.0;
  farthest = Eigen::VectorXd::Zero(3);
  for (const auto& p : pts_) {
    if (p.squaredNorm() > best) {
      best = p.squaredNorm();
      farthest = p;
    }
  }
  return std::max(best, 0.0);
}

double CellClipper::farthest_vertex(std::size_t tangent_dim, double box,
                                    const std::vector<TangentHalfspace>& halfspaces,
                                    Eigen::VectorXd& farthest) {
  if (tangent_dim == 2) return farthest_2d(box, halfspaces, farthest);
  if (tangent_dim == 3) return farthest_3d(box, halfspaces, farthest);
  throw std::invalid_argument("tangent cells are implemented for tangent dimension 2 and 3");
}

double farthest_cell_vertex(std::size_t tangent_dim, double box,
                            const std::vector<TangentHalfspace>& halfspaces,
                            Eigen::VectorXd& farthest) {
  CellClipper clipper;
  return clipper.farthest_vertex(tangent_dim, box, halfspaces, farthest);
}

Eigen::MatrixXd tangent_frame(const Eigen::VectorXd& s) {
  const Eigen::Index d = s.size();
  Eigen::Index skip = 0;
  s.cwiseAbs().maxCoeff(&skip);
  Eigen::MatrixXd E(d, d - 1);
  Eigen::Index col = 0;
  for (Eigen::Index k = 0; k < d; ++k) {
    if (k == skip) continue;
    Eigen::VectorXd v = Eigen::VectorXd::Unit(d, k);
    v -= s * s.dot(v);
    for (Eigen::Index c = 0; c < col; ++c) v -= E.col(c) * E.col(c).dot(v);
    E.col(col++) = v.normalized();
  }
  return E;
}

}  // namespace dudley::detail
