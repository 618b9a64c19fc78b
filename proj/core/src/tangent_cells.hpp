#pragma once

// Voronoi cells of sphere points, clipped in the tangent plane.
//
// For a point s on the unit sphere, the gnomonic map y -> (s + E y)/|s + E y|
// (E an orthonormal basis of s^perp) sends the bisector halfspace between s
// and a neighbor s' to the affine halfspace <E^T s', y> <= 1 - <s', s>, and
// the tangent radius |y| to the angle atan|y|. The cell of s is therefore a
// convex polytope in R^(d-1) and its farthest point from s is a vertex.

#include <Eigen/Core>

#include <vector>

namespace dudley::detail {

struct TangentHalfspace {
  Eigen::Vector3d normal;  // trailing coordinate unused in tangent dimension 2
  double offset;
  double plane_distance;   // offset / |normal|
};

/// Farthest point from the origin of {y : |y_i| <= box, <a_k, y> <= b_k}
/// for tangent dimension 2 or 3. Halfspaces must be sorted by increasing
/// plane_distance; clipping stops once the next plane lies beyond the
/// current farthest vertex, since it cannot cut the polytope.
/// Returns the squared radius and writes the point to `farthest`.
class CellClipper {
 public:
  double farthest_vertex(std::size_t tangent_dim, double box,
                         const std::vector<TangentHalfspace>& halfspaces, Eigen::VectorXd& farthest);

 private:
  double farthest_2d(double box, const std::vector<TangentHalfspace>& hs, Eigen::VectorXd& farthest);
  double farthest_3d(double box, const std::vector<TangentHalfspace>& hs, Eigen::VectorXd& farthest);
  void clip_3d(const Eigen::Vector3d& a, double b);

  // 2D polygon, double buffered.
  std::vector<Eigen::Vector2d> poly_;
  std::vector<Eigen::Vector2d> next_poly_;
  // 3D polyhedron as flat face lists: face f spans [start[f], start[f+1]).
  std::vector<Eigen::Vector3d> pts_;
  std::vector<std::size_t> start_;
  std::vector<Eigen::Vector3d> next_pts_;
  std::vector<std::size_t> next_start_;
  std::vector<Eigen::Vector3d> cap_;
  std::vector<std::pair<double, Eigen::Vector3d>> ordered_;
};

/// Convenience wrapper with a fresh clipper.
double farthest_cell_vertex(std::size_t tangent_dim, double box,
                            const std::vector<TangentHalfspace>& halfspaces,
                            Eigen::VectorXd& farthest);

/// Orthonormal basis (as columns) of the complement of the unit vector s.
Eigen::MatrixXd tangent_frame(const Eigen::VectorXd& s);

}  // namespace dudley::detail
