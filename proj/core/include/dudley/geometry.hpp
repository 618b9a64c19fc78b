#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <variant>
#include <vector>

namespace dudley {

/// Dimension-generic real vector; the dimension is runtime data.
using Vector = Eigen::VectorXd;

/// Default tolerance for comparisons against a bound.
inline constexpr double kDefaultTol = 1e-9;

/// Tolerance on the unit length of a halfspace normal.
inline constexpr double kNormalTol = 1e-12;

/// Throws unless `v` is nonempty with finite coordinates.
void require_valid(const Vector& v);

/// Throws DimensionMismatch if `v` is not of dimension `dim`.
void require_dim(const Vector& v, std::size_t dim);

/// The closed halfspace {x : <normal, x> <= offset} with a unit normal.
class Halfspace {
 public:
  /// Normalizes `normal`; `offset` is rescaled so the set is unchanged.
  Halfspace(Vector normal, double offset);

  /// Halfspace whose boundary passes through `point` with outward normal
  /// parallel to `outward`.
  static Halfspace through(const Vector& point, const Vector& outward);

  const Vector& normal() const { return normal_; }
  double offset() const { return offset_; }
  std::size_t dim() const { return static_cast<std::size_t>(normal_.size()); }

  /// <normal, p> - offset; positive when `p` violates the halfspace.
  double signed_distance(const Vector& p) const;

  bool contains(const Vector& p, double tol = kDefaultTol) const {
    return signed_distance(p) <= tol;
  }

 private:
  Vector normal_;
  double offset_;
};

/// Free-function spelling of Halfspace::signed_distance.
double signed_distance(const Halfspace& h, const Vector& p);

/// Free-function spelling of Halfspace::through.
Halfspace halfspace_through(const Vector& point, const Vector& outward);

/// Nonempty intersection of halfspaces sharing one dimension.
class HPolytope {
 public:
  explicit HPolytope(std::vector<Halfspace> halfspaces);

  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return halfspaces_.size(); }

  /// Largest signed distance of `p` over all halfspaces.
  double max_violation(const Vector& p) const;

 private:
  std::vector<Halfspace> halfspaces_;
  std::size_t dim_;
};

/// Convex hull of a finite point list. The list is used as given: no
/// deduplication and no convex-position filtering.
class VPolytope {
 public:
  explicit VPolytope(std::vector<Vector> vertices);

  const std::vector<Vector>& vertices() const { return vertices_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vertices_.size(); }

  Vector centroid() const;

 private:
  std::vector<Vector> vertices_;
  std::size_t dim_;
};

class Ball {
 public:
  Ball(Vector center, double radius);

  const Vector& center() const { return center_; }
  double radius() const { return radius_; }
  std::size_t dim() const { return static_cast<std::size_t>(center_.size()); }

 private:
  Vector center_;
  double radius_;
};

/// A bounded convex body in one of the supported representations.
using Body = std::variant<VPolytope, Ball>;

std::size_t dim(const Body& body);

struct SupportResult {
  double value;
  Vector witness;
};

/// h_B(u) = max over the body of <u, x>, with a maximizing point.
SupportResult support(const VPolytope& body, const Vector& u);
SupportResult support(const Ball& body, const Vector& u);
SupportResult support(const Body& body, const Vector& u);

/// Minkowski sum of a body with the closed ball of radius `eps`.
class ExpandedBody {
 public:
  ExpandedBody(Body body, double eps);

  const Body& base() const { return body_; }
  double eps() const { return eps_; }
  std::size_t dim() const { return dudley::dim(body_); }

  SupportResult support(const Vector& u) const;

 private:
  Body body_;
  double eps_;
};

ExpandedBody expand_body(Body body, double eps);

/// Distance from the reference point to the farthest point of the body.
double circumradius_about(const Body& body, const Vector& reference);

/// Vertex centroid for a polytope, center for a ball.
Vector reference_center(const Body& body);

}  // namespace dudley
