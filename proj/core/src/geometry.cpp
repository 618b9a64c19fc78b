#include "dudley/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dudley/errors.hpp"

namespace dudley {

void require_valid(const Vector& v) {
  if (v.size() < 1) throw InvalidArgument("vector must have dimension >= 1");
  if (!v.allFinite()) throw InvalidArgument("vector has non-finite coordinates");
}

void require_dim(const Vector& v, std::size_t dim) {
  if (static_cast<std::size_t>(v.size()) != dim) {
    throw DimensionMismatch(dim, static_cast<std::size_t>(v.size()));
  }
}

Halfspace::Halfspace(Vector normal, double offset) : normal_(std::move(normal)), offset_(offset) {
  require_valid(normal_);
  if (!std::isfinite(offset_)) throw InvalidArgument("halfspace offset is not finite");
  const double len = normal_.norm();
  if (!(len > 0.0)) throw InvalidArgument("halfspace normal is the zero vector");
  if (std::abs(len - 1.0) > kNormalTol) {
    normal_ /= len;
    offset_ /= len;
  }
}

Halfspace Halfspace::through(const Vector& point, const Vector& outward) {
  require_valid(point);
  require_valid(outward);
  require_dim(outward, static_cast<std::size_t>(point.size()));
  const double len = outward.norm();
  if (!(len > 0.0)) throw InvalidArgument("outward direction is the zero vector");
  Vector n = outward / len;
  const double offset = n.dot(point);
  return Halfspace(std::move(n), offset);
}

double Halfspace::signed_distance(const Vector& p) const {
  require_dim(p, dim());
  return normal_.dot(p) - offset_;
}

double signed_distance(const Halfspace& h, const Vector& p) { return h.signed_distance(p); }

Halfspace halfspace_through(const Vector& point, const Vector& outward) {
  return Halfspace::through(point, outward);
}

HPolytope::HPolytope(std::vector<Halfspace> halfspaces) : halfspaces_(std::move(halfspaces)) {
  if (halfspaces_.empty()) throw InvalidArgument("an H-polytope needs at least one halfspace");
  dim_ = halfspaces_.front().dim();
  for (const auto& h : halfspaces_) {
    if (h.dim() != dim_) throw DimensionMismatch(dim_, h.dim());
  }
}

double HPolytope::max_violation(const Vector& p) const {
  require_dim(p, dim_);
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& h : halfspaces_) worst = std::max(worst, h.normal().dot(p) - h.offset());
  return worst;
}

VPolytope::VPolytope(std::vector<Vector> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw InvalidArgument("a V-polytope needs at least one point");
  require_valid(vertices_.front());
  dim_ = static_cast<std::size_t>(vertices_.front().size());
  for (const auto& v : vertices_) {
    require_dim(v, dim_);
    require_valid(v);
  }
}

Vector VPolytope::centroid() const {
  Vector c = Vector::Zero(static_cast<Eigen::Index>(dim_));
  for (const auto& v : vertices_) c += v;
  return c / static_cast<double>(vertices_.size());
}

Ball::Ball(Vector center, double radius) : center_(std::move(center)), radius_(radius) {
  require_valid(center_);
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) {
    throw InvalidArgument("ball radius must be positive and finite");
  }
}

std::size_t dim(const Body& body) {
  return std::visit([](const auto& b) { return b.dim(); }, body);
}

namespace {

void require_direction(const Vector& u, std::size_t dim) {
  require_dim(u, dim);
  if (!u.allFinite()) throw InvalidArgument("direction has non-finite coordinates");
  if (!(u.squaredNorm() > 0.0)) throw InvalidArgument("support direction is the zero vector");
}

}  // namespace

SupportResult support(const VPolytope& body, const Vector& u) {
  require_direction(u, body.dim());
  const auto& vs = body.vertices();
  std::size_t best = 0;
  double best_value = u.dot(vs[0]);
  for (std::size_t i = 1; i < vs.size(); ++i) {
    const double value = u.dot(vs[i]);
    if (value > best_value) {
      best_value = value;
      best = i;
    }
  }
  return {best_value, vs[best]};
}

SupportResult support(const Ball& body, const Vector& u) {
  require_direction(u, body.dim());
  const double len = u.norm();
  Vector witness = body.center() + (body.radius() / len) * u;
  return {u.dot(body.center()) + body.radius() * len, std::move(witness)};
}

SupportResult support(const Body& body, const Vector& u) {
  return std::visit([&](const auto& b) { return support(b, u); }, body);
}

ExpandedBody::ExpandedBody(Body body, double eps) : body_(std::move(body)), eps_(eps) {
  if (!(eps_ >= 0.0) || !std::isfinite(eps_)) throw InvalidArgument("expansion radius must be >= 0");
}

SupportResult ExpandedBody::support(const Vector& u) const {
  SupportResult base = dudley::support(body_, u);
  const double len = u.norm();
  base.value += eps_ * len;
  base.witness += (eps_ / len) * u;
  return base;
}

ExpandedBody expand_body(Body body, double eps) { return ExpandedBody(std::move(body), eps); }

double circumradius_about(const Body& body, const Vector& reference) {
  if (const auto* poly = std::get_if<VPolytope>(&body)) {
    require_dim(reference, poly->dim());
    double r = 0.0;
    for (const auto& v : poly->vertices()) r = std::max(r, (v - reference).norm());
    return r;
  }
  const auto& ball = std::get<Ball>(body);
  require_dim(reference, ball.dim());
  return (ball.center() - reference).norm() + ball.radius();
}

Vector reference_center(const Body& body) {
  if (const auto* poly = std::get_if<VPolytope>(&body)) return poly->centroid();
  return std::get<Ball>(body).center();
}

}  // namespace dudley
