#pragma once

#include <cstddef>
#include <vector>

#include "dudley/errors.hpp"
#include "dudley/geometry.hpp"

namespace dudley {

struct ProjectionResult {
  Vector point;
  double distance;
  /// max over the body of <q - point, x - point>; zero for exact projections.
  double gap_certificate;
};

/// Nearest point of the body to q. For polytopes the result satisfies
/// gap_certificate <= tol * distance; queries inside the body return q.
ProjectionResult project(const VPolytope& body, const Vector& q, double tol = kDefaultTol);
ProjectionResult project(const Ball& body, const Vector& q, double tol = kDefaultTol);
ProjectionResult project(const Body& body, const Vector& q, double tol = kDefaultTol);

/// Raised by project_batch; carries the index of the failing query.
class BatchError : public Error {
 public:
  BatchError(std::size_t index, const std::string& what)
      : Error("query " + std::to_string(index) + ": " + what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// project over every query, results in input order. Runs in parallel.
std::vector<ProjectionResult> project_batch(const Body& body, const std::vector<Vector>& queries,
                                            double tol = kDefaultTol);

}  // namespace dudley
