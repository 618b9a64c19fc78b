#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <optional>

#include "dudley/geometry.hpp"

namespace dudley {

enum class LpStatus { optimal, unbounded, infeasible };

const char* to_string(LpStatus status);

struct LpOptions {
  double feasibility_tol = 1e-8;
  double optimality_tol = 1e-9;
  /// Problems with more constraints than this are solved by constraint
  /// generation over a working set; smaller ones go straight to the simplex.
  std::size_t direct_limit = 64;
};

struct LPResult {
  LpStatus status = LpStatus::infeasible;
  std::optional<Vector> point;
  std::optional<double> value;

  bool optimal() const { return status == LpStatus::optimal; }
};

/// max <objective, x> subject to A x <= b, x free.
///
/// Solved through the dual  min <b, y>  s.t.  A^T y = objective, y >= 0,
/// which has only dim(x) equality rows, with a dense two-phase tableau
/// simplex under Bland's rule. The primal optimum is recovered from the
/// optimal basis. Unboundedness and infeasibility are always reported.
LPResult lp_maximize(const Vector& objective, const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     const LpOptions& options = {});

LPResult lp_maximize(const Vector& objective, const HPolytope& P, const LpOptions& options = {});

/// True iff {x : A x <= b} is nonempty, decided by searching for a Farkas
/// certificate y >= 0, A^T y = 0, sum(y) = 1, <b, y> < 0.
bool lp_feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const LpOptions& options = {});
bool lp_feasible(const HPolytope& P, const LpOptions& options = {});

/// True iff P is nonempty and bounded (checked along +-e_i).
bool lp_bounded(const HPolytope& P, const LpOptions& options = {});

struct ChebyshevBall {
  Vector center;
  double inradius;
};

/// Center and radius of a largest ball inscribed in P.
/// Throws InfeasibleError for empty P and UnboundedError for unbounded P.
ChebyshevBall chebyshev_center(const HPolytope& P, const LpOptions& options = {});

/// Dense matrix form of P: one row per halfspace.
void to_matrix(const HPolytope& P, Eigen::MatrixXd& A, Eigen::VectorXd& b);

}  // namespace dudley
