#include "dudley/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dudley/errors.hpp"
#include "dudley/linprog.hpp"
#include "dudley/parallel.hpp"
#include "dudley/projection.hpp"
#include "dudley/random.hpp"

namespace dudley {

ContainmentResult check_containment(const Body& C, const HPolytope& D, double tol) {
  if (dim(C) != D.dim()) throw DimensionMismatch(D.dim(), dim(C));
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& h : D.halfspaces()) {
    if (const auto* ball = std::get_if<Ball>(&C)) {
      worst = std::max(worst, h.normal().dot(ball->center()) + ball->radius() - h.offset());
    } else {
      for (const auto& v : std::get<VPolytope>(C).vertices()) worst = std::max(worst, h.signed_distance(v));
    }
  }
  return {worst <= tol, worst};
}

HausdorffEstimate hausdorff_gap(const Body& C, const HPolytope& D, std::size_t n_directions,
                                std::uint64_t seed) {
  const std::size_t d = D.dim();
  if (dim(C) != d) throw DimensionMismatch(d, dim(C));
  if (n_directions < 1) throw InvalidArgument("hausdorff_gap needs at least one direction");
  if (!lp_bounded(D)) throw UnboundedError("D is unbounded; the Hausdorff gap is infinite");

  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  to_matrix(D, A, b);

  // Directions are drawn per block from split seeds, so the result does not
  // depend on the worker count.
  constexpr std::size_t kBlock = 1024;
  const std::size_t blocks = (n_directions + kBlock - 1) / kBlock;
  std::vector<double> best(blocks, -1.0);
  std::vector<Vector> best_dir(blocks);
  parallel_for(blocks, [&](std::size_t k) {
    Rng rng(split_seed(seed, k));
    Vector u(static_cast<Eigen::Index>(d));
    const std::size_t hi = std::min(n_directions, (k + 1) * kBlock);
    for (std::size_t i = k * kBlock; i < hi; ++i) {
      random_unit(rng, u);
      const LPResult r = lp_maximize(u, A, b);
      if (r.status == LpStatus::unbounded) throw UnboundedError("D is unbounded along a sampled direction");
      if (!r.optimal()) throw InfeasibleError("D is empty");
      const double gap = std::max(0.0, *r.value - support(C, u).value);
      if (gap > best[k]) {
        best[k] = gap;
        best_dir[k] = u;
      }
    }
  });
  std::size_t arg = 0;
  for (std::size_t k = 1; k < blocks; ++k) {
    if (best[k] > best[arg]) arg = k;
  }
  return {best[arg], best_dir[arg], n_directions, false};
}

std::vector<Vector> polygon_vertices(const HPolytope& D) {
  if (D.dim() != 2) throw InvalidArgument("polygon_vertices needs a 2D H-polytope");
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  to_matrix(D, A, b);
  double lo[2];
  double hi[2];
  for (int axis = 0; axis < 2; ++axis) {
    for (double sign : {1.0, -1.0}) {
      Vector u = Vector::Zero(2);
      u[axis] = sign;
      const LPResult r = lp_maximize(u, A, b);
      if (r.status == LpStatus::infeasible) throw InfeasibleError("D is empty");
      if (r.status == LpStatus::unbounded) throw UnboundedError("D is unbounded");
      (sign > 0 ? hi : lo)[axis] = sign * *r.value;
    }
  }
  const double pad = 1.0 + std::max(hi[0] - lo[0], hi[1] - lo[1]);
  std::vector<Eigen::Vector2d> poly = {{lo[0] - pad, lo[1] - pad},
                                       {hi[0] + pad, lo[1] - pad},
                                       {hi[0] + pad, hi[1] + pad},
                                       {lo[0] - pad, hi[1] + pad}};
  std::vector<Eigen::Vector2d> next;
  for (const auto& h : D.halfspaces()) {
    const Eigen::Vector2d a(h.normal()[0], h.normal()[1]);
    next.clear();
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::Vector2d& p = poly[i];
      const Eigen::Vector2d& q = poly[(i + 1) % n];
      const double dp = a.dot(p) - h.offset();
      const double dq = a.dot(q) - h.offset();
      if (dp <= 0.0) next.push_back(p);
      if ((dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0)) next.push_back(p + (q - p) * (dp / (dp - dq)));
    }
    poly.swap(next);
    if (poly.empty()) throw InfeasibleError("D is empty");
  }
  std::vector<Vector> out;
  for (const auto& p : poly) {
    if (!out.empty() && (out.back() - Vector(p)).norm() <= 1e-12) continue;
    out.emplace_back(p);
  }
  while (out.size() > 1 && (out.front() - out.back()).norm() <= 1e-12) out.pop_back();
  return out;
}

double exact_gap_2d(const Body& C, const HPolytope& D) {
  if (dim(C) != 2) throw DimensionMismatch(2, dim(C));
  double gap = 0.0;
  for (const auto& v : polygon_vertices(D)) gap = std::max(gap, project(C, v).distance);
  return gap;
}

}  // namespace dudley
