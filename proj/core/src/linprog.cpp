#include "dudley/linprog.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "dudley/errors.hpp"

namespace dudley {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

namespace {

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kPivotTol = 1e-11;

enum class Outcome { optimal, infeasible, unbounded };

struct EqualityFormSolution {
  Outcome outcome = Outcome::infeasible;
  Eigen::VectorXd multipliers;
  std::vector<Eigen::Index> basis;
  double value = 0.0;
};

// min <c, y>  s.t.  M y = r, y >= 0, with M of shape k x n (k small).
// Two-phase tableau simplex, Bland's rule for both entering and leaving
// variables. Artificial columns never re-enter the basis.
class EqualityFormSimplex {
 public:
  EqualityFormSimplex(const Eigen::MatrixXd& M, const Eigen::VectorXd& r, const Eigen::VectorXd& c,
                      const LpOptions& options)
      : k_(M.rows()), n_(M.cols()), cost_(c), options_(options), sign_(M.rows()) {
    tab_ = Tableau::Zero(k_ + 1, n_ + k_ + 1);
    basis_.resize(static_cast<std::size_t>(k_));
    for (Eigen::Index i = 0; i < k_; ++i) {
      sign_[i] = r[i] < 0.0 ? -1.0 : 1.0;
      tab_.row(i).head(n_) = sign_[i] * M.row(i);
      tab_(i, n_ + i) = 1.0;
      tab_(i, rhs()) = sign_[i] * r[i];
      basis_[static_cast<std::size_t>(i)] = n_ + i;
    }
    rhs_scale_ = std::max(1.0, r.cwiseAbs().maxCoeff());
  }

  EqualityFormSolution solve() {
    EqualityFormSolution out;

    // Phase one: minimize the sum of artificials.
    tab_.row(k_).setZero();
    for (Eigen::Index i = 0; i < k_; ++i) tab_.row(k_) -= tab_.row(i);
    for (Eigen::Index i = 0; i < k_; ++i) tab_(k_, n_ + i) = 0.0;
    if (iterate() == Outcome::unbounded) {
      throw Error("simplex phase one reported unbounded; this cannot happen");
    }
    if (-tab_(k_, rhs()) > options_.feasibility_tol * rhs_scale_) {
      out.outcome = Outcome::infeasible;
      return out;
    }
    drive_out_artificials();

    // Phase two.
    tab_.row(k_).setZero();
    tab_.row(k_).head(n_) = cost_.transpose();
    for (Eigen::Index i = 0; i < k_; ++i) {
      const Eigen::Index b = basis_[static_cast<std::size_t>(i)];
      const double cb = b < n_ ? cost_[b] : 0.0;
      if (cb != 0.0) tab_.row(k_) -= cb * tab_.row(i);
    }
    if (iterate() == Outcome::unbounded) {
      out.outcome = Outcome::unbounded;
      return out;
    }

    out.outcome = Outcome::optimal;
    out.value = -tab_(k_, rhs());
    out.multipliers.resize(k_);
    for (Eigen::Index i = 0; i < k_; ++i) out.multipliers[i] = -sign_[i] * tab_(k_, n_ + i);
    out.basis = basis_;
    return out;
  }

 private:
  Eigen::Index rhs() const { return n_ + k_; }

  void pivot(Eigen::Index row, Eigen::Index col) {
    tab_.row(row) /= tab_(row, col);
    for (Eigen::Index i = 0; i <= k_; ++i) {
      if (i == row) continue;
      const double f = tab_(i, col);
      if (f != 0.0) tab_.row(i) -= f * tab_.row(row);
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  Outcome iterate() {
    const std::size_t cap = 50000 + 50 * static_cast<std::size_t>(n_ + k_);
    for (std::size_t it = 0; it < cap; ++it) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (tab_(k_, j) < -options_.optimality_tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return Outcome::optimal;

      Eigen::Index leave = -1;
      double best_ratio = 0.0;
      for (Eigen::Index i = 0; i < k_; ++i) {
        const double a = tab_(i, enter);
        if (a <= kPivotTol) continue;
        const double ratio = tab_(i, rhs()) / a;
        if (leave < 0 || ratio < best_ratio - 1e-15 ||
            (ratio <= best_ratio + 1e-15 &&
             basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return Outcome::unbounded;
      pivot(leave, enter);
    }
    throw Error("simplex iteration limit exceeded");
  }

  void drive_out_artificials() {
    for (Eigen::Index i = 0; i < k_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < n_) continue;
      Eigen::Index col = -1;
      double best = 1e-9;
      for (Eigen::Index j = 0; j < n_; ++j) {
        const double a = std::abs(tab_(i, j));
        if (a > best) {
          best = a;
          col = j;
        }
      }
      if (col >= 0) pivot(i, col);
    }
  }

  Eigen::Index k_;
  Eigen::Index n_;
  Eigen::VectorXd cost_;
  LpOptions options_;
  Eigen::VectorXd sign_;
  Tableau tab_;
  std::vector<Eigen::Index> basis_;
  double rhs_scale_ = 1.0;
};

enum class DualStatus { optimal, dual_infeasible, dual_unbounded };

struct DirectResult {
  DualStatus status;
  Vector point;
};

double max_violation(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Vector& x) {
  return (A * x - b).maxCoeff();
}

// Solves the LP through its dual; the primal point comes from the optimal
// basis, polished by an exact solve on the active rows when the basis is
// made of d original constraints.
DirectResult solve_direct(const Vector& u, const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                          const LpOptions& options) {
  const Eigen::MatrixXd M = A.transpose();
  EqualityFormSimplex simplex(M, u, b, options);
  EqualityFormSolution sol = simplex.solve();
  if (sol.outcome == Outcome::infeasible) return {DualStatus::dual_infeasible, {}};
  if (sol.outcome == Outcome::unbounded) return {DualStatus::dual_unbounded, {}};

  Vector x = sol.multipliers;
  const Eigen::Index d = A.cols();
  const bool all_original =
      std::all_of(sol.basis.begin(), sol.basis.end(), [&](Eigen::Index j) { return j < A.rows(); });
  if (all_original && static_cast<Eigen::Index>(sol.basis.size()) == d) {
    Eigen::MatrixXd AB(d, d);
    Eigen::VectorXd bB(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      AB.row(i) = A.row(sol.basis[static_cast<std::size_t>(i)]);
      bB[i] = b[sol.basis[static_cast<std::size_t>(i)]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(AB);
    if (lu.rank() == d) {
      Vector polished = lu.solve(bB);
      if (polished.allFinite() && max_violation(A, b, polished) <= max_violation(A, b, x)) {
        x = std::move(polished);
      }
    }
  }
  return {DualStatus::optimal, std::move(x)};
}

LPResult make_optimal(const Vector& objective, Vector x) {
  LPResult r;
  r.status = LpStatus::optimal;
  r.value = objective.dot(x);
  r.point = std::move(x);
  return r;
}

LPResult status_only(LpStatus s) {
  LPResult r;
  r.status = s;
  return r;
}

LPResult resolve_dual_infeasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                 const LpOptions& options) {
  return status_only(lp_feasible(A, b, options) ? LpStatus::unbounded : LpStatus::infeasible);
}

// Constraint generation: solve on a working set seeded with the rows whose
// normals are best aligned with the objective, then add violated rows
// until the working-set optimum is feasible for the full system.
LPResult solve_working_set(const Vector& u, const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                           const LpOptions& options) {
  const Eigen::Index m = A.rows();
  const Eigen::Index d = A.cols();

  Eigen::VectorXd score = (A * u).cwiseQuotient(A.rowwise().norm().cwiseMax(1e-300));
  std::vector<Eigen::Index> ranked(static_cast<std::size_t>(m));
  std::iota(ranked.begin(), ranked.end(), 0);
  std::size_t ranked_pos = 0;

  std::vector<char> in_set(static_cast<std::size_t>(m), 0);
  std::vector<Eigen::Index> working;

  auto take_ranked = [&](std::size_t count) {
    count = std::min(count, ranked.size() - ranked_pos);
    if (count == 0) return;
    auto first = ranked.begin() + static_cast<std::ptrdiff_t>(ranked_pos);
    auto mid = first + static_cast<std::ptrdiff_t>(count);
    std::nth_element(first, mid - 1, ranked.end(),
                     [&](Eigen::Index a, Eigen::Index c) { return score[a] > score[c]; });
    for (auto it = first; it != mid; ++it) {
      if (!in_set[static_cast<std::size_t>(*it)]) {
        in_set[static_cast<std::size_t>(*it)] = 1;
        working.push_back(*it);
      }
    }
    ranked_pos += count;
  };

  std::size_t batch = static_cast<std::size_t>(std::max<Eigen::Index>(4 * d + 4, 8));
  take_ranked(batch);

  Eigen::MatrixXd Aw;
  Eigen::VectorXd bw;
  const std::size_t add_per_round = static_cast<std::size_t>(std::max<Eigen::Index>(2 * d, 4));
  while (true) {
    const auto w = static_cast<Eigen::Index>(working.size());
    Aw.resize(w, d);
    bw.resize(w);
    for (Eigen::Index i = 0; i < w; ++i) {
      Aw.row(i) = A.row(working[static_cast<std::size_t>(i)]);
      bw[i] = b[working[static_cast<std::size_t>(i)]];
    }
    DirectResult sub = solve_direct(u, Aw, bw, options);
    if (sub.status == DualStatus::dual_unbounded) return status_only(LpStatus::infeasible);
    if (sub.status == DualStatus::dual_infeasible) {
      if (w == m) return resolve_dual_infeasible(A, b, options);
      batch *= 2;
      take_ranked(batch);
      continue;
    }

    Eigen::VectorXd viol = A * sub.point - b;
    std::vector<Eigen::Index> violated;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (viol[i] > options.feasibility_tol && !in_set[static_cast<std::size_t>(i)]) {
        violated.push_back(i);
      }
    }
    if (violated.empty()) return make_optimal(u, std::move(sub.point));
    const std::size_t take = std::min(add_per_round, violated.size());
    std::partial_sort(violated.begin(), violated.begin() + static_cast<std::ptrdiff_t>(take),
                      violated.end(), [&](Eigen::Index a, Eigen::Index c) { return viol[a] > viol[c]; });
    for (std::size_t i = 0; i < take; ++i) {
      in_set[static_cast<std::size_t>(violated[i])] = 1;
      working.push_back(violated[i]);
    }
  }
}

}  // namespace

void to_matrix(const HPolytope& P, Eigen::MatrixXd& A, Eigen::VectorXd& b) {
  const auto m = static_cast<Eigen::Index>(P.size());
  const auto d = static_cast<Eigen::Index>(P.dim());
  A.resize(m, d);
  b.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& h = P.halfspaces()[static_cast<std::size_t>(i)];
    A.row(i) = h.normal().transpose();
    b[i] = h.offset();
  }
}

LPResult lp_maximize(const Vector& objective, const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     const LpOptions& options) {
  require_dim(objective, static_cast<std::size_t>(A.cols()));
  if (b.size() != A.rows()) throw DimensionMismatch(static_cast<std::size_t>(A.rows()), static_cast<std::size_t>(b.size()));
  if (A.rows() == 0) throw InvalidArgument("linear program has no constraints");

  if (static_cast<std::size_t>(A.rows()) > options.direct_limit) {
    return solve_working_set(objective, A, b, options);
  }
  DirectResult r = solve_direct(objective, A, b, options);
  switch (r.status) {
    case DualStatus::optimal: return make_optimal(objective, std::move(r.point));
    case DualStatus::dual_unbounded: return status_only(LpStatus::infeasible);
    case DualStatus::dual_infeasible: return resolve_dual_infeasible(A, b, options);
  }
  return status_only(LpStatus::infeasible);
}

LPResult lp_maximize(const Vector& objective, const HPolytope& P, const LpOptions& options) {
  require_dim(objective, P.dim());
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  to_matrix(P, A, b);
  return lp_maximize(objective, A, b, options);
}

bool lp_feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const LpOptions& options) {
  const Eigen::Index m = A.rows();
  const Eigen::Index d = A.cols();
  Eigen::MatrixXd M(d + 1, m);
  M.topRows(d) = A.transpose();
  M.row(d).setOnes();
  Eigen::VectorXd r = Eigen::VectorXd::Zero(d + 1);
  r[d] = 1.0;
  EqualityFormSimplex simplex(M, r, b, options);
  EqualityFormSolution sol = simplex.solve();
  // No certificate exists at all, or the best one is not negative.
  if (sol.outcome != Outcome::optimal) return true;
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  return sol.value >= -options.feasibility_tol * scale;
}

bool lp_feasible(const HPolytope& P, const LpOptions& options) {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  to_matrix(P, A, b);
  return lp_feasible(A, b, options);
}

bool lp_bounded(const HPolytope& P, const LpOptions& options) {
  const auto d = static_cast<Eigen::Index>(P.dim());
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  to_matrix(P, A, b);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (double s : {1.0, -1.0}) {
      Vector e = Vector::Zero(d);
      e[i] = s;
      if (!lp_maximize(e, A, b, options).optimal()) return false;
    }
  }
  return true;
}

ChebyshevBall chebyshev_center(const HPolytope& P, const LpOptions& options) {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  to_matrix(P, A, b);
  if (!lp_feasible(A, b, options)) throw InfeasibleError("Chebyshev center of an empty polytope");
  if (!lp_bounded(P, options)) throw UnboundedError("Chebyshev center of an unbounded polytope");

  const Eigen::Index d = A.cols();
  Eigen::MatrixXd lifted(A.rows(), d + 1);
  lifted.leftCols(d) = A;
  lifted.col(d) = A.rowwise().norm();
  Vector objective = Vector::Zero(d + 1);
  objective[d] = 1.0;
  LPResult r = lp_maximize(objective, lifted, b, options);
  if (!r.optimal()) throw Error(std::string("Chebyshev LP ended ") + to_string(r.status));
  return {r.point->head(d), *r.value};
}

}  // namespace dudley
