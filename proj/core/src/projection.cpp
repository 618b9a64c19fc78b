#include "dudley/projection.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>

#include "dudley/parallel.hpp"

namespace dudley {

namespace {

constexpr double kMaxCondition = 1e12;

// Translated vertex set P_i = v_i - q, stored as columns.
struct Shifted {
  Eigen::MatrixXd P;
  double scale2;  // max |P_i|^2
};

Shifted shift(const VPolytope& body, const Vector& q) {
  const auto n = static_cast<Eigen::Index>(body.size());
  Shifted s{Eigen::MatrixXd(q.size(), n), 0.0};
  for (Eigen::Index i = 0; i < n; ++i) {
    s.P.col(i) = body.vertices()[static_cast<std::size_t>(i)] - q;
    s.scale2 = std::max(s.scale2, s.P.col(i).squaredNorm());
  }
  return s;
}

// <x, x - P_j> maximized over j: the Frank-Wolfe gap at x = p - q.
double wolfe_gap(const Eigen::MatrixXd& P, const Vector& x, Eigen::Index* argmin = nullptr) {
  Eigen::Index j = 0;
  const double lo = (P.transpose() * x).minCoeff(&j);
  if (argmin) *argmin = j;
  return x.squaredNorm() - lo;
}

bool accept(double gap, double dist, double tol) { return gap <= tol * dist || dist <= tol; }

// Wolfe's minimum-norm-point method over the columns of P. Returns the
// convex weights, or nullopt if an affine solve becomes ill-conditioned.
std::optional<Vector> wolfe(const Eigen::MatrixXd& P, double scale2, double tol) {
  const Eigen::Index n = P.cols();
  std::vector<Eigen::Index> S;
  std::vector<double> lambda;
  Eigen::Index start = 0;
  P.colwise().squaredNorm().minCoeff(&start);
  S.push_back(start);
  lambda.push_back(1.0);
  Vector x = P.col(start);

  const double stall = 1e-15 * scale2;
  const int max_major = static_cast<int>(50 * n + 1000);
  for (int major = 0; major < max_major; ++major) {
    Eigen::Index j = 0;
    const double gap = wolfe_gap(P, x, &j);
    const double dist = x.norm();
    if (dist <= 1e-13 * std::sqrt(scale2) || gap <= stall || accept(gap, dist, tol * 1e-3)) break;
    if (std::find(S.begin(), S.end(), j) != S.end()) break;
    S.push_back(j);
    lambda.push_back(0.0);

    while (true) {
      const auto k = static_cast<Eigen::Index>(S.size());
      // Affine minimum-norm point: [P_S^T P_S 1; 1^T 0][a; mu] = [0; 1].
      Eigen::MatrixXd M(k + 1, k + 1);
      for (Eigen::Index r = 0; r < k; ++r) {
        for (Eigen::Index c = 0; c < k; ++c) M(r, c) = P.col(S[r]).dot(P.col(S[c]));
        M(r, k) = 1.0;
        M(k, r) = 1.0;
      }
      M(k, k) = 0.0;
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      if (!(sv(k) > 0.0) || sv(0) / sv(k) > kMaxCondition) return std::nullopt;
      Vector rhs = Vector::Zero(k + 1);
      rhs(k) = 1.0;
      const Vector sol = svd.solve(rhs);
      const Vector alpha = sol.head(k);

      if (alpha.minCoeff() > 1e-14) {
        for (Eigen::Index r = 0; r < k; ++r) lambda[r] = alpha(r);
        break;
      }
      double theta = 1.0;
      for (Eigen::Index r = 0; r < k; ++r) {
        if (alpha(r) <= 1e-14) {
          const double denom = lambda[r] - alpha(r);
          if (denom > 0.0) theta = std::min(theta, lambda[r] / denom);
        }
      }
      for (Eigen::Index r = 0; r < k; ++r) lambda[r] = (1.0 - theta) * lambda[r] + theta * alpha(r);
      std::vector<Eigen::Index> S2;
      std::vector<double> l2;
      for (Eigen::Index r = 0; r < k; ++r) {
        if (lambda[r] > 1e-14) {
          S2.push_back(S[r]);
          l2.push_back(lambda[r]);
        }
      }
      if (S2.empty()) {
        S2.push_back(S.back());
        l2.push_back(1.0);
      }
      S.swap(S2);
      lambda.swap(l2);
      double total = 0.0;
      for (double l : lambda) total += l;
      for (double& l : lambda) l /= total;
    }
    x.setZero();
    for (std::size_t r = 0; r < S.size(); ++r) x += lambda[r] * P.col(S[r]);
  }
  Vector w = Vector::Zero(n);
  for (std::size_t r = 0; r < S.size(); ++r) w(S[r]) = lambda[r];
  return w;
}

// Frank-Wolfe with away steps and exact line search on |P w|^2.
Vector away_step_fw(const Eigen::MatrixXd& P, Vector w, double tol) {
  const Eigen::Index n = P.cols();
  Vector x = P * w;
  const int max_iter = 200000;
  for (int it = 0; it < max_iter; ++it) {
    const Vector g = P.transpose() * x;
    Eigen::Index s = 0;
    g.minCoeff(&s);
    const double fw_gap = x.squaredNorm() - g(s);
    if (accept(fw_gap, x.norm(), tol * 1e-3) || fw_gap <= 0.0) break;
    Eigen::Index a = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (w(i) > 0.0 && (a < 0 || g(i) > g(a))) a = i;
    }
    const double away_gap = g(a) - x.squaredNorm();
    Vector dir;
    double max_step;
    bool toward = fw_gap >= away_gap;
    if (toward) {
      dir = P.col(s) - x;
      max_step = 1.0;
    } else {
      dir = x - P.col(a);
      max_step = w(a) / (1.0 - w(a));
    }
    const double dd = dir.squaredNorm();
    if (!(dd > 0.0)) break;
    const double step = std::clamp(-x.dot(dir) / dd, 0.0, max_step);
    if (toward) {
      w *= (1.0 - step);
      w(s) += step;
    } else {
      w *= (1.0 + step);
      w(a) -= step;
      if (step == max_step) w(a) = 0.0;
    }
    x = P * w;
  }
  return w;
}

}  // namespace

ProjectionResult project(const VPolytope& body, const Vector& q, double tol) {
  require_valid(q);
  require_dim(q, body.dim());
  if (!(tol > 0.0)) throw InvalidArgument("projection tolerance must be positive");
  const Shifted s = shift(body, q);
  if (body.size() == 1) {
    const Vector p = body.vertices().front();
    const double dist = s.P.col(0).norm();
    if (dist <= 1e-13 * std::max(1.0, q.norm())) return {q, 0.0, 0.0};
    return {p, dist, 0.0};
  }

  std::optional<Vector> w = wolfe(s.P, s.scale2, tol);
  Vector x;
  if (w) {
    x = s.P * *w;
    if (!accept(std::max(0.0, wolfe_gap(s.P, x)), x.norm(), tol)) w.reset();
  }
  if (!w) {
    Vector w0 = Vector::Zero(s.P.cols());
    Eigen::Index start = 0;
    s.P.colwise().squaredNorm().minCoeff(&start);
    w0(start) = 1.0;
    w = away_step_fw(s.P, w0, tol);
    x = s.P * *w;
  }

  const double dist = x.norm();
  if (dist <= 1e-13 * std::sqrt(s.scale2)) return {q, 0.0, 0.0};
  Vector p = body.vertices().front() * 0.0;
  for (Eigen::Index i = 0; i < s.P.cols(); ++i) {
    if ((*w)(i) != 0.0) p += (*w)(i) * body.vertices()[static_cast<std::size_t>(i)];
  }
  const double gap = std::max(0.0, wolfe_gap(s.P, x));
  return {std::move(p), dist, gap};
}

ProjectionResult project(const Ball& body, const Vector& q, double tol) {
  require_valid(q);
  require_dim(q, body.dim());
  if (!(tol > 0.0)) throw InvalidArgument("projection tolerance must be positive");
  const Vector r = q - body.center();
  const double len = r.norm();
  if (len <= body.radius()) return {q, 0.0, 0.0};
  return {body.center() + r * (body.radius() / len), len - body.radius(), 0.0};
}

ProjectionResult project(const Body& body, const Vector& q, double tol) {
  return std::visit([&](const auto& b) { return project(b, q, tol); }, body);
}

std::vector<ProjectionResult> project_batch(const Body& body, const std::vector<Vector>& queries,
                                            double tol) {
  std::vector<std::optional<ProjectionResult>> slots(queries.size());
  std::atomic<std::size_t> first_bad{queries.size()};
  parallel_for(queries.size(), [&](std::size_t i) {
    try {
      slots[i] = project(body, queries[i], tol);
    } catch (const std::exception&) {
      std::size_t cur = first_bad.load();
      while (i < cur && !first_bad.compare_exchange_weak(cur, i)) {
      }
    }
  });
  if (first_bad.load() < queries.size()) {
    const std::size_t i = first_bad.load();
    try {
      project(body, queries[i], tol);
    } catch (const std::exception& e) {
      throw BatchError(i, e.what());
    }
  }
  std::vector<ProjectionResult> out;
  out.reserve(queries.size());
  for (auto& r : slots) out.push_back(std::move(*r));
  return out;
}

}  // namespace dudley
