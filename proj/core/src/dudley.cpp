#include "dudley/dudley.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "dudley/errors.hpp"
#include "dudley/linprog.hpp"
#include "dudley/parallel.hpp"
#include "dudley/projection.hpp"
#include "dudley/random.hpp"
#include "dudley/verify.hpp"

namespace dudley {

const char* to_string(Mode mode) { return mode == Mode::paper_exact ? "paper-exact" : "generalized"; }

Mode parse_mode(const std::string& text) {
  if (text == "paper-exact" || text == "paper_exact") return Mode::paper_exact;
  if (text == "generalized") return Mode::generalized;
  throw InvalidArgument("unknown mode '" + text + "' (expected paper-exact or generalized)");
}

namespace {

constexpr double kSandwichTol = 1e-9;
constexpr double kMaxFacetSubsets = 2e5;
constexpr std::size_t kSandwichDirections = 100000;

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 0; i < k; ++i) r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return r;
}

// Smallest facet offset about the origin via all d-subsets of vertices; an
// empty result means the hull has no facets (lower-dimensional body).
std::optional<double> min_facet_offset(const std::vector<Vector>& V, std::size_t d) {
  const std::size_t n = V.size();
  double scale = 0.0;
  for (const auto& v : V) scale = std::max(scale, v.cwiseAbs().maxCoeff());
  const double tol = 1e-12 * std::max(1.0, scale);
  std::optional<double> best;
  std::vector<std::size_t> idx(d);
  for (std::size_t i = 0; i < d; ++i) idx[i] = i;
  Eigen::MatrixXd M(static_cast<Eigen::Index>(d - 1), static_cast<Eigen::Index>(d));
  while (true) {
    for (std::size_t r = 1; r < d; ++r) M.row(static_cast<Eigen::Index>(r - 1)) = (V[idx[r]] - V[idx[0]]).transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    lu.setThreshold(1e-12);
    const Eigen::MatrixXd kernel = lu.kernel();
    if (kernel.cols() == 1) {
      const Vector a = kernel.col(0).normalized();
      const double b = a.dot(V[idx[0]]);
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const auto& v : V) {
        const double s = a.dot(v);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      if (hi <= b + tol) best = std::min(best.value_or(b), b);
      if (lo >= b - tol) best = std::min(best.value_or(-b), -b);
    }
    std::size_t k = d;
    while (k > 0 && idx[k - 1] == n - d + k - 1) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t r = k; r < d; ++r) idx[r] = idx[r - 1] + 1;
  }
  return best;
}

}  // namespace

SandwichReport validate_sandwich(const Body& body, std::size_t d) {
  if (dim(body) != d) throw DimensionMismatch(d, dim(body));
  const double bound = static_cast<double>(d);
  if (const auto* ball = std::get_if<Ball>(&body)) {
    const double c = ball->center().norm();
    const double in = ball->radius() - c;
    const double out = c + ball->radius();
    return {in, out, in >= 1.0 - kSandwichTol && out <= bound + kSandwichTol, true};
  }
  const auto& V = std::get<VPolytope>(body).vertices();
  double out = 0.0;
  for (const auto& v : V) out = std::max(out, v.norm());

  double in = 0.0;
  bool exact = true;
  const Vector origin = Vector::Zero(static_cast<Eigen::Index>(d));
  const double outside = project(body, origin).distance;
  if (outside > 0.0) {
    in = -outside;
  } else if (d == 1) {
    double lo = V[0][0];
    double hi = V[0][0];
    for (const auto& v : V) {
      lo = std::min(lo, v[0]);
      hi = std::max(hi, v[0]);
    }
    in = std::min(hi, -lo);
  } else if (V.size() >= d && binomial(V.size(), d) <= kMaxFacetSubsets) {
    in = min_facet_offset(V, d).value_or(0.0);
  } else if (V.size() < d) {
    in = 0.0;
  } else {
    exact = false;
    Rng rng(split_seed(0, 0x5a17));
    in = std::numeric_limits<double>::infinity();
    Vector u(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < kSandwichDirections; ++i) {
      random_unit(rng, u);
      in = std::min(in, support(body, u).value);
    }
  }
  return {in, out, in >= 1.0 - kSandwichTol && out <= bound + kSandwichTol, exact};
}

ConstructionPlan plan_construction(const Body& body, double epsilon, Mode mode) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("epsilon must be positive");
  const std::size_t d = dim(body);
  if (mode == Mode::paper_exact) {
    const double dd = static_cast<double>(d);
    return {Vector::Zero(static_cast<Eigen::Index>(d)), 2.0 * dd, dd, std::sqrt(dd * epsilon / 8.0)};
  }
  Vector c = reference_center(body);
  const double R = circumradius_about(body, c);
  if (!(R > 0.0)) throw InvalidArgument("body has zero circumradius about its centroid");
  return {std::move(c), 2.0 * R, R, std::sqrt(R * epsilon / 12.0)};
}

Construction build_construction(const Body& body, Mode mode, double epsilon, SpherePacking packing,
                                double projection_tol) {
  const ConstructionPlan plan = plan_construction(body, epsilon, mode);
  if (packing.dim() != dim(body)) throw DimensionMismatch(dim(body), packing.dim());
  if (packing.size() == 0) throw InvalidArgument("packing is empty");
  const std::vector<ProjectionResult> nearest = project_batch(body, packing.points(), projection_tol);
  std::vector<Contact> contacts;
  std::vector<Halfspace> halfspaces;
  contacts.reserve(nearest.size());
  halfspaces.reserve(nearest.size());
  for (std::size_t i = 0; i < nearest.size(); ++i) {
    const Vector& q = packing.points()[i];
    const Vector outward = q - nearest[i].point;
    if (!(outward.norm() > 0.0)) throw Error("packing point lies in the body; no supporting halfspace");
    halfspaces.push_back(halfspace_through(nearest[i].point, outward));
    contacts.push_back({q, nearest[i].point});
  }
  HPolytope result(std::move(halfspaces));
  return Construction{body,          mode,
                      epsilon,       plan.delta,
                      plan.sphere_center, plan.sphere_radius,
                      plan.scale,    projection_tol,
                      std::move(packing), std::move(contacts),
                      std::move(result)};
}

std::pair<Construction, ApproximationReport> approximate(const Body& body, const DudleyConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (!(config.projection_tol > 0.0)) throw InvalidArgument("projection tolerance must be positive");
  const std::size_t d = dim(body);
  if (config.mode == Mode::paper_exact) {
    const SandwichReport s = validate_sandwich(body, d);
    if (!s.ok) throw SandwichViolation(s.inradius, s.circumradius, d);
  }
  const ConstructionPlan plan = plan_construction(body, config.epsilon, config.mode);
  SpherePacking packing =
      build_packing(d, plan.sphere_center, plan.sphere_radius, plan.delta, config.seed, config.packing);
  Construction c = build_construction(body, config.mode, config.epsilon, std::move(packing), config.projection_tol);

  ApproximationReport r{};
  r.halfspace_count = c.result.size();
  r.delta = c.delta;
  r.epsilon = c.epsilon;
  r.dim = d;
  r.mode = c.mode;
  r.seed = config.seed;
  r.sphere_radius = c.sphere_radius;
  r.theoretical_envelope = packing_cardinality_bound(d, c.sphere_radius, c.delta);
  r.envelope_ratio = static_cast<double>(r.halfspace_count) / r.theoretical_envelope;
  const ContainmentResult contain = check_containment(body, c.result);
  r.containment_ok = contain.ok;
  r.containment_worst = contain.worst_violation;
  r.bounded = lp_bounded(c.result);
  r.hausdorff_directions = config.verify_directions;
  if (config.verify_directions > 0) {
    r.hausdorff_estimate = r.bounded
                               ? hausdorff_gap(body, c.result, config.verify_directions, split_seed(config.seed, 3)).estimate
                               : std::numeric_limits<double>::infinity();
  }
  if (d == 2 && r.bounded) r.exact_gap = exact_gap_2d(body, c.result);
  r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return {std::move(c), std::move(r)};
}

ProofAudit audit_proof(const Construction& construction, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw InvalidArgument("audit needs at least one sample");
  const Construction& c = construction;
  const std::size_t d = dim(c.body);
  if (c.contacts.size() != c.packing.size() || c.result.size() != c.packing.size()) {
    throw InvalidArgument("construction has mismatched packing, contacts and halfspaces");
  }

  ProofAudit audit{};
  audit.n_samples = n_samples;
  audit.seed = seed;
  audit.bounds.delta = c.delta;
  audit.bounds.contraction_slack = 2.0 * c.projection_tol;
  audit.bounds.ell = 2.0 * c.delta;
  audit.bounds.sin_gamma =
      c.mode == Mode::paper_exact ? 4.0 * c.delta / static_cast<double>(d) : 6.0 * c.delta / c.scale;
  audit.bounds.boundary = c.epsilon / 2.0;

  std::vector<Vector> directions(n_samples);
  Rng rng(split_seed(seed, 11));
  for (auto& v : directions) v = random_unit(rng, d);

  const PointGrid index = c.packing.make_index();
  audit.records.resize(n_samples);
  parallel_for(n_samples, [&](std::size_t i) {
    AuditRecord& rec = audit.records[i];
    rec.v = directions[i];
    rec.p = support(c.body, rec.v).witness;
    const Vector w = rec.p - c.sphere_center;
    const double wv = w.dot(rec.v);
    const double t = -wv + std::sqrt(wv * wv - (w.squaredNorm() - c.sphere_radius * c.sphere_radius));
    rec.p_prime = rec.p + t * rec.v;
    const auto near = index.nearest(rec.p_prime);
    rec.q_index = near->index;
    rec.q = c.contacts[rec.q_index].q;
    rec.nq = c.contacts[rec.q_index].nq;
    rec.gap_pprime_q = (rec.p_prime - rec.q).norm();
    rec.gap_p_nq = (rec.p - rec.nq).norm();
    const Vector x = rec.q - rec.nq;
    const Vector y = rec.p_prime - rec.p;
    rec.ell = (x - y).norm();
    const Vector yhat = y.normalized();
    rec.sin_gamma = std::clamp((x - x.dot(yhat) * yhat).norm() / x.norm(), 0.0, 1.0);
    rec.dist_p_boundary = std::abs(c.result.halfspaces()[rec.q_index].signed_distance(rec.p));

    const AuditBounds& b = audit.bounds;
    rec.ok = {rec.gap_pprime_q <= b.delta + kAuditTol,
              rec.gap_p_nq <= rec.gap_pprime_q + b.contraction_slack + kAuditTol,
              rec.ell <= b.ell + kAuditTol,
              rec.sin_gamma <= b.sin_gamma + kAuditTol,
              rec.dist_p_boundary <= b.boundary + kAuditTol};
  });

  std::vector<std::size_t> coverage_only;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const auto& ok = audit.records[i].ok;
    for (std::size_t k = 0; k < 5; ++k) audit.failures[k] += ok[k] ? 0 : 1;
    if (!(ok[1] && ok[2] && ok[3] && ok[4])) {
      audit.violations.push_back(i);
    } else if (!ok[0]) {
      coverage_only.push_back(i);
    }
  }
  if (!coverage_only.empty()) {
    bool accepted = false;
    if (static_cast<double>(coverage_only.size()) <= kCoverageAllowance * static_cast<double>(n_samples)) {
      audit.packing_reverified = verify_packing(c.packing, 100000, split_seed(seed, 17)).pass;
      accepted = *audit.packing_reverified;
    }
    if (accepted) {
      audit.coverage_misses = std::move(coverage_only);
    } else {
      audit.violations.insert(audit.violations.end(), coverage_only.begin(), coverage_only.end());
      std::sort(audit.violations.begin(), audit.violations.end());
    }
  }
  return audit;
}

}  // namespace dudley
