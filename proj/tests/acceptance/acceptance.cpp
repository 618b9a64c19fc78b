// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dudley/dudley.hpp"
#include "dudley/errors.hpp"
#include "dudley/io.hpp"
#include "dudley/linprog.hpp"
#include "dudley/packing.hpp"
#include "dudley/projection.hpp"
#include "dudley/verify.hpp"
#include "dudley_cli/cli.hpp"
#include "oracles.hpp"

using namespace dudley;
using oracle::vec2;
using oracle::vec3;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

struct Outcome {
  bool pass;
  std::string detail;
};

struct Run2d {
  std::string body;
  double eps;
  std::uint64_t seed;
  Construction construction;
};

const std::vector<double> kLadder2d = {0.2, 0.1, 0.05, 0.02};
const std::vector<std::uint64_t> kSeeds = {1, 2, 3};
const std::vector<double> kLadder3d = {0.2, 0.1, 0.05};

std::vector<Run2d> g_runs2d;
std::vector<Construction> g_runs3d;

Body disk() { return Ball(vec2(0, 0), 1.0); }
Body ball3() { return Ball(vec3(0, 0, 0), 1.0); }

DudleyConfig config(double eps, Mode mode, std::uint64_t seed) {
  DudleyConfig c;
  c.epsilon = eps;
  c.mode = mode;
  c.seed = seed;
  return c;
}

Outcome guarantee_2d(const std::string& name, const Body& body) {
  int failures = 0;
  double worst_ratio = 0.0;
  double slowest = 0.0;
  for (double eps : kLadder2d) {
    for (std::uint64_t seed : kSeeds) {
      const auto t0 = Clock::now();
      auto [c, report] = approximate(body, config(eps, Mode::paper_exact, seed));
      const double secs = seconds_since(t0);
      const ContainmentResult contain = check_containment(body, c.result);
      const double gap = exact_gap_2d(body, c.result);
      const double oracle_gap = oracle::exact_gap_bruteforce_2d(body, c.result);
      const bool ok = contain.ok && gap <= eps && oracle_gap <= eps && std::abs(gap - oracle_gap) <= 1e-9 &&
                      secs < 10.0;
      if (!ok) {
        ++failures;
        std::cout << "  " << name << " eps " << eps << " seed " << seed << ": containment "
                  << (contain.ok ? "ok" : "FAILED") << ", exact gap " << gap << ", oracle gap " << oracle_gap
                  << ", " << secs << " s\n";
      }
      worst_ratio = std::max(worst_ratio, gap / eps);
      slowest = std::max(slowest, secs);
      g_runs2d.push_back({name, eps, seed, std::move(c)});
    }
  }
  return {failures == 0, "12 runs, worst exact_gap/eps " + fmt("%.4g", worst_ratio) + ", slowest run " +
                             fmt("%.3f", slowest) + " s"};
}

Outcome criterion1() { return guarantee_2d("disk", disk()); }
Outcome criterion2() { return guarantee_2d("square", oracle::square()); }

Outcome criterion3() {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run({"bench", "--body", std::string(DUDLEY_TEST_DATA) + "/disk.json", "--eps-ladder",
                             "0.2,0.1,0.05,0.025", "--seed", "1", "--dirs", "1000"},
                            out, err);
  if (code != 0) return {false, "bench exited " + std::to_string(code) + ": " + err.str()};
  std::istringstream csv(out.str());
  std::string line;
  std::getline(csv, line);
  std::vector<double> lx;
  std::vector<double> ly;
  double reported = std::numeric_limits<double>::quiet_NaN();
  while (std::getline(csv, line)) {
    if (line.rfind("# slope,", 0) == 0) {
      reported = std::stod(line.substr(8));
    } else if (line[0] != '#') {
      std::istringstream row(line);
      std::string eps;
      std::string delta;
      std::string count;
      std::getline(row, eps, ',');
      std::getline(row, delta, ',');
      std::getline(row, count, ',');
      lx.push_back(std::log(1.0 / std::stod(eps)));
      ly.push_back(std::log(std::stod(count)));
    }
  }
  const double refit = fit_slope(lx, ly);
  const bool ok = lx.size() == 4 && std::abs(reported - 0.5) <= 0.15 && std::abs(refit - reported) <= 1e-9;
  return {ok, "slope " + fmt("%.4f", reported) + " (refit " + fmt("%.4f", refit) + "), target 0.5 +- 0.15"};
}

Outcome criterion4() {
  std::vector<double> lx;
  std::vector<double> ly;
  bool ok = true;
  std::string gaps;
  double slowest = 0.0;
  for (double eps : kLadder3d) {
    const auto t0 = Clock::now();
    DudleyConfig cfg = config(eps, Mode::generalized, 1);
    cfg.verify_directions = 0;
    auto [c, report] = approximate(ball3(), cfg);
    const HausdorffEstimate h = hausdorff_gap(ball3(), c.result, 100000, 1);
    const double secs = seconds_since(t0);
    const bool contain = check_containment(ball3(), c.result).ok;
    ok = ok && contain && h.estimate <= eps && secs < 120.0;
    lx.push_back(std::log(1.0 / eps));
    ly.push_back(std::log(static_cast<double>(c.result.size())));
    gaps += (gaps.empty() ? "" : ", ") + std::to_string(c.result.size()) + " halfspaces gap " +
            fmt("%.3g", h.estimate) + (contain ? "" : " NOT CONTAINED");
    slowest = std::max(slowest, secs);
    g_runs3d.push_back(std::move(c));
  }
  const double slope = fit_slope(lx, ly);
  ok = ok && std::abs(slope - 1.0) <= 0.2;
  return {ok, "slope " + fmt("%.4f", slope) + " (target 1.0 +- 0.2); " + gaps + "; slowest run " +
                  fmt("%.1f", slowest) + " s"};
}

Outcome criterion5() {
  int failing = 0;
  std::size_t coverage_misses = 0;
  for (const Run2d& run : g_runs2d) {
    const ProofAudit audit = audit_proof(run.construction, 10000, run.seed);
    const bool hard = audit.failures[1] == 0 && audit.failures[2] == 0 && audit.failures[3] == 0 &&
                      audit.failures[4] == 0;
    const bool coverage = audit.failures[0] <= 10 && (audit.failures[0] == 0 || audit.packing_reverified.value_or(false));
    coverage_misses += audit.failures[0];
    if (!(hard && coverage && audit.passed())) {
      ++failing;
      std::cout << "  " << run.body << " eps " << run.eps << " seed " << run.seed << ": failures (a)-(e) "
                << audit.failures[0] << " " << audit.failures[1] << " " << audit.failures[2] << " "
                << audit.failures[3] << " " << audit.failures[4] << "\n";
    }
  }
  return {failing == 0 && !g_runs2d.empty(),
          std::to_string(g_runs2d.size()) + " audits of 1e4 samples, " + std::to_string(failing) +
              " failing, total check (a) misses " + std::to_string(coverage_misses)};
}

Outcome criterion6() {
  bool ok = true;
  std::string detail;
  for (std::size_t d : {2, 3, 4}) {
    for (double delta : {0.5, 0.2, 0.1}) {
      const auto t0 = Clock::now();
      const SpherePacking P = build_packing(d, Vector::Zero(static_cast<Eigen::Index>(d)), 4.0, delta, 1);
      const PackingReport r = verify_packing(P, 100000, 17);
      bool pass = r.min_separation >= delta * (1.0 - 1e-9) && r.max_gap <= delta;
      // Independent brute-force checks where they are affordable.
      if (P.size() <= 6000) {
        double sep = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < P.size(); ++i) {
          for (std::size_t j = i + 1; j < P.size(); ++j) sep = std::min(sep, (P.points()[i] - P.points()[j]).norm());
        }
        std::mt19937_64 rng(99);
        double gap = 0.0;
        for (int s = 0; s < 100000; ++s) {
          const Vector x = 4.0 * oracle::gaussian_unit(rng, d);
          double best = std::numeric_limits<double>::infinity();
          for (const Vector& q : P.points()) best = std::min(best, (x - q).squaredNorm());
          gap = std::max(gap, std::sqrt(best));
        }
        pass = pass && sep >= delta * (1.0 - 1e-9) && gap <= delta && std::abs(sep - r.min_separation) <= 1e-12;
      }
      ok = ok && pass;
      detail += (detail.empty() ? "" : "; ") + std::string("d") + std::to_string(d) + " delta " + fmt("%g", delta) +
                ": " + std::to_string(P.size()) + " pts, gap/delta " + fmt("%.4f", r.max_gap / delta) + ", " +
                fmt("%.1f", seconds_since(t0)) + " s" + (pass ? "" : " FAIL");
    }
  }
  return {ok, detail};
}

Outcome criterion7() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> radius(0.3, 1.5);
  std::uniform_real_distribution<double> far(1.6, 4.0);
  std::uniform_int_distribution<int> count(3, 12);
  auto random_polytope = [&](std::size_t d) {
    std::vector<Vector> v;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) v.push_back(radius(rng) * oracle::gaussian_unit(rng, d));
    return VPolytope(v);
  };
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const std::size_t d = 2 + static_cast<std::size_t>(i % 2);
    const VPolytope P = random_polytope(d);
    const Vector q = far(rng) * oracle::gaussian_unit(rng, d);
    worst = std::max(worst, std::abs(project(P, q).distance - oracle::projection_distance(P.vertices(), q)));
  }
  std::uniform_real_distribution<double> box(-3.0, 3.0);
  double worst_excess = 0.0;
  int bodies = 0;
  for (std::size_t d : {2, 3}) {
    for (int b = 0; b < 5; ++b, ++bodies) {
      const VPolytope P = random_polytope(d);
      for (int k = 0; k < 1000; ++k) {
        Vector x(static_cast<Eigen::Index>(d));
        Vector y(static_cast<Eigen::Index>(d));
        for (Eigen::Index i = 0; i < x.size(); ++i) {
          x[i] = box(rng);
          y[i] = box(rng);
        }
        const double moved = (project(P, x).point - project(P, y).point).norm();
        worst_excess = std::max(worst_excess, moved - (x - y).norm());
      }
    }
  }
  const bool ok = worst <= 1e-6 && worst_excess <= 1e-7;
  return {ok, "500 pairs, worst distance error " + fmt("%.3g", worst) + "; contraction on " +
                  std::to_string(bodies) + " bodies x 1000 pairs, worst excess " + fmt("%.3g", worst_excess)};
}

Outcome criterion8() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0.2, 2.0);
  std::uniform_real_distribution<double> C(-1.0, 1.0);
  int compared = 0;
  double worst = 0.0;
  bool all_optimal = true;
  for (int t = 0; compared < 1000; ++t) {
    const int m = 3 + t % 40;
    std::vector<Halfspace> hs;
    std::vector<std::array<double, 3>> rows;
    const Vector center = vec2(C(rng), C(rng));
    for (int i = 0; i < m; ++i) {
      const Vector n = oracle::gaussian_unit(rng, 2);
      const double b = n.dot(center) + U(rng);
      hs.emplace_back(n, b);
      rows.push_back({n[0], n[1], b});
    }
    const HPolytope P(hs);
    // Bounded instances only: the oracle's feasible vertices must surround
    // the origin in every coordinate direction.
    bool bounded = true;
    for (const Vector& u : {vec2(1, 0), vec2(-1, 0), vec2(0, 1), vec2(0, -1)}) {
      std::vector<std::array<double, 3>> probe = rows;
      const auto a = oracle::lp2d_bruteforce(probe, u[0], u[1]);
      // An unbounded direction shows up as a lower value after adding a far box.
      probe.push_back({u[0], u[1], 1e6});
      const auto b = oracle::lp2d_bruteforce(probe, u[0], u[1]);
      if (!a || !b || std::abs(*a - *b) > 1e-9) bounded = false;
    }
    if (!bounded) continue;
    const Vector u = oracle::gaussian_unit(rng, 2);
    const LPResult r = lp_maximize(u, P);
    const auto expect = oracle::lp2d_bruteforce(rows, u[0], u[1]);
    if (!r.optimal() || !expect) {
      all_optimal = false;
    } else {
      worst = std::max(worst, std::abs(*r.value - *expect));
    }
    ++compared;
  }
  const ChebyshevBall tri =
      chebyshev_center(HPolytope({Halfspace(vec2(-1, 0), 0.0), Halfspace(vec2(0, -1), 0.0), Halfspace(vec2(1, 1), 1.0)}));
  const double expect_r = (2.0 - std::sqrt(2.0)) / 2.0;
  const bool ok = all_optimal && worst <= 1e-7 && std::abs(tri.inradius - expect_r) <= 1e-9;
  return {ok, "1000 instances, worst error " + fmt("%.3g", worst) + "; right triangle inradius " +
                  fmt("%.15f", tri.inradius) + " vs " + fmt("%.15f", expect_r)};
}

Outcome criterion9() {
  int detected = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Construction base = approximate(disk(), config(0.05, Mode::paper_exact, seed)).first;
    std::vector<std::size_t> order(base.packing.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t drop = base.packing.size() / 5;
    std::vector<bool> keep(base.packing.size(), true);
    for (std::size_t i = 0; i < drop; ++i) keep[order[i]] = false;
    std::vector<Vector> kept;
    for (std::size_t i = 0; i < keep.size(); ++i) {
      if (keep[i]) kept.push_back(base.packing.points()[i]);
    }
    SpherePacking holed(kept, base.packing.center(), base.packing.radius(), base.packing.delta(), seed);
    const Construction broken = build_construction(base.body, base.mode, base.epsilon, holed, base.projection_tol);
    const ProofAudit audit = audit_proof(broken, 10000, seed);
    double gap = std::numeric_limits<double>::infinity();
    try {
      gap = exact_gap_2d(broken.body, broken.result);
    } catch (const UnboundedError&) {
    }
    const bool caught = !audit.passed() || gap > 0.05;
    detected += caught ? 1 : 0;
    detail += (detail.empty() ? "" : " ") + std::string(caught ? "+" : "-");
  }
  return {detected >= 9, std::to_string(detected) + "/10 seeds detected [" + detail + "]"};
}

Outcome criterion10() {
  int compared = 0;
  int differing = 0;
  for (const Run2d& run : g_runs2d) {
    if (run.body != "disk") continue;
    const Construction again = approximate(disk(), config(run.eps, Mode::paper_exact, run.seed)).first;
    differing += construction_to_json(again) == construction_to_json(run.construction) ? 0 : 1;
    ++compared;
  }
  for (std::size_t i = 0; i < g_runs3d.size(); ++i) {
    DudleyConfig cfg = config(kLadder3d[i], Mode::generalized, 1);
    cfg.verify_directions = 0;
    const Construction again = approximate(ball3(), cfg).first;
    differing += construction_to_json(again) == construction_to_json(g_runs3d[i]) ? 0 : 1;
    ++compared;
  }
  return {compared == 15 && differing == 0,
          std::to_string(compared) + " constructions re-run, " + std::to_string(differing) + " differ"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"disk guarantee", criterion1},
      {"square guarantee", criterion2},
      {"count scaling d=2", criterion3},
      {"count scaling d=3", criterion4},
      {"proof audit", criterion5},
      {"packing properties", criterion6},
      {"projection oracle", criterion7},
      {"LP oracle", criterion8},
      {"negative controls", criterion9},
      {"determinism", criterion10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << "criterion " << (i + 1) << " [" << criteria[i].first << "]: " << (o.pass ? "PASS" : "FAIL") << " ("
              << fmt("%.1f", seconds_since(t0)) << " s) " << o.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
