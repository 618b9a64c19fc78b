#include "dudley_cli/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "dudley/dudley.hpp"
#include "dudley/errors.hpp"
#include "dudley/io.hpp"
#include "dudley/linprog.hpp"
#include "dudley/verify.hpp"
#include "dudley_cli/svg.hpp"

namespace dudley::cli {

namespace {

constexpr double kGapSlack = 1e-9;

std::string num(double x) {
  if (!std::isfinite(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string jnum(double x) { return std::isfinite(x) ? num(x) : "null"; }

struct ApproximateArgs {
  std::string body;
  double eps = 0.0;
  std::string mode = "paper-exact";
  std::uint64_t seed = 0;
  std::string out;
  std::string report;
  std::size_t dirs = 10000;
};

struct VerifyArgs {
  std::string body;
  std::string hpoly;
  double eps = 0.0;
  std::size_t dirs = 10000;
  std::uint64_t seed = 0;
  bool exact = false;
  std::string report;
};

struct AuditArgs {
  std::string construction;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  std::string out;
};

struct BenchArgs {
  std::string body;
  std::string ladder;
  std::string mode = "paper-exact";
  std::uint64_t seed = 0;
  std::string out;
  std::size_t dirs = 10000;
};

struct RenderArgs {
  std::string body;
  std::string hpoly;
  std::string packing;
  double eps = 0.0;
  std::string out;
};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

int cmd_approximate(const ApproximateArgs& a, std::ostream& out, std::ostream& err) {
  if (!(a.eps > 0.0)) {
    err << "approximate: --eps must be positive\n";
    return kUsage;
  }
  const Body body = body_from_json(read_text_file(a.body));
  DudleyConfig cfg;
  cfg.epsilon = a.eps;
  cfg.mode = parse_mode(a.mode);
  cfg.seed = a.seed;
  cfg.verify_directions = a.dirs;
  const auto [construction, report] = approximate(body, cfg);
  emit(a.out, construction_to_json(construction), out);
  if (!a.report.empty()) emit(a.report, report_to_json(report), out);
  err << "approximate: " << report.halfspace_count << " halfspaces, delta " << num(report.delta)
      << ", containment " << (report.containment_ok ? "ok" : "FAILED") << ", hausdorff estimate "
      << (report.hausdorff_estimate ? num(*report.hausdorff_estimate) : "skipped") << "\n";
  return kOk;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  if (!(a.eps >= 0.0)) {
    err << "verify: --eps must be nonnegative\n";
    return kUsage;
  }
  const Body body = body_from_json(read_text_file(a.body));
  const HPolytope D = hpoly_from_json(read_text_file(a.hpoly));
  if (a.exact && dim(body) != 2) {
    err << "verify: --exact needs d = 2\n";
    return kUsage;
  }
  const ContainmentResult contain = check_containment(body, D);
  const HausdorffEstimate gap = hausdorff_gap(body, D, a.dirs, a.seed);
  std::optional<double> exact;
  if (a.exact) exact = exact_gap_2d(body, D);

  const bool gap_ok = gap.estimate <= a.eps + kGapSlack && (!exact || *exact <= a.eps + kGapSlack);
  const bool ok = contain.ok && gap_ok;
  std::ostringstream j;
  j << "{\n  \"containment_ok\": " << (contain.ok ? "true" : "false") << ",\n  \"worst_violation\": "
    << jnum(contain.worst_violation) << ",\n  \"hausdorff_estimate\": " << jnum(gap.estimate)
    << ",\n  \"hausdorff_directions\": " << gap.n_directions << ",\n  \"hausdorff_certified\": false"
    << ",\n  \"exact_gap\": " << (exact ? jnum(*exact) : "null") << ",\n  \"epsilon\": " << jnum(a.eps)
    << ",\n  \"ok\": " << (ok ? "true" : "false") << "\n}\n";
  emit(a.report, j.str(), out);
  return ok ? kOk : kGeometry;
}

int cmd_audit(const AuditArgs& a, std::ostream& out, std::ostream& err) {
  if (a.samples < 1) {
    err << "audit: --samples must be at least 1\n";
    return kUsage;
  }
  const Construction c = construction_from_json(read_text_file(a.construction));
  const ProofAudit audit = audit_proof(c, a.samples, a.seed);
  emit(a.out, audit_to_json(audit), out);
  err << "audit: " << audit.violations.size() << " violations in " << audit.n_samples << " samples\n";
  return audit.passed() ? kOk : kGeometry;
}

std::vector<double> parse_ladder(const std::string& csv) {
  std::vector<double> v;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("bad ladder value '" + item + "'");
    }
    if (used != item.size() || !(x > 0.0)) throw InvalidArgument("bad ladder value '" + item + "'");
    v.push_back(x);
  }
  return v;
}

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  const std::vector<double> ladder = parse_ladder(a.ladder);
  if (ladder.size() < 3) {
    err << "bench: --eps-ladder needs at least 3 values to fit a slope\n";
    return kUsage;
  }
  const Body body = body_from_json(read_text_file(a.body));
  std::ostringstream csv;
  csv << "eps,delta,count,hausdorff_estimate,runtime_ms\n";
  std::vector<double> lx, ly;
  for (double eps : ladder) {
    DudleyConfig cfg;
    cfg.epsilon = eps;
    cfg.mode = parse_mode(a.mode);
    cfg.seed = a.seed;
    cfg.verify_directions = a.dirs;
    const auto t0 = std::chrono::steady_clock::now();
    const auto [construction, report] = approximate(body, cfg);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    csv << num(eps) << "," << num(report.delta) << "," << report.halfspace_count << ","
        << (report.hausdorff_estimate ? num(*report.hausdorff_estimate) : "") << "," << num(ms) << "\n";
    lx.push_back(std::log(1.0 / eps));
    ly.push_back(std::log(static_cast<double>(report.halfspace_count)));
  }
  const double slope = fit_slope(lx, ly);
  csv << "# slope," << num(slope) << "\n";
  csv << "# reference_slope," << num((static_cast<double>(dim(body)) - 1.0) / 2.0) << "\n";
  emit(a.out, csv.str(), out);
  err << "bench: slope " << num(slope) << "\n";
  return kOk;
}

int cmd_render(const RenderArgs& a, std::ostream& out, std::ostream& err) {
  const Body body = body_from_json(read_text_file(a.body));
  if (dim(body) != 2) {
    err << "render: only d = 2 bodies can be rendered\n";
    return kUsage;
  }
  if (!(a.eps >= 0.0)) {
    err << "render: --eps must be nonnegative\n";
    return kUsage;
  }
  const HPolytope D = hpoly_from_json(read_text_file(a.hpoly));
  std::optional<SpherePacking> packing;
  if (!a.packing.empty()) packing = packing_from_json(read_text_file(a.packing));
  emit(a.out, render_svg(body, D, a.eps, packing), out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Approximate convex bodies by intersections of few halfspaces.", "dudley"};
  app.require_subcommand(1);

  ApproximateArgs ap;
  auto* approx = app.add_subcommand("approximate", "Build D and write the construction and report");
  approx->add_option("--body", ap.body, "Body JSON")->required()->check(CLI::ExistingFile);
  approx->add_option("--eps", ap.eps, "Target Hausdorff distance")->required();
  approx->add_option("--mode", ap.mode, "paper-exact or generalized")->capture_default_str();
  approx->add_option("--seed", ap.seed, "Packing seed")->capture_default_str();
  approx->add_option("--out", ap.out, "Construction JSON (stdout if omitted)");
  approx->add_option("--report", ap.report, "Report JSON");
  approx->add_option("--dirs", ap.dirs, "Directions for the Hausdorff estimate (0 skips)")->capture_default_str();

  VerifyArgs vf;
  auto* verify = app.add_subcommand("verify", "Check C inside D inside C_eps");
  verify->add_option("--body", vf.body, "Body JSON")->required()->check(CLI::ExistingFile);
  verify->add_option("--hpoly", vf.hpoly, "H-polytope JSON")->required()->check(CLI::ExistingFile);
  verify->add_option("--eps", vf.eps, "Allowed gap")->required();
  verify->add_option("--dirs", vf.dirs, "Sampled directions")->capture_default_str()->check(CLI::PositiveNumber);
  verify->add_option("--seed", vf.seed, "Direction seed")->capture_default_str();
  verify->add_flag("--exact", vf.exact, "Also compute the exact planar gap");
  verify->add_option("--report", vf.report, "Verification JSON (stdout if omitted)");

  AuditArgs au;
  auto* audit = app.add_subcommand("audit", "Sample the proof's inequality chain on a construction");
  audit->add_option("--construction", au.construction, "Construction JSON")->required()->check(CLI::ExistingFile);
  audit->add_option("--samples", au.samples, "Boundary samples")->capture_default_str();
  audit->add_option("--seed", au.seed, "Sample seed")->capture_default_str();
  audit->add_option("--out", au.out, "Audit JSON (stdout if omitted)");

  BenchArgs bn;
  auto* bench = app.add_subcommand("bench", "Halfspace counts over an epsilon ladder");
  bench->add_option("--body", bn.body, "Body JSON")->required()->check(CLI::ExistingFile);
  bench->add_option("--eps-ladder", bn.ladder, "Comma separated epsilons")->required();
  bench->add_option("--mode", bn.mode, "paper-exact or generalized")->capture_default_str();
  bench->add_option("--seed", bn.seed, "Packing seed")->capture_default_str();
  bench->add_option("--out", bn.out, "CSV output (stdout if omitted)");
  bench->add_option("--dirs", bn.dirs, "Directions for the Hausdorff estimate (0 skips)")->capture_default_str();

  RenderArgs rd;
  auto* render = app.add_subcommand("render", "SVG of C, D and C_eps in the plane");
  render->add_option("--body", rd.body, "Body JSON")->required()->check(CLI::ExistingFile);
  render->add_option("--hpoly", rd.hpoly, "H-polytope JSON")->required()->check(CLI::ExistingFile);
  render->add_option("--eps", rd.eps, "Expansion radius")->required();
  render->add_option("--packing", rd.packing, "Packing JSON to overlay")->check(CLI::ExistingFile);
  render->add_option("--out", rd.out, "SVG output (stdout if omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*approx) return cmd_approximate(ap, out, err);
    if (*verify) return cmd_verify(vf, out, err);
    if (*audit) return cmd_audit(au, out, err);
    if (*bench) return cmd_bench(bn, out, err);
    if (*render) return cmd_render(rd, out, err);
  } catch (const SandwichViolation& e) {
    err << "error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const UnboundedError& e) {
    err << "error: " << e.what() << "\n";
    return kGeometry;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace dudley::cli
