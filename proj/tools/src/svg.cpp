#include "dudley_cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <vector>

#include "dudley/errors.hpp"
#include "dudley/verify.hpp"

namespace dudley::cli {

namespace {

using P2 = std::array<double, 2>;

double cross(const P2& o, const P2& a, const P2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain, counterclockwise.
std::vector<P2> hull(std::vector<P2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<P2> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0.0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

class Canvas {
 public:
  Canvas(double xmin, double ymin, double xmax, double ymax) : xmin_(xmin), ymax_(ymax) {
    scale_ = kSize / std::max(xmax - xmin, ymax - ymin);
  }
  double x(double v) const { return kMargin + (v - xmin_) * scale_; }
  double y(double v) const { return kMargin + (ymax_ - v) * scale_; }
  double len(double v) const { return v * scale_; }
  double extent() const { return kSize + 2 * kMargin; }

 private:
  static constexpr double kSize = 800.0;
  static constexpr double kMargin = 20.0;
  double xmin_;
  double ymax_;
  double scale_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string polygon_path(const Canvas& c, const std::vector<P2>& poly) {
  std::string d;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    d += (i ? " L " : "M ") + fmt(c.x(poly[i][0])) + " " + fmt(c.y(poly[i][1]));
  }
  return d + " Z";
}

// Boundary of hull + eps-disk: offset edges joined by arcs at the vertices.
std::string offset_path(const Canvas& c, const std::vector<P2>& poly, double eps) {
  const std::size_t n = poly.size();
  if (n == 1 || eps == 0.0) return n == 1 ? std::string() : polygon_path(c, poly);
  std::string d;
  const std::string r = fmt(c.len(eps));
  for (std::size_t i = 0; i < n; ++i) {
    const P2& a = poly[i];
    const P2& b = poly[(i + 1) % n];
    const double ex = b[0] - a[0];
    const double ey = b[1] - a[1];
    const double l = std::hypot(ex, ey);
    const double nx = ey / l * eps;
    const double ny = -ex / l * eps;
    const P2 s{a[0] + nx, a[1] + ny};
    const P2 t{b[0] + nx, b[1] + ny};
    d += (i ? " A " + r + " " + r + " 0 0 1 " : "M ") + fmt(c.x(s[0])) + " " + fmt(c.y(s[1]));
    d += " L " + fmt(c.x(t[0])) + " " + fmt(c.y(t[1]));
  }
  const P2& a = poly[0];
  const P2& b = poly[1 % n];
  const double l = std::hypot(b[0] - a[0], b[1] - a[1]);
  const double sx = a[0] + (b[1] - a[1]) / l * eps;
  const double sy = a[1] - (b[0] - a[0]) / l * eps;
  d += " A " + r + " " + r + " 0 0 1 " + fmt(c.x(sx)) + " " + fmt(c.y(sy)) + " Z";
  return d;
}

}  // namespace

std::string render_svg(const Body& C, const HPolytope& D, double eps, const std::optional<SpherePacking>& packing) {
  if (dim(C) != 2 || D.dim() != 2) throw InvalidArgument("render supports d = 2 only");
  if (!(eps >= 0.0)) throw InvalidArgument("eps must be nonnegative");
  std::vector<P2> dpoly;
  for (const auto& v : polygon_vertices(D)) dpoly.push_back({v[0], v[1]});

  double lo[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  double hi[2] = {-lo[0], -lo[1]};
  auto grow = [&](double x, double y, double r) {
    lo[0] = std::min(lo[0], x - r);
    lo[1] = std::min(lo[1], y - r);
    hi[0] = std::max(hi[0], x + r);
    hi[1] = std::max(hi[1], y + r);
  };
  for (const auto& p : dpoly) grow(p[0], p[1], 0.0);
  std::vector<P2> cpoly;
  if (const auto* ball = std::get_if<Ball>(&C)) {
    grow(ball->center()[0], ball->center()[1], ball->radius() + eps);
  } else {
    std::vector<P2> pts;
    for (const auto& v : std::get<VPolytope>(C).vertices()) pts.push_back({v[0], v[1]});
    cpoly = hull(std::move(pts));
    for (const auto& p : cpoly) grow(p[0], p[1], eps);
  }
  if (packing) {
    for (const auto& q : packing->points()) grow(q[0], q[1], 0.0);
  }
  const Canvas cv(lo[0], lo[1], hi[0], hi[1]);

  std::string s;
  const std::string size = fmt(cv.extent());
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + size + "\" height=\"" + size + "\" viewBox=\"0 0 " +
       size + " " + size + "\">\n";
  s += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (const auto* ball = std::get_if<Ball>(&C)) {
    const std::string cx = fmt(cv.x(ball->center()[0]));
    const std::string cy = fmt(cv.y(ball->center()[1]));
    s += "  <circle id=\"C\" cx=\"" + cx + "\" cy=\"" + cy + "\" r=\"" + fmt(cv.len(ball->radius())) +
         "\" fill=\"#9ecae1\" stroke=\"none\"/>\n";
    s += "  <circle id=\"C_eps\" cx=\"" + cx + "\" cy=\"" + cy + "\" r=\"" + fmt(cv.len(ball->radius() + eps)) +
         "\" fill=\"none\" stroke=\"#555555\" stroke-dasharray=\"6 4\"/>\n";
  } else {
    s += "  <path id=\"C\" d=\"" + polygon_path(cv, cpoly) + "\" fill=\"#9ecae1\" stroke=\"none\"/>\n";
    if (cpoly.size() == 1) {
      s += "  <circle id=\"C_eps\" cx=\"" + fmt(cv.x(cpoly[0][0])) + "\" cy=\"" + fmt(cv.y(cpoly[0][1])) + "\" r=\"" +
           fmt(cv.len(eps)) + "\" fill=\"none\" stroke=\"#555555\" stroke-dasharray=\"6 4\"/>\n";
    } else {
      s += "  <path id=\"C_eps\" d=\"" + offset_path(cv, cpoly, eps) +
           "\" fill=\"none\" stroke=\"#555555\" stroke-dasharray=\"6 4\"/>\n";
    }
  }
  s += "  <polygon id=\"D\" points=\"";
  for (std::size_t i = 0; i < dpoly.size(); ++i) {
    s += (i ? " " : "") + fmt(cv.x(dpoly[i][0])) + "," + fmt(cv.y(dpoly[i][1]));
  }
  s += "\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n";
  if (packing) {
    s += "  <g id=\"Q\" fill=\"#2ca02c\">\n";
    for (const auto& q : packing->points()) {
      s += "    <circle cx=\"" + fmt(cv.x(q[0])) + "\" cy=\"" + fmt(cv.y(q[1])) + "\" r=\"2\"/>\n";
    }
    s += "  </g>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace dudley::cli
