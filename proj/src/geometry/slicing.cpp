#include "griffith/slicing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "griffith/error.hpp"

namespace griffith {

SliceFrame::SliceFrame(Vec2 nu, Vec2 xi) : nu_(nu), xi_(xi) {
  if (std::abs(norm(nu) - 1.0) > 1e-12 || std::abs(norm(xi) - 1.0) > 1e-12)
    throw Error(ErrorKind::InvalidArgument, "slice frame vectors must be unit");
  if (std::abs(dot(nu, xi)) < 1e-14)
    throw Error(ErrorKind::InvalidArgument, "nu·xi = 0: projection Phi undefined");
}

Section section(const std::array<Point2, 3>& tri_in, const Point2& y, const Vec2& xi) {
  std::array<Point2, 3> tri = tri_in;
  if (orient2(tri[0], tri[1], tri[2]) < 0.0) std::swap(tri[1], tri[2]);
  double scale = 0.0;
  for (int i = 0; i < 3; ++i) scale = std::max(scale, dist(tri[i], tri[(i + 1) % 3]));
  const double tol = 1e-12 * scale;

  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool parallel_on_edge = false;
  for (int i = 0; i < 3; ++i) {
    const Point2& p = tri[i];
    const Vec2 d = tri[(i + 1) % 3] - p;
    const double len = norm(d);
    // Signed distance from the edge line: c0 + s c1 (positive inside).
    const double c0 = cross(d, y - p) / len;
    const double c1 = cross(d, xi) / len;
    if (std::abs(c1) < 1e-15) {
      if (c0 < -tol) return {};
      if (c0 <= tol) parallel_on_edge = true;
      continue;
    }
    const double s = -c0 / c1;
    if (c1 > 0.0)
      lo = std::max(lo, s);
    else
      hi = std::min(hi, s);
  }
  if (lo > hi + tol) return {};
  Section out;
  out.empty = false;
  out.lo = lo;
  out.hi = std::max(lo, hi);
  out.interior_nonempty = !parallel_on_edge && (hi - lo) > tol;
  return out;
}

double project_p_xi(const Point2& z, const Vec2& xi) { return dot(z, perp(xi)); }

Interval project_p_xi(std::span<const Point2> pts, const Vec2& xi) {
  Interval iv{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& p : pts) {
    const double s = project_p_xi(p, xi);
    iv.lo = std::min(iv.lo, s);
    iv.hi = std::max(iv.hi, s);
  }
  return iv;
}

Point2 project_Phi(const Point2& z, const SliceFrame& f) {
  return z - f.xi() * (dot(f.nu(), z) / dot(f.nu(), f.xi()));
}

Point2 project_Phi(const Point2& z, const SliceFrame& f, const Point2& origin) {
  return origin + project_Phi(z - origin, f);
}

}  // namespace griffith
