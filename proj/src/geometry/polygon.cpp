#include "griffith/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "griffith/error.hpp"

namespace griffith {

BBox bbox_of(std::span<const Point2> pts) {
  BBox b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
         -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& p : pts) {
    b.xmin = std::min(b.xmin, p.x);
    b.ymin = std::min(b.ymin, p.y);
    b.xmax = std::max(b.xmax, p.x);
    b.ymax = std::max(b.ymax, p.y);
  }
  return b;
}

double signed_area(std::span<const Point2> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return 0.0;
  // Shift to the first vertex to limit cancellation.
  const Point2 o = poly[0];
  double s = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) s += cross(poly[i] - o, poly[i + 1] - o);
  return 0.5 * s;
}

std::vector<Point2> clip_convex(std::span<const Point2> subject,
                                std::span<const Point2> convex_ccw) {
  std::vector<Point2> out(subject.begin(), subject.end());
  const std::size_t m = convex_ccw.size();
  for (std::size_t e = 0; e < m && !out.empty(); ++e) {
    const Point2 a = convex_ccw[e];
    const Point2 b = convex_ccw[(e + 1) % m];
    const Vec2 d = b - a;
    auto side = [&](const Point2& p) { return cross(d, p - a); };
    std::vector<Point2> in;
    in.reserve(out.size() + 2);
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point2& cur = out[i];
      const Point2& nxt = out[(i + 1) % n];
      const double sc = side(cur);
      const double sn = side(nxt);
      if (sc >= 0.0) in.push_back(cur);
      if ((sc >= 0.0) != (sn >= 0.0)) {
        const double t = sc / (sc - sn);
        in.push_back(cur + (nxt - cur) * t);
      }
    }
    out = std::move(in);
  }
  return out;
}

bool segments_intersect(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const double d1 = orient2(c, d, a);
  const double d2 = orient2(c, d, b);
  const double d3 = orient2(a, b, c);
  const double d4 = orient2(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  auto on = [](const Point2& p, const Point2& q, const Point2& r) {
    return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= r.y &&
           r.y <= std::max(p.y, q.y);
  };
  if (d1 == 0 && on(c, d, a)) return true;
  if (d2 == 0 && on(c, d, b)) return true;
  if (d3 == 0 && on(a, b, c)) return true;
  if (d4 == 0 && on(a, b, d)) return true;
  return false;
}

double point_segment_distance(const Point2& p, const Point2& a, const Point2& b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return dist(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return dist(p, a + ab * t);
}

DomainPolygon::DomainPolygon(std::vector<Point2> ccw_vertices, DomainRole role)
    : vertices_(std::move(ccw_vertices)), role_(role) {
  const std::size_t n = vertices_.size();
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "domain polygon needs >= 3 vertices");
  for (const auto& p : vertices_)
    if (!is_finite(p)) throw Error(ErrorKind::InvalidArgument, "non-finite domain vertex");
  area_ = signed_area(vertices_);
  if (!(area_ > 0.0))
    throw Error(ErrorKind::InvalidArgument, "domain polygon must be counterclockwise");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(vertices_[i], vertices_[(i + 1) % n], vertices_[j],
                             vertices_[(j + 1) % n]))
        throw Error(ErrorKind::InvalidArgument, "domain polygon is not simple");
    }
  }
  convex_ = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (orient2(vertices_[i], vertices_[(i + 1) % n], vertices_[(i + 2) % n]) < 0.0) {
      convex_ = false;
      break;
    }
  }
  bbox_ = bbox_of(vertices_);
}

DomainPolygon DomainPolygon::rectangle(double xmin, double ymin, double xmax, double ymax,
                                       DomainRole role) {
  return DomainPolygon({{xmin, ymin}, {xmax, ymin}, {xmax, ymax}, {xmin, ymax}}, role);
}

double DomainPolygon::distance_to_boundary(const Point2& p) const {
  double d = std::numeric_limits<double>::infinity();
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i)
    d = std::min(d, point_segment_distance(p, vertices_[i], vertices_[(i + 1) % n]));
  return d;
}

bool DomainPolygon::contains(const Point2& p, double tol) const {
  if (distance_to_boundary(p) <= tol) return true;
  // Crossing-number test.
  bool inside = false;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2& a = vertices_[i];
    const Point2& b = vertices_[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

bool DomainPolygon::strictly_contains(const Point2& p, double tol) const {
  return contains(p, 0.0) && distance_to_boundary(p) > tol;
}

double DomainPolygon::clipped_area(const std::array<Point2, 3>& tri) const {
  const BBox tb = bbox_of(tri);
  if (!tb.overlaps(bbox_)) return 0.0;
  std::array<Point2, 3> ccw = tri;
  const double o = orient2(tri[0], tri[1], tri[2]);
  if (o < 0.0) std::swap(ccw[1], ccw[2]);
  const double full = 0.5 * std::abs(o);
  if (convex_ && contains(tri[0], 0.0) && contains(tri[1], 0.0) && contains(tri[2], 0.0))
    return full;
  const auto poly = clip_convex(vertices_, ccw);
  return std::clamp(signed_area(poly), 0.0, full);
}

bool DomainPolygon::compactly_inside(const DomainPolygon& outer) const {
  for (const auto& p : vertices_)
    if (!outer.strictly_contains(p)) return false;
  const auto& ov = outer.vertices();
  const std::size_t n = vertices_.size();
  const std::size_t m = ov.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (segments_intersect(vertices_[i], vertices_[(i + 1) % n], ov[j], ov[(j + 1) % m]))
        return false;
  return true;
}

}  // namespace griffith
