#include "griffith/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "griffith/error.hpp"
#include "griffith/kahan.hpp"

namespace griffith {

void AdmissibilityParams::check() const {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  if (!(theta0_deg > 0.0) || theta0_deg > max_theta0_deg() * (1.0 + kAdmissibilityRelTol))
    throw Error(ErrorKind::InvalidArgument,
                "theta0 must lie in (0, 45 - atan(1/2)] degrees");
  if (!(omega >= 6.0 * eps * (1.0 - kAdmissibilityRelTol)))
    throw Error(ErrorKind::InvalidArgument, "omega must be >= 6 eps");
}

double AdmissibilityParams::sin_theta0() const { return std::sin(deg2rad(theta0_deg)); }

AdmissibilityParams AdmissibilityParams::with_factor(double eps, double omega_factor,
                                                     double theta0_deg) {
  AdmissibilityParams p{eps, omega_factor * eps, theta0_deg};
  p.check();
  return p;
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::EdgeTooShort: return "edge < eps";
    case ViolationKind::EdgeTooLong: return "edge > omega";
    case ViolationKind::AngleTooSmall: return "angle < theta0";
    case ViolationKind::NonConforming: return "non-conforming intersection";
    case ViolationKind::NotCovered: return "domain not covered";
    case ViolationKind::Degenerate: return "degenerate triangle";
  }
  return "unknown";
}

std::size_t ValidationReport::count(ViolationKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; }));
}

bool triangle_admissible(const std::array<Point2, 3>& c, const AdmissibilityParams& p) {
  if (orient2(c[0], c[1], c[2]) <= 0.0) return false;
  TriangleMetrics m;
  try {
    m = triangle_metrics(c);
  } catch (const Error&) {
    return false;
  }
  const double lo = p.eps * (1.0 - kAdmissibilityRelTol);
  const double hi = p.omega * (1.0 + kAdmissibilityRelTol);
  for (double l : m.edge_lengths)
    if (l < lo || l > hi) return false;
  return m.min_angle_deg() >= p.theta0_deg * (1.0 - kAdmissibilityRelTol);
}

namespace {

// Signed distances of p to the three edge lines of a CCW triangle; p lies in
// the closed triangle (up to tol) iff all are >= -tol.
bool in_closed_triangle(const std::array<Point2, 3>& c, const Point2& p, double tol) {
  for (int i = 0; i < 3; ++i) {
    const Point2& a = c[i];
    const Point2& b = c[(i + 1) % 3];
    const double len = dist(a, b);
    if (cross(b - a, p - a) / len < -tol) return false;
  }
  return true;
}

std::array<Point2, 3> ccw_corners(const Mesh2& mesh, TriangleId t) {
  auto c = mesh.corners(t);
  if (orient2(c[0], c[1], c[2]) < 0.0) std::swap(c[1], c[2]);
  return c;
}

}  // namespace

PairRelation classify_pair(const Mesh2& mesh, TriangleId a, TriangleId b) {
  const auto& ta = mesh.triangle(a);
  const auto& tb = mesh.triangle(b);
  const auto ca = ccw_corners(mesh, a);
  const auto cb = ccw_corners(mesh, b);
  const double scale = std::max({dist(ca[0], ca[1]), dist(ca[1], ca[2]), dist(ca[2], ca[0]),
                                 dist(cb[0], cb[1]), dist(cb[1], cb[2]), dist(cb[2], cb[0])});
  const double tol = 1e-9 * scale;

  int shared = 0;
  for (VertexId u : ta.v)
    for (VertexId w : tb.v)
      if (u == w) ++shared;
  if (shared == 3) return PairRelation::Violation;

  const double area_a = 0.5 * std::abs(orient2(ca[0], ca[1], ca[2]));
  const double area_b = 0.5 * std::abs(orient2(cb[0], cb[1], cb[2]));
  const auto overlap = clip_convex(ca, cb);
  if (signed_area(overlap) > 1e-9 * std::min(area_a, area_b)) return PairRelation::Violation;

  auto is_shared = [&](VertexId id) {
    return std::find(tb.v.begin(), tb.v.end(), id) != tb.v.end() &&
           std::find(ta.v.begin(), ta.v.end(), id) != ta.v.end();
  };
  bool contact = false;
  for (int i = 0; i < 3; ++i) {
    if (in_closed_triangle(cb, ca[i], tol)) {
      contact = true;
      if (!is_shared(ta.v[i])) return PairRelation::Violation;
    }
    if (in_closed_triangle(ca, cb[i], tol)) {
      contact = true;
      if (!is_shared(tb.v[i])) return PairRelation::Violation;
    }
  }
  // Edges crossing without any vertex contact imply interior overlap, which
  // was handled above; still guard against slivers below the area threshold.
  for (int i = 0; i < 3 && !contact; ++i)
    for (int j = 0; j < 3; ++j)
      if (segments_intersect(ca[i], ca[(i + 1) % 3], cb[j], cb[(j + 1) % 3]))
        return PairRelation::Violation;
  if (!contact) return shared == 0 ? PairRelation::Disjoint : PairRelation::Violation;
  if (shared == 1) return PairRelation::SharedVertex;
  if (shared == 2) return PairRelation::SharedEdge;
  return PairRelation::Violation;
}

std::vector<std::pair<TriangleId, TriangleId>> nonconforming_pairs(const Mesh2& mesh) {
  std::vector<std::pair<TriangleId, TriangleId>> bad;
  const std::size_t nt = mesh.num_triangles();
  if (nt < 2) return bad;
  const BBox all = bbox_of(mesh.vertices());
  double mean_edge = 0.0;
  std::vector<BBox> boxes(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto c = mesh.corners(static_cast<TriangleId>(t));
    boxes[t] = bbox_of(c);
    mean_edge += std::max(boxes[t].xmax - boxes[t].xmin, boxes[t].ymax - boxes[t].ymin);
  }
  mean_edge /= static_cast<double>(nt);
  const double cell = std::max(mean_edge, 1e-300);
  const double w = all.xmax - all.xmin;
  const double h = all.ymax - all.ymin;
  const auto nx = static_cast<std::int64_t>(std::min(4096.0, std::floor(w / cell) + 1));
  const auto ny = static_cast<std::int64_t>(std::min(4096.0, std::floor(h / cell) + 1));
  const double cx = w / static_cast<double>(nx) > 0 ? w / static_cast<double>(nx) : 1.0;
  const double cy = h / static_cast<double>(ny) > 0 ? h / static_cast<double>(ny) : 1.0;
  auto ix = [&](double x) {
    return std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((x - all.xmin) / cx)), 0,
                                    nx - 1);
  };
  auto iy = [&](double y) {
    return std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((y - all.ymin) / cy)), 0,
                                    ny - 1);
  };
  std::vector<std::vector<TriangleId>> cells(static_cast<std::size_t>(nx * ny));
  const double tol = 1e-9 * cell;
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& b = boxes[t];
    for (auto j = iy(b.ymin - tol); j <= iy(b.ymax + tol); ++j)
      for (auto i = ix(b.xmin - tol); i <= ix(b.xmax + tol); ++i)
        cells[static_cast<std::size_t>(j * nx + i)].push_back(static_cast<TriangleId>(t));
  }
  std::vector<TriangleId> seen(nt, -1);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto a = static_cast<TriangleId>(t);
    const auto& b = boxes[t];
    for (auto j = iy(b.ymin - tol); j <= iy(b.ymax + tol); ++j) {
      for (auto i = ix(b.xmin - tol); i <= ix(b.xmax + tol); ++i) {
        for (TriangleId o : cells[static_cast<std::size_t>(j * nx + i)]) {
          if (o <= a || seen[static_cast<std::size_t>(o)] == a) continue;
          seen[static_cast<std::size_t>(o)] = a;
          if (!b.overlaps(boxes[static_cast<std::size_t>(o)], tol)) continue;
          if (classify_pair(mesh, a, o) == PairRelation::Violation) bad.emplace_back(a, o);
        }
      }
    }
  }
  std::sort(bad.begin(), bad.end());
  return bad;
}

double covered_area(const Mesh2& mesh, const DomainPolygon& domain) {
  KahanSum s;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t)
    s += domain.clipped_area(mesh.corners(static_cast<TriangleId>(t)));
  return s.value();
}

ValidationReport validate_admissible(const Mesh2& mesh, const AdmissibilityParams& p,
                                     const DomainPolygon& domain) {
  ValidationReport report;
  auto& out = report.violations;
  const double lo = p.eps * (1.0 - kAdmissibilityRelTol);
  const double hi = p.omega * (1.0 + kAdmissibilityRelTol);
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const auto& edge = mesh.edges()[e];
    const double len = dist(mesh.vertex(edge.a), mesh.vertex(edge.b));
    if (len < lo) out.push_back({ViolationKind::EdgeTooShort, static_cast<int>(e), -1, len});
    if (len > hi) out.push_back({ViolationKind::EdgeTooLong, static_cast<int>(e), -1, len});
  }
  bool degenerate = false;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    try {
      const auto m = triangle_metrics(mesh, static_cast<TriangleId>(t));
      const double amin = m.min_angle_deg();
      if (amin < p.theta0_deg * (1.0 - kAdmissibilityRelTol))
        out.push_back({ViolationKind::AngleTooSmall, static_cast<int>(t), -1, amin});
    } catch (const Error&) {
      degenerate = true;
      out.push_back({ViolationKind::Degenerate, static_cast<int>(t), -1, 0.0});
    }
  }
  if (!degenerate) {
    for (const auto& [a, b] : nonconforming_pairs(mesh))
      out.push_back({ViolationKind::NonConforming, a, b, 0.0});
  }
  const double covered = covered_area(mesh, domain);
  const double missing = domain.area() - covered;
  if (missing > 1e-9 * domain.area())
    out.push_back({ViolationKind::NotCovered, -1, -1, missing});
  return report;
}

}  // namespace griffith
