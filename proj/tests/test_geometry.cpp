#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "griffith/admissibility.hpp"
#include "griffith/error.hpp"
#include "griffith/mesh_builders.hpp"
#include "griffith/slicing.hpp"
#include "support.hpp"

using namespace griffith;
using testing_support::Rng;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected griffith::Error";
  return ErrorKind::Io;
}

Mesh2 two_triangles(std::vector<Point2> pts, std::vector<Triangle> tris) {
  return Mesh2(std::move(pts), std::move(tris));
}

}  // namespace

TEST(TriangleMetrics, Equilateral) {
  const double h = std::sqrt(3.0) / 2.0;
  const auto m = triangle_metrics({Point2{0, 0}, Point2{1, 0}, Point2{0.5, h}});
  for (double a : m.angles_deg) EXPECT_NEAR(a, 60.0, 1e-12);
  EXPECT_NEAR(m.area, std::sqrt(3.0) / 4.0, 1e-15);
  EXPECT_NEAR(m.min_height, h, 1e-15);
}

TEST(TriangleMetrics, RightIsosceles) {
  const auto m = triangle_metrics({Point2{0, 0}, Point2{1, 0}, Point2{0, 1}});
  EXPECT_NEAR(m.angles_deg[0], 90.0, 1e-12);
  EXPECT_NEAR(m.angles_deg[1], 45.0, 1e-12);
  EXPECT_NEAR(m.angles_deg[2], 45.0, 1e-12);
  EXPECT_NEAR(m.min_height, std::sqrt(2.0) / 2.0, 1e-15);
  EXPECT_NEAR(m.perimeter(), 2.0 + std::sqrt(2.0), 1e-15);
}

TEST(TriangleMetrics, ExtremalStripTriangle) {
  // Isosceles with base 2 cos θ0 and height sin θ0: slants 1, base angles θ0.
  const double th = deg2rad(max_theta0_deg());
  const double base = 2.0 * std::cos(th), height = std::sin(th);
  const auto m = triangle_metrics({Point2{0, 0}, Point2{base, 0}, Point2{base / 2, height}});
  const double slant = std::hypot(base / 2, height);
  EXPECT_NEAR(slant, 1.0, 1e-15);
  EXPECT_NEAR(m.edge_lengths[1], slant, 1e-15);
  EXPECT_NEAR(m.edge_lengths[2], slant, 1e-15);
  EXPECT_NEAR(m.angles_deg[0], max_theta0_deg(), 1e-10);
  EXPECT_NEAR(m.angles_deg[1], max_theta0_deg(), 1e-10);
  EXPECT_NEAR(m.angles_deg[2], 180.0 - 2.0 * max_theta0_deg(), 1e-10);
  // The rounded coordinates quoted for this triangle give the same shape.
  const auto q = triangle_metrics({Point2{0, 0}, Point2{1.8974, 0}, Point2{0.9487, 0.3162}});
  EXPECT_NEAR(q.angles_deg[0], max_theta0_deg(), 1e-2);
  EXPECT_NEAR(q.edge_lengths[1], 1.0, 1e-4);
}

TEST(TriangleMetrics, MaxThetaConstant) {
  EXPECT_NEAR(max_theta0_deg(), 18.43494882292201, 1e-12);
  EXPECT_NEAR(std::sin(deg2rad(max_theta0_deg())), 1.0 / std::sqrt(10.0), 1e-15);
}

TEST(TriangleMetrics, DegenerateIsAnError) {
  EXPECT_EQ(kind_of([] { triangle_metrics({Point2{0, 0}, Point2{1, 1}, Point2{2, 2}}); }),
            ErrorKind::DegenerateTriangle);
}

TEST(TriangleMetrics, AnglesSumTo180OnRandomTriangles) {
  Rng rng(7);
  for (int k = 0; k < 500; ++k) {
    std::array<Point2, 3> c{Point2{rng.uniform(-1, 1), rng.uniform(-1, 1)},
                            Point2{rng.uniform(-1, 1), rng.uniform(-1, 1)},
                            Point2{rng.uniform(-1, 1), rng.uniform(-1, 1)}};
    if (std::abs(orient2(c[0], c[1], c[2])) < 1e-6) continue;
    const auto m = triangle_metrics(c);
    EXPECT_NEAR(m.angles_deg[0] + m.angles_deg[1] + m.angles_deg[2], 180.0, 1e-9);
    EXPECT_NEAR(m.area, 0.5 * std::abs(cross(c[1] - c[0], c[2] - c[0])), 1e-15);
    EXPECT_NEAR(m.min_height, 2.0 * m.area / m.max_edge(), 1e-15);
  }
}

TEST(AdmissibilityParams, Bounds) {
  EXPECT_NO_THROW((AdmissibilityParams{0.1, 0.6, max_theta0_deg()}.check()));
  EXPECT_THROW((AdmissibilityParams{0.1, 0.59, 10.0}.check()), Error);
  EXPECT_THROW((AdmissibilityParams{0.1, 0.6, max_theta0_deg() + 1e-6}.check()), Error);
  EXPECT_THROW((AdmissibilityParams{0.1, 0.6, 0.0}.check()), Error);
  EXPECT_THROW((AdmissibilityParams{0.0, 0.6, 10.0}.check()), Error);
}

TEST(Mesh, ReorientsAndBuildsAdjacency) {
  const Mesh2 m({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{{0, 2, 1}}, {{0, 2, 3}}});
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    const auto c = m.corners(static_cast<TriangleId>(t));
    EXPECT_GT(orient2(c[0], c[1], c[2]), 0.0);
  }
  EXPECT_EQ(m.num_edges(), 5u);
  const EdgeId diag = m.find_edge(2, 0);
  ASSERT_GE(diag, 0);
  EXPECT_GE(m.edges()[static_cast<std::size_t>(diag)].t1, 0);
  EXPECT_EQ(m.find_edge(1, 3), -1);
  EXPECT_EQ(m.star(0).size(), 2u);
  EXPECT_TRUE(m.on_boundary(0));
}

TEST(Mesh, RejectsBadIndices) {
  EXPECT_THROW(Mesh2({{0, 0}, {1, 0}, {0, 1}}, {{{0, 1, 3}}}), Error);
  EXPECT_THROW(Mesh2({{0, 0}, {1, 0}, {0, 1}}, {{{0, 1, 1}}}), Error);
}

TEST(DomainPolygon, Validation) {
  EXPECT_THROW(DomainPolygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}), Error);  // clockwise
  EXPECT_THROW(DomainPolygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), Error);  // bow tie
  EXPECT_THROW(DomainPolygon({{0, 0}, {1, 0}}), Error);
  const auto l = DomainPolygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
  EXPECT_NEAR(l.area(), 3.0, 1e-15);
  EXPECT_FALSE(l.convex());
  EXPECT_TRUE(l.contains({0.5, 1.5}));
  EXPECT_FALSE(l.contains({1.5, 1.5}));
}

TEST(DomainPolygon, CompactInclusion) {
  const auto inner = DomainPolygon::rectangle(0, 0, 1, 1);
  EXPECT_TRUE(inner.compactly_inside(DomainPolygon::rectangle(-0.1, -0.1, 1.1, 1.1)));
  EXPECT_FALSE(inner.compactly_inside(DomainPolygon::rectangle(0, -0.1, 1.1, 1.1)));
  EXPECT_FALSE(inner.compactly_inside(DomainPolygon::rectangle(0.2, -0.1, 1.1, 1.1)));
}

TEST(DomainPolygon, ClippedAreaMatchesHalfPlaneOracle) {
  // Oracle: T ∩ [0,1]² for a triangle clipped by x <= 1 only, computed by hand.
  const auto sq = DomainPolygon::rectangle(0, 0, 1, 1);
  EXPECT_NEAR(sq.clipped_area({Point2{0, 0}, Point2{2, 0}, Point2{0, 1}}),
              0.5 * (1.0 + 0.5) * 1.0, 1e-15);
  EXPECT_NEAR(sq.clipped_area({Point2{2, 2}, Point2{3, 2}, Point2{2, 3}}), 0.0, 1e-15);
  // Non-convex domain: L-shape against a triangle covering the notch.
  const auto l = DomainPolygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
  EXPECT_NEAR(l.clipped_area({Point2{0, 0}, Point2{4, 0}, Point2{0, 4}}), 3.0, 1e-14);
  EXPECT_NEAR(l.clipped_area({Point2{1, 1}, Point2{2, 1}, Point2{1, 2}}), 0.0, 1e-14);
}

TEST(Validate, UniformGridIsAdmissible) {
  const double s = 0.125;
  const auto mesh = square_grid(0, 0, s, 8, 8);
  const auto rep = validate_admissible(mesh, {s, 6 * s, max_theta0_deg()},
                                       DomainPolygon::rectangle(0, 0, 1, 1));
  EXPECT_TRUE(rep.admissible());
}

TEST(Validate, ShortEdgesAllFlagged) {
  const double s = 0.125;
  const auto mesh = square_grid(0, 0, s, 8, 8);
  const auto rep = validate_admissible(mesh, {1.5 * s, 9 * s, max_theta0_deg()},
                                       DomainPolygon::rectangle(0, 0, 1, 1));
  std::size_t short_edges = 0;
  for (const auto& e : mesh.edges())
    if (dist(mesh.vertex(e.a), mesh.vertex(e.b)) < 1.5 * s) ++short_edges;
  // Diagonals s√2 < 1.5 s are short too.
  EXPECT_EQ(short_edges, mesh.num_edges());
  EXPECT_EQ(rep.count(ViolationKind::EdgeTooShort), short_edges);
  EXPECT_EQ(rep.count(ViolationKind::EdgeTooLong), 0u);
}

TEST(Validate, LongEdgesAndSmallAngles) {
  const Mesh2 m({{0, 0}, {10, 0}, {5, 0.5}}, {{{0, 1, 2}}});
  const auto rep = validate_admissible(m, {1.0, 6.0, 10.0},
                                       DomainPolygon::rectangle(4, 0.01, 6, 0.1));
  EXPECT_EQ(rep.count(ViolationKind::EdgeTooLong), 1u);
  EXPECT_EQ(rep.count(ViolationKind::AngleTooSmall), 1u);
}

TEST(Validate, HalfEdgeContactIsNonConforming) {
  // Triangle B sits on half of A's top edge.
  const auto m = two_triangles({{0, 0}, {2, 0}, {1, 2}, {1, 0}, {3, 0}, {2, -2}},
                               {{{0, 1, 2}}, {{3, 5, 4}}});
  const auto rep = validate_admissible(m, {0.5, 20, 10}, DomainPolygon::rectangle(0.5, 0.1, 1.2, 0.5));
  EXPECT_EQ(rep.count(ViolationKind::NonConforming), 1u);
  EXPECT_EQ(classify_pair(m, 0, 1), PairRelation::Violation);
}

TEST(Validate, MissingTriangleLeavesDomainUncovered) {
  const auto full = square_grid(0, 0, 0.25, 4, 4);
  auto tris = full.triangles();
  tris.erase(tris.begin() + 5);
  const Mesh2 holed(full.vertices(), tris);
  const auto rep = validate_admissible(holed, {0.25, 1.5, 18},
                                       DomainPolygon::rectangle(0, 0, 1, 1));
  ASSERT_EQ(rep.count(ViolationKind::NotCovered), 1u);
  for (const auto& v : rep.violations)
    if (v.kind == ViolationKind::NotCovered) EXPECT_NEAR(v.value, 0.25 * 0.25 / 2, 1e-12);
}

TEST(Validate, ExtremalTrianglesPassAtTolerance) {
  const double th = deg2rad(max_theta0_deg());
  const double eps = 1.0 / 32;
  const std::array<Point2, 3> c{Point2{0, 0}, Point2{2 * eps * std::cos(th), 0},
                                Point2{eps * std::cos(th), eps * std::sin(th)}};
  EXPECT_TRUE(triangle_admissible(c, {eps, 6 * eps, max_theta0_deg()}));
  EXPECT_FALSE(triangle_admissible(c, {eps * (1 + 1e-6), 6 * eps, max_theta0_deg()}));
}

// ---------------------------------------------------------------------------
// Conformity against an independent intersection oracle.

namespace {

std::vector<Point2> clip_halfplanes(std::vector<Point2> poly, const std::array<Point2, 3>& tri) {
  for (int i = 0; i < 3 && !poly.empty(); ++i) {
    const Point2 a = tri[i], b = tri[(i + 1) % 3];
    auto inside = [&](const Point2& p) { return cross(b - a, p - a) >= 0.0; };
    std::vector<Point2> out;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const Point2 p = poly[k], q = poly[(k + 1) % poly.size()];
      const bool ip = inside(p), iq = inside(q);
      if (ip) out.push_back(p);
      if (ip != iq) {
        const double t = cross(b - a, p - a) / (cross(b - a, p - a) - cross(b - a, q - a));
        out.push_back(p + (q - p) * t);
      }
    }
    poly = std::move(out);
  }
  return poly;
}

double poly_area(const std::vector<Point2>& p) {
  double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += cross(p[i], p[(i + 1) % p.size()]);
  return 0.5 * s;
}

bool on_closed_tri(const std::array<Point2, 3>& t, const Point2& p) {
  for (int i = 0; i < 3; ++i)
    if (cross(t[(i + 1) % 3] - t[i], p - t[i]) < -1e-12) return false;
  return true;
}

// Intersection points of the two closed boundaries plus contained corners.
std::vector<Point2> contact_points(const std::array<Point2, 3>& a, const std::array<Point2, 3>& b) {
  std::vector<Point2> pts;
  for (const auto& p : a)
    if (on_closed_tri(b, p)) pts.push_back(p);
  for (const auto& p : b)
    if (on_closed_tri(a, p)) pts.push_back(p);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const Point2 p = a[i], q = a[(i + 1) % 3], r = b[j], s = b[(j + 1) % 3];
      const double den = cross(q - p, s - r);
      if (std::abs(den) < 1e-15) continue;
      const double t = cross(r - p, s - r) / den;
      const double u = cross(r - p, q - p) / den;
      if (t > -1e-12 && t < 1 + 1e-12 && u > -1e-12 && u < 1 + 1e-12) pts.push_back(p + (q - p) * t);
    }
  std::vector<Point2> uniq;
  for (const auto& p : pts)
    if (std::none_of(uniq.begin(), uniq.end(), [&](const Point2& q) { return dist(p, q) < 1e-9; }))
      uniq.push_back(p);
  return uniq;
}

PairRelation oracle(const Mesh2& m, TriangleId ta, TriangleId tb) {
  const auto a = m.corners(ta), b = m.corners(tb);
  const auto clip = clip_halfplanes({a.begin(), a.end()}, b);
  if (clip.size() >= 3 && poly_area(clip) > 1e-12) return PairRelation::Violation;
  const auto pts = contact_points(a, b);
  if (pts.empty()) return PairRelation::Disjoint;
  std::set<VertexId> shared;
  for (VertexId u : m.triangle(ta).v)
    for (VertexId v : m.triangle(tb).v)
      if (u == v) shared.insert(u);
  // Every contact point must be a shared vertex, or on the shared edge.
  for (const auto& p : pts) {
    bool ok = false;
    for (VertexId v : shared) ok = ok || dist(m.vertex(v), p) < 1e-9;
    if (!ok && shared.size() == 2) {
      const Point2 s0 = m.vertex(*shared.begin()), s1 = m.vertex(*shared.rbegin());
      ok = point_segment_distance(p, s0, s1) < 1e-9;
    }
    if (!ok) return PairRelation::Violation;
  }
  if (shared.size() == 1) return PairRelation::SharedVertex;
  if (shared.size() == 2) return PairRelation::SharedEdge;
  return PairRelation::Violation;
}

}  // namespace

TEST(Conformity, ClassificationMatchesOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Point2> pts;
    std::vector<Triangle> tris;
    if (trial % 3 == 0) {
      // Conforming jittered grid with an extra triangle thrown on top.
      const auto g = testing_support::jittered_grid(rng, 0, 0, 1, 4, 3, 0.2);
      pts = g.vertices();
      tris = g.triangles();
      const Point2 c{rng.uniform(0, 4), rng.uniform(0, 3)};
      pts.push_back(c);
      pts.push_back(c + Point2{0.7, 0.1});
      pts.push_back(c + Point2{0.2, 0.8});
      const auto n = static_cast<VertexId>(pts.size());
      tris.push_back({{n - 3, n - 2, n - 1}});
    } else {
      // Random small triangles, many touching or overlapping.
      for (int k = 0; k < 12 + trial; ++k) {
        const Point2 c{std::round(rng.uniform(0, 6)) * 0.5, std::round(rng.uniform(0, 6)) * 0.5};
        pts.push_back(c);
        pts.push_back(c + Point2{std::round(rng.uniform(1, 3)) * 0.5, 0});
        pts.push_back(c + Point2{0, std::round(rng.uniform(1, 3)) * 0.5});
        const auto n = static_cast<VertexId>(pts.size());
        tris.push_back({{n - 3, n - 2, n - 1}});
      }
      // Merge coincident points so that shared corners become shared indices.
      std::vector<VertexId> rep(pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i) {
        rep[i] = static_cast<VertexId>(i);
        for (std::size_t j = 0; j < i; ++j)
          if (pts[i] == pts[j]) {
            rep[i] = rep[j];
            break;
          }
      }
      for (auto& t : tris)
        for (auto& v : t.v) v = rep[static_cast<std::size_t>(v)];
    }
    const Mesh2 m(pts, tris);
    ASSERT_LE(m.num_triangles(), 50u);
    std::set<std::pair<TriangleId, TriangleId>> bad;
    for (TriangleId a = 0; a < static_cast<TriangleId>(m.num_triangles()); ++a)
      for (TriangleId b = a + 1; b < static_cast<TriangleId>(m.num_triangles()); ++b) {
        const auto want = oracle(m, a, b);
        EXPECT_EQ(classify_pair(m, a, b), want) << "trial " << trial << " pair " << a << "," << b;
        EXPECT_EQ(classify_pair(m, b, a), want);
        if (want == PairRelation::Violation) bad.insert({a, b});
      }
    const auto found = nonconforming_pairs(m);
    using PairSet = std::set<std::pair<TriangleId, TriangleId>>;
    EXPECT_EQ(PairSet(found.begin(), found.end()), bad);
  }
}

// ---------------------------------------------------------------------------
// Sections and projections

namespace {

// {s : y + s xi ∈ T} from the three half-plane inequalities.
Section section_oracle(const std::array<Point2, 3>& t, const Point2& y, const Vec2& xi) {
  double lo = -1e300, hi = 1e300;
  for (int i = 0; i < 3; ++i) {
    const Point2 a = t[i], b = t[(i + 1) % 3];
    const double c0 = cross(b - a, y - a), c1 = cross(b - a, xi);
    if (c1 == 0.0) {
      if (c0 < 0) return {};
      continue;
    }
    const double s = -c0 / c1;
    if (c1 > 0) lo = std::max(lo, s);
    else hi = std::min(hi, s);
  }
  if (lo > hi) return {};
  return {false, lo, hi, hi - lo > 1e-12};
}

}  // namespace

TEST(Section, HandExample) {
  const std::array<Point2, 3> t{Point2{0, 0}, Point2{2, 0}, Point2{0, 2}};
  const auto want = section_oracle(t, {0.5, -1}, {0, 1});
  const auto s = section(t, {0.5, -1}, {0, 1});
  ASSERT_FALSE(s.empty);
  EXPECT_NEAR(s.lo, want.lo, 1e-14);
  EXPECT_NEAR(s.hi, want.hi, 1e-14);
  EXPECT_NEAR(s.lo, 1.0, 1e-14);
  EXPECT_NEAR(s.hi, 2.5, 1e-14);
  EXPECT_TRUE(s.interior_nonempty);
}

TEST(Section, EmptyAndDegenerate) {
  const std::array<Point2, 3> t{Point2{0, 0}, Point2{2, 0}, Point2{0, 2}};
  EXPECT_TRUE(section(t, {3, 0}, {0, 1}).empty);
  const auto touch = section(t, {0, 0}, {1, 0});  // along the bottom edge
  EXPECT_FALSE(touch.empty);
  EXPECT_FALSE(touch.interior_nonempty);
  const auto corner = section(t, {2, -1}, {0, 1});  // through the corner (2, 0) only
  EXPECT_FALSE(corner.empty);
  EXPECT_NEAR(corner.hi - corner.lo, 0.0, 1e-12);
  EXPECT_FALSE(corner.interior_nonempty);
}

TEST(Section, RandomAgainstOracleAndShift) {
  Rng rng(3);
  for (int k = 0; k < 2000; ++k) {
    const auto t = testing_support::random_triangle(rng, 5.0, rng.uniform(0.1, 2));
    const double ang = rng.uniform(0, 2 * kPi);
    const Vec2 xi{std::cos(ang), std::sin(ang)};
    const Point2 y{rng.uniform(-7, 7), rng.uniform(-7, 7)};
    const auto s = section(t, y, xi);
    const auto o = section_oracle(t, y, xi);
    ASSERT_EQ(s.empty, o.empty);
    if (s.empty) continue;
    EXPECT_NEAR(s.lo, o.lo, 1e-9);
    EXPECT_NEAR(s.hi, o.hi, 1e-9);
    const double c = rng.uniform(-3, 3);
    const auto shifted = section(t, y + xi * c, xi);
    ASSERT_FALSE(shifted.empty);
    EXPECT_NEAR(shifted.lo, s.lo - c, 1e-10);
    EXPECT_NEAR(shifted.hi, s.hi - c, 1e-10);
  }
}

TEST(Projection, PXi) {
  const std::array<Point2, 3> t{Point2{0, 0}, Point2{1, 0}, Point2{0, 1}};
  EXPECT_NEAR(project_p_xi(t, {0, 1}).length(), 1.0, 1e-15);
  const std::array<Point2, 2> seg{Point2{1, 1}, Point2{1, 3}};
  EXPECT_NEAR(project_p_xi(seg, {0, 1}).length(), 0.0, 1e-15);
  Rng rng(5);
  for (int k = 0; k < 500; ++k) {
    const auto tri = testing_support::random_triangle(rng, 5.0, 1.0);
    const double ang = rng.uniform(0, 2 * kPi);
    const Vec2 xi{std::cos(ang), std::sin(ang)};
    // Oracle: extent of the vertices along the unit normal to xi.
    double lo = 1e300, hi = -1e300;
    for (const auto& p : tri) {
      const double s = -xi.y * p.x + xi.x * p.y;
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    EXPECT_NEAR(project_p_xi(tri, xi).length(), hi - lo, 1e-12);
  }
}

TEST(Projection, PhiProperties) {
  Rng rng(9);
  for (int k = 0; k < 1000; ++k) {
    const double an = rng.uniform(0, 2 * kPi);
    const double eta = rng.uniform(0, 0.9);
    // |nu - xi| = eta exactly: rotate nu by the matching angle.
    const double d = 2 * std::asin(eta / 2);
    const Vec2 nu{std::cos(an), std::sin(an)};
    const Vec2 xi{std::cos(an + d), std::sin(an + d)};
    const SliceFrame f(nu, xi);
    const Point2 z{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const Point2 w{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const Point2 pz = project_Phi(z, f);
    EXPECT_NEAR(dot(nu, pz), 0.0, 1e-12);
    const Point2 ppz = project_Phi(pz, f);
    EXPECT_NEAR(ppz.x, pz.x, 1e-12);
    EXPECT_NEAR(ppz.y, pz.y, 1e-12);
    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
    const Point2 lin = project_Phi(z * a + w * b, f);
    const Point2 sum = project_Phi(z, f) * a + project_Phi(w, f) * b;
    EXPECT_NEAR(lin.x, sum.x, 1e-11);
    EXPECT_NEAR(lin.y, sum.y, 1e-11);
    EXPECT_LE(dist(project_Phi(z, f), project_Phi(w, f)),
              std::sqrt(1 + 4 * eta * eta) * dist(z, w) * (1 + 1e-12));
  }
}

TEST(Projection, PhiSpecialCases) {
  const Vec2 nu{0.6, 0.8};
  const SliceFrame same(nu, nu);
  const Point2 z{1.5, -2};
  const Point2 p = project_Phi(z, same);
  const Point2 orth = z - nu * dot(nu, z);
  EXPECT_NEAR(p.x, orth.x, 1e-15);
  EXPECT_NEAR(p.y, orth.y, 1e-15);
  const Point2 on{-0.8, 0.6};
  const Point2 fixed = project_Phi(on * 3.0, SliceFrame(nu, {0, 1}));
  EXPECT_NEAR(fixed.x, -2.4, 1e-15);
  EXPECT_NEAR(fixed.y, 1.8, 1e-15);
  EXPECT_EQ(kind_of([&] { SliceFrame(nu, {-0.8, 0.6}); }), ErrorKind::InvalidArgument);
  EXPECT_THROW(SliceFrame({1, 1}, {1, 0}), Error);
}
