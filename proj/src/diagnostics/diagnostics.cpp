#include "griffith/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "griffith/error.hpp"
#include "griffith/kahan.hpp"

namespace griffith {

double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

// ---------------------------------------------------------------------------
// Rigid motions

RigidFit fit_rigid(const Mesh2& mesh, const DisplacementField& u, const DisplacementField& v,
                   const std::vector<TriangleId>& component) {
  check_field(mesh, u);
  check_field(mesh, v);
  std::vector<VertexId> verts;
  for (TriangleId t : component)
    for (VertexId id : mesh.triangle(t).v) verts.push_back(id);
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  if (verts.empty()) throw Error(ErrorKind::InvalidArgument, "empty component");

  const double n = static_cast<double>(verts.size());
  Point2 xbar{};
  Vec2 dbar{};
  for (VertexId id : verts) {
    const auto i = static_cast<std::size_t>(id);
    xbar += mesh.vertex(id);
    dbar += v[i] - u[i];
  }
  xbar *= 1.0 / n;
  dbar *= 1.0 / n;

  double sxx = 0.0, sxd = 0.0, scale = 0.0;
  for (VertexId id : verts) {
    const auto i = static_cast<std::size_t>(id);
    const Vec2 x = mesh.vertex(id) - xbar;
    const Vec2 d = v[i] - u[i] - dbar;
    sxx += dot(x, x);
    sxd += -x.y * d.x + x.x * d.y;
    scale = std::max(scale, norm(mesh.vertex(id)));
  }
  if (sxx <= 1e-24 * std::max(1.0, scale * scale) * n)
    throw Error(ErrorKind::InvalidArgument, "component too small to fix a rotation");

  RigidFit fit;
  fit.motion.w = sxd / sxx;
  fit.motion.c = dbar - Vec2{-xbar.y, xbar.x} * fit.motion.w;
  KahanSum r2;
  for (VertexId id : verts) {
    const auto i = static_cast<std::size_t>(id);
    const Vec2 e = v[i] - u[i] - fit.motion(mesh.vertex(id));
    r2 += dot(e, e);
  }
  fit.residual = std::sqrt(std::max(0.0, r2.value()));
  return fit;
}

std::vector<std::vector<TriangleId>> undamaged_components(const Mesh2& mesh,
                                                          const DamageMask& chi) {
  const std::size_t nt = mesh.num_triangles();
  if (chi.size() != nt) throw Error(ErrorKind::SizeMismatch, "mask does not match mesh");
  std::vector<int> label(nt, -1);
  std::vector<std::vector<TriangleId>> out;
  for (std::size_t s = 0; s < nt; ++s) {
    if (chi[s] || label[s] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<TriangleId> stack{static_cast<TriangleId>(s)};
    label[s] = id;
    while (!stack.empty()) {
      const TriangleId t = stack.back();
      stack.pop_back();
      out.back().push_back(t);
      for (EdgeId e : mesh.triangle_edges(t)) {
        const Edge& ed = mesh.edges()[static_cast<std::size_t>(e)];
        const TriangleId o = ed.t0 == t ? ed.t1 : ed.t0;
        if (o < 0 || chi[static_cast<std::size_t>(o)] || label[static_cast<std::size_t>(o)] >= 0)
          continue;
        label[static_cast<std::size_t>(o)] = id;
        stack.push_back(o);
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// d_M

namespace {

// Degree-5 seven-point rule in barycentric coordinates.
struct QuadPoint {
  double l0, l1, l2, w;
};

const std::array<QuadPoint, 7>& rule7() {
  static const std::array<QuadPoint, 7> pts = [] {
    const double r = std::sqrt(15.0);
    const double a1 = (6.0 - r) / 21.0, b1 = (9.0 + 2.0 * r) / 21.0;
    const double a2 = (6.0 + r) / 21.0, b2 = (9.0 - 2.0 * r) / 21.0;
    const double w1 = (155.0 - r) / 1200.0, w2 = (155.0 + r) / 1200.0;
    return std::array<QuadPoint, 7>{{{1.0 / 3, 1.0 / 3, 1.0 / 3, 9.0 / 40.0},
                                     {a1, a1, b1, w1},
                                     {a1, b1, a1, w1},
                                     {b1, a1, a1, w1},
                                     {a2, a2, b2, w2},
                                     {a2, b2, a2, w2},
                                     {b2, a2, a2, w2}}};
  }();
  return pts;
}

double distance_origin_to_triangle(const Vec2& a, const Vec2& b, const Vec2& c) {
  const Point2 o{};
  const double d1 = orient2(a, b, o), d2 = orient2(b, c, o), d3 = orient2(c, a, o);
  const bool has_neg = d1 < 0 || d2 < 0 || d3 < 0;
  const bool has_pos = d1 > 0 || d2 > 0 || d3 > 0;
  if (!(has_neg && has_pos) && orient2(a, b, c) != 0.0) return 0.0;
  return std::min({point_segment_distance(o, a, b), point_segment_distance(o, b, c),
                   point_segment_distance(o, c, a)});
}

struct CapIntegrator {
  double cap;
  double rel_tol;
  int max_depth = 12;

  double rule(double area, const Vec2& d0, const Vec2& d1, const Vec2& d2) const {
    double s = 0.0;
    for (const auto& q : rule7()) {
      const Vec2 d = d0 * q.l0 + d1 * q.l1 + d2 * q.l2;
      s += q.w * std::min(cap, norm(d));
    }
    return s * area;
  }

  double integrate(double area, const Vec2& d0, const Vec2& d1, const Vec2& d2, double coarse,
                   int depth) const {
    if (distance_origin_to_triangle(d0, d1, d2) >= cap) return cap * area;
    const Vec2 m01 = (d0 + d1) * 0.5, m12 = (d1 + d2) * 0.5, m20 = (d2 + d0) * 0.5;
    const double a4 = 0.25 * area;
    const double c0 = rule(a4, d0, m01, m20);
    const double c1 = rule(a4, m01, d1, m12);
    const double c2 = rule(a4, m20, m12, d2);
    const double c3 = rule(a4, m01, m12, m20);
    const double fine = c0 + c1 + c2 + c3;
    if (depth >= max_depth || std::abs(fine - coarse) <= rel_tol * cap * std::abs(area))
      return fine;
    return integrate(a4, d0, m01, m20, c0, depth + 1) + integrate(a4, m01, d1, m12, c1, depth + 1) +
           integrate(a4, m20, m12, d2, c2, depth + 1) + integrate(a4, m01, m12, m20, c3, depth + 1);
  }

  double operator()(double area, const Vec2& d0, const Vec2& d1, const Vec2& d2) const {
    return integrate(area, d0, d1, d2, rule(area, d0, d1, d2), 0);
  }
};

// Affine extension of the corner values of triangle c to the point x.
Vec2 affine_at(const std::array<Point2, 3>& c, const std::array<Vec2, 3>& d, const Point2& x) {
  const double det = orient2(c[0], c[1], c[2]);
  const double l0 = orient2(x, c[1], c[2]) / det;
  const double l1 = orient2(c[0], x, c[2]) / det;
  return d[0] * l0 + d[1] * l1 + d[2] * (1.0 - l0 - l1);
}

}  // namespace

double distance_in_measure(const Mesh2& mesh, const PiecewiseField& u, const PiecewiseField& v,
                           double cap, const DomainPolygon& domain, double rel_tol) {
  if (!(cap > 0.0)) throw Error(ErrorKind::InvalidArgument, "cap M must be positive");
  if (u.size() != mesh.num_triangles() || v.size() != mesh.num_triangles())
    throw Error(ErrorKind::SizeMismatch, "piecewise fields do not match the mesh");
  const CapIntegrator integ{cap, rel_tol};
  KahanSum total;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto c = mesh.corners(static_cast<TriangleId>(t));
    const std::array<Vec2, 3> d{u.values[t][0] - v.values[t][0], u.values[t][1] - v.values[t][1],
                                u.values[t][2] - v.values[t][2]};
    const double full = 0.5 * orient2(c[0], c[1], c[2]);
    const double inside = domain.clipped_area(c);
    if (inside <= 0.0) continue;
    if (std::abs(full - inside) <= 1e-14 * full) {
      total += integ(full, d[0], d[1], d[2]);
      continue;
    }
    // T ∩ Ω as a polygon, integrated by a signed fan (the integrand is
    // defined on the whole plane through the affine extension).
    const auto poly = clip_convex(domain.vertices(), c);
    if (poly.size() < 3) continue;
    const Vec2 d0 = affine_at(c, d, poly[0]);
    for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
      const double a = 0.5 * orient2(poly[0], poly[i], poly[i + 1]);
      if (a == 0.0) continue;
      total += integ(a, d0, affine_at(c, d, poly[i]), affine_at(c, d, poly[i + 1]));
    }
  }
  return total.value();
}

// ---------------------------------------------------------------------------
// Slicing

namespace {

struct Projected {
  std::vector<TriangleId> ids;
  std::vector<Interval> spans;
  std::vector<double> vertex_coords;  // sorted
};

// Open intervals of the damaged triangles along `axis`, coordinate
// measured as axis·(proj(z) - origin) with proj given.
template <class Proj>
Projected project_damaged(const Mesh2& mesh, const DamageMask& chi, Proj&& proj) {
  if (chi.size() != mesh.num_triangles())
    throw Error(ErrorKind::SizeMismatch, "mask does not match mesh");
  Projected p;
  for (std::size_t t = 0; t < chi.size(); ++t) {
    if (!chi[t]) continue;
    const auto c = mesh.corners(static_cast<TriangleId>(t));
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& z : c) {
      const double s = proj(z);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
      p.vertex_coords.push_back(s);
    }
    p.ids.push_back(static_cast<TriangleId>(t));
    p.spans.push_back({lo, hi});
  }
  std::sort(p.vertex_coords.begin(), p.vertex_coords.end());
  return p;
}

bool near_any(const std::vector<double>& sorted, double s, double tol) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), s - tol);
  return it != sorted.end() && *it <= s + tol;
}

// Stratified sample parameters in (0, 1) moved off degenerate coordinates.
template <class Coord>
std::vector<double> stratified(int n, std::uint64_t seed, const std::vector<double>& bad,
                               double tol, Coord&& coord) {
  std::mt19937_64 rng(seed);
  std::vector<double> ts;
  ts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double t = (i + 0.5) / n;
    for (int tries = 0; near_any(bad, coord(t), tol) && tries < 64; ++tries)
      t = (i + 0.25 + 0.5 * unit_uniform(rng())) / n;
    ts.push_back(t);
  }
  return ts;
}

}  // namespace

SliceReport slice_count(const Mesh2& mesh, const DamageMask& chi, const SliceFrame& frame,
                        const CrackSegment& crack, int n_lines, std::uint64_t seed) {
  if (n_lines <= 0) throw Error(ErrorKind::InvalidArgument, "n_lines must be positive");
  const Vec2 axis = perp(frame.xi());
  const auto proj = project_damaged(mesh, chi, [&](const Point2& z) { return dot(axis, z); });
  std::vector<double> los, his;
  for (const auto& s : proj.spans) {
    los.push_back(s.lo);
    his.push_back(s.hi);
  }
  std::sort(los.begin(), los.end());
  std::sort(his.begin(), his.end());

  const Vec2 dir = crack.q() - crack.p();
  const double tol = 1e-12 * std::max(1.0, norm(crack.p()) + norm(dir));
  auto base = [&](double t) { return crack.p() + dir * t; };
  const auto ts = stratified(n_lines, seed, proj.vertex_coords, tol,
                             [&](double t) { return dot(axis, base(t)); });

  SliceReport rep;
  rep.xi = frame.xi();
  std::size_t ge1 = 0, ge2 = 0, eq2 = 0;
  for (double t : ts) {
    const Point2 y = project_Phi(base(t), frame, crack.p());
    const double c = dot(axis, y);
    const auto below = std::lower_bound(los.begin(), los.end(), c) - los.begin();
    const auto closed = std::upper_bound(his.begin(), his.end(), c) - his.begin();
    const int count = static_cast<int>(below - closed);
    rep.base_points.push_back(y);
    rep.counts.push_back(count);
    if (rep.histogram.size() <= static_cast<std::size_t>(count))
      rep.histogram.resize(static_cast<std::size_t>(count) + 1, 0);
    ++rep.histogram[static_cast<std::size_t>(count)];
    ge1 += count >= 1;
    ge2 += count >= 2;
    eq2 += count == 2;
  }
  const double n = static_cast<double>(ts.size());
  rep.fraction_ge1 = ge1 / n;
  rep.fraction_ge2 = ge2 / n;
  rep.fraction_eq2 = eq2 / n;
  return rep;
}

namespace {

double union_length(std::vector<Interval> iv, double lo, double hi) {
  for (auto& i : iv) {
    i.lo = std::max(i.lo, lo);
    i.hi = std::min(i.hi, hi);
  }
  std::erase_if(iv, [](const Interval& i) { return !(i.hi > i.lo); });
  std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  double total = 0.0;
  double cur_lo = 0.0, cur_hi = 0.0;
  bool open = false;
  for (const auto& i : iv) {
    if (open && i.lo <= cur_hi) {
      cur_hi = std::max(cur_hi, i.hi);
      continue;
    }
    if (open) total += cur_hi - cur_lo;
    cur_lo = i.lo;
    cur_hi = i.hi;
    open = true;
  }
  if (open) total += cur_hi - cur_lo;
  return total;
}

double overlap(const Interval& a, const Interval& b) {
  return std::max(0.0, std::min(a.hi, b.hi) - std::max(a.lo, b.lo));
}

}  // namespace

TwoFamilyReport two_family_coverage(const Mesh2& mesh, const DamageMask& chi,
                                    const SliceFrame& frame, const CrackSegment& crack,
                                    int n_samples, std::uint64_t seed) {
  if (n_samples <= 0) throw Error(ErrorKind::InvalidArgument, "n_samples must be positive");
  const Vec2 tau = crack.tangent();
  const Point2 origin = crack.p();
  const auto proj = project_damaged(mesh, chi, [&](const Point2& z) {
    return dot(tau, project_Phi(z, frame, origin) - origin);
  });
  const double len = crack.length();
  const double tol = 1e-12 * std::max(1.0, len);

  TwoFamilyReport rep;
  rep.crack_length = len;
  const auto ts =
      stratified(n_samples, seed, proj.vertex_coords, tol, [&](double t) { return t * len; });

  // Candidates by a sweep over spans sorted by their left end.
  std::vector<std::size_t> order(proj.spans.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return proj.spans[a].lo < proj.spans[b].lo;
  });

  std::vector<int> family(proj.spans.size(), 0);  // 0 none, 1 or 2
  std::vector<double> done;                       // processed sample coordinates
  std::vector<std::size_t> active;
  std::size_t next = 0;
  for (double t : ts) {
    const double s = t * len;
    while (next < order.size() && proj.spans[order[next]].lo < s) active.push_back(order[next++]);
    std::erase_if(active, [&](std::size_t k) { return !(proj.spans[k].hi > s); });
    ++rep.samples;
    if (active.size() < 2) {
      ++rep.samples_without_pair;
      // A lone crossing triangle still covers this point for one family.
      if (active.size() == 1 && family[active[0]] == 0) family[active[0]] = 1;
      continue;
    }
    // Pair with least projected overlap; ties by triangle id.
    std::size_t b1 = 0, b2 = 0;
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> cand = active;
    std::sort(cand.begin(), cand.end(),
              [&](std::size_t a, std::size_t b) { return proj.ids[a] < proj.ids[b]; });
    for (std::size_t i = 0; i < cand.size(); ++i)
      for (std::size_t j = i + 1; j < cand.size(); ++j) {
        const double o = overlap(proj.spans[cand[i]], proj.spans[cand[j]]);
        if (o < best) {
          best = o;
          b1 = cand[i];
          b2 = cand[j];
        }
      }
    done.push_back(s);

    const int f1 = family[b1], f2 = family[b2];
    if (f1 == 0 && f2 == 0) {
      family[b1] = 1;
      family[b2] = 2;
    } else if (f1 != 0 && f2 != f1) {
      if (f2 == 0) family[b2] = 3 - f1;
    } else if (f2 != 0 && f1 != f2) {
      if (f1 == 0) family[b1] = 3 - f2;
    } else {
      // Both in the same family: move the one entering the sweep later.
      auto first_hit = [&](std::size_t k) {
        return std::upper_bound(done.begin(), done.end(), proj.spans[k].lo) - done.begin();
      };
      const std::size_t moved = first_hit(b1) >= first_hit(b2) ? b1 : b2;
      family[moved] = 3 - family[moved];
    }
  }

  std::vector<Interval> i1, i2;
  for (std::size_t k = 0; k < family.size(); ++k) {
    if (family[k] == 1) {
      rep.family1.push_back(proj.ids[k]);
      i1.push_back(proj.spans[k]);
    } else if (family[k] == 2) {
      rep.family2.push_back(proj.ids[k]);
      i2.push_back(proj.spans[k]);
    }
  }
  std::sort(rep.family1.begin(), rep.family1.end());
  std::sort(rep.family2.begin(), rep.family2.end());
  rep.covered1 = union_length(std::move(i1), 0.0, len);
  rep.covered2 = union_length(std::move(i2), 0.0, len);
  return rep;
}

}  // namespace griffith
