#include "griffith/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "griffith/error.hpp"
#include "griffith/kahan.hpp"
#include "griffith/slicing.hpp"

namespace griffith {

CrackSegment::CrackSegment(Point2 p, Point2 q, Vec2 a_minus, Vec2 a_plus, Vec2 nu)
    : p_(p), q_(q), a_minus_(a_minus), a_plus_(a_plus), nu_(nu) {
  if (!is_finite(p) || !is_finite(q) || p == q)
    throw Error(ErrorKind::InvalidArgument, "crack endpoints must be distinct finite points");
  if (std::abs(norm(nu) - 1.0) > 1e-12)
    throw Error(ErrorKind::InvalidArgument, "crack normal must be a unit vector");
  if (std::abs(dot(nu, q - p)) > 1e-12 * dist(p, q))
    throw Error(ErrorKind::InvalidArgument, "crack normal must be orthogonal to the segment");
}

CrackSegment CrackSegment::horizontal(double x0, double x1, double y0, Vec2 a_minus,
                                      Vec2 a_plus) {
  return {{x0, y0}, {x1, y0}, a_minus, a_plus, {0.0, 1.0}};
}

CrackSegment CrackSegment::transformed(double angle_rad, const Vec2& shift) const {
  const double c = std::cos(angle_rad), s = std::sin(angle_rad);
  auto rot = [&](const Vec2& v) { return Vec2{c * v.x - s * v.y, s * v.x + c * v.y}; };
  Vec2 n = rot(nu_);
  n = n * (1.0 / norm(n));
  CrackSegment out = *this;
  out.p_ = rot(p_) + shift;
  out.q_ = rot(q_) + shift;
  out.a_minus_ = rot(a_minus_);
  out.a_plus_ = rot(a_plus_);
  // Re-orthogonalize against rounding in the rotated endpoints.
  const Vec2 t = (out.q_ - out.p_) * (1.0 / dist(out.p_, out.q_));
  out.nu_ = dot(perp(t), n) >= 0.0 ? perp(t) : -perp(t);
  return out;
}

double segment_length_inside(const DomainPolygon& domain, const Point2& p, const Point2& q) {
  const auto& v = domain.vertices();
  std::vector<double> cuts{0.0, 1.0};
  const Vec2 d = q - p;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % v.size()];
    const Vec2 e = b - a;
    const double den = cross(d, e);
    if (den == 0.0) continue;
    const double t = cross(a - p, e) / den;
    const double s = cross(a - p, d) / den;
    if (t > 0.0 && t < 1.0 && s >= 0.0 && s <= 1.0) cuts.push_back(t);
  }
  std::sort(cuts.begin(), cuts.end());
  double inside = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    if (domain.contains(p + d * mid)) inside += cuts[i + 1] - cuts[i];
  }
  return inside * norm(d);
}

// ---------------------------------------------------------------------------
// Strip mesh

namespace {

bool is_axis_rectangle(const DomainPolygon& d) {
  const auto& b = d.bbox();
  const double box = (b.xmax - b.xmin) * (b.ymax - b.ymin);
  return std::abs(d.area() - box) <= 1e-12 * box;
}

// Rows of squares / doubling rows stacked from `row` (ids at spacing s
// starting at x0) towards `y_end` in direction dir = ±1.
void grade_rows(std::vector<Point2>& pts, std::vector<Triangle>& tris, std::vector<VertexId> row,
                double x0, double s, double y, double y_end, int dir, int levels) {
  auto add = [&](double x, double yy) {
    pts.push_back({x, yy});
    return static_cast<VertexId>(pts.size() - 1);
  };
  int parity = 0;
  while (dir * (y_end - y) > 0.0) {
    const std::size_t n = row.size() - 1;
    const double y_next = y + dir * s;
    std::vector<VertexId> next;
    if (levels > 0) {
      for (std::size_t j = 0; j <= n / 2; ++j) next.push_back(add(x0 + 2.0 * s * j, y_next));
      for (std::size_t j = 0; j < n / 2; ++j) {
        const VertexId l0 = row[2 * j], l1 = row[2 * j + 1], l2 = row[2 * j + 2];
        const VertexId u0 = next[j], u1 = next[j + 1];
        tris.push_back({{l0, l1, u0}});
        tris.push_back({{l1, u1, u0}});
        tris.push_back({{l1, l2, u1}});
      }
      s *= 2.0;
      --levels;
    } else {
      for (std::size_t i = 0; i <= n; ++i) next.push_back(add(x0 + s * i, y_next));
      for (std::size_t i = 0; i < n; ++i) {
        const VertexId a = row[i], b = row[i + 1], c = next[i + 1], d = next[i];
        if ((i + parity) % 2 == 0) {
          tris.push_back({{a, b, c}});
          tris.push_back({{a, c, d}});
        } else {
          tris.push_back({{a, b, d}});
          tris.push_back({{b, c, d}});
        }
      }
      ++parity;
    }
    row = std::move(next);
    y = y_next;
  }
}

}  // namespace

StripMesh build_strip_mesh(const DomainPolygon& rectangle, const CrackSegment& crack,
                           const AdmissibilityParams& params) {
  params.check();
  if (!is_axis_rectangle(rectangle))
    throw Error(ErrorKind::InvalidArgument, "strip meshes need an axis-aligned rectangle");
  const BBox box = rectangle.bbox();
  if (crack.p().y != crack.q().y)
    throw Error(ErrorKind::InvalidArgument, "strip meshes need a horizontal crack");
  if (std::min(crack.p().x, crack.q().x) > box.xmin || std::max(crack.p().x, crack.q().x) < box.xmax)
    throw Error(ErrorKind::InvalidArgument, "strip meshes need a full-width crack");

  const double eps = params.eps;
  const double th = deg2rad(params.theta0_deg);
  const double h = eps * std::sin(th);
  const double b = 2.0 * eps * std::cos(th);
  const double y0 = crack.p().y;
  const double y_lo = y0 - 0.5 * h;
  const double y_hi = y0 + 0.5 * h;
  if (!(y_lo > box.ymin && y_hi < box.ymax))
    throw Error(ErrorKind::Construction, "crack band does not fit inside the domain");

  // Coarsen while the next uniform rows keep their diagonals below omega.
  int levels = 0;
  for (double s = b; 2.0 * s * std::sqrt(2.0) <= params.omega && levels < 16; s *= 2.0) ++levels;

  const double x_start = box.xmin - b;
  const std::size_t block = std::size_t{1} << levels;
  std::size_t n = static_cast<std::size_t>(std::ceil((box.xmax - x_start) / b)) + 1;
  n = (n + block - 1) / block * block;

  std::vector<Point2> pts;
  std::vector<Triangle> tris;
  std::vector<VertexId> bottom, top;
  for (std::size_t k = 0; k <= n; ++k) {
    pts.push_back({x_start + b * k, y_lo});
    bottom.push_back(static_cast<VertexId>(pts.size() - 1));
  }
  for (std::size_t k = 0; k <= n; ++k) {
    pts.push_back({x_start + 0.5 * b + b * k, y_hi});
    top.push_back(static_cast<VertexId>(pts.size() - 1));
  }
  for (std::size_t k = 0; k < n; ++k) {
    tris.push_back({{bottom[k], bottom[k + 1], top[k]}});
    tris.push_back({{top[k], bottom[k + 1], top[k + 1]}});
  }
  const std::size_t n_strip = tris.size();
  grade_rows(pts, tris, top, x_start + 0.5 * b, b, y_hi, box.ymax, +1, levels);
  grade_rows(pts, tris, bottom, x_start, b, y_lo, box.ymin, -1, levels);

  // Drop triangles outside Ω and compact the vertex table.
  std::vector<Triangle> kept;
  std::vector<bool> kept_strip;
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const auto& v = tris[t].v;
    const std::array<Point2, 3> c{pts[static_cast<std::size_t>(v[0])],
                                  pts[static_cast<std::size_t>(v[1])],
                                  pts[static_cast<std::size_t>(v[2])]};
    const double full = 0.5 * std::abs(orient2(c[0], c[1], c[2]));
    if (rectangle.clipped_area(c) > 1e-12 * full) {
      kept.push_back(tris[t]);
      kept_strip.push_back(t < n_strip);
    }
  }
  std::vector<VertexId> remap(pts.size(), -1);
  std::vector<Point2> used;
  for (auto& tri : kept)
    for (auto& id : tri.v) {
      auto& r = remap[static_cast<std::size_t>(id)];
      if (r < 0) {
        r = static_cast<VertexId>(used.size());
        used.push_back(pts[static_cast<std::size_t>(id)]);
      }
      id = r;
    }

  StripMesh out;
  out.mesh = Mesh2(std::move(used), std::move(kept));
  for (std::size_t t = 0; t < kept_strip.size(); ++t)
    if (kept_strip[t]) out.strip_triangles.push_back(static_cast<TriangleId>(t));
  out.strip_height = h;
  out.strip_base = b;
  out.doubling_levels = levels;

  const auto report = validate_admissible(out.mesh, params, rectangle);
  if (!report.admissible()) {
    const auto& v = report.violations.front();
    throw Error(ErrorKind::Construction, "strip mesh failed validation: " + to_string(v.kind) +
                                             " (" + std::to_string(v.value) + ")");
  }
  return out;
}

DisplacementField interpolate_piecewise(const Mesh2& mesh, const CrackSegment& crack,
                                        const SideField& below, const SideField& above) {
  DisplacementField u(mesh.num_vertices());
  const double scale = std::max(1.0, crack.length());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Point2& x = mesh.vertex(static_cast<VertexId>(i));
    if (point_segment_distance(x, crack.p(), crack.q()) <= 1e-14 * scale)
      throw Error(ErrorKind::InvalidArgument, "mesh vertex " + std::to_string(i) +
                                                  " lies on the crack");
    u[i] = crack.side(x) > 0.0 ? above(x) : below(x);
  }
  return u;
}

DisplacementField interpolate_step(const Mesh2& mesh, const CrackSegment& crack) {
  const Vec2 lo = crack.a_minus(), hi = crack.a_plus();
  return interpolate_piecewise(
      mesh, crack, [lo](const Point2&) { return lo; }, [hi](const Point2&) { return hi; });
}

StripAccounting strip_accounting(const StripMesh& strip, const DomainPolygon& domain,
                                 const CrackSegment& crack, const AdmissibilityParams& params,
                                 double kappa) {
  StripAccounting acc;
  acc.n_strip = strip.strip_triangles.size();
  KahanSum interior, clipped;
  std::vector<Interval> sections;
  const Vec2 t = crack.tangent();
  for (TriangleId id : strip.strip_triangles) {
    const auto c = strip.mesh.corners(id);
    const double full = triangle_metrics(c).area;
    const double inside = domain.clipped_area(c);
    clipped += inside;
    if (std::abs(full - inside) <= 1e-12 * full) {
      ++acc.n_interior;
      interior += full;
      const Section sec = section(c, crack.p(), t);
      if (sec.interior_nonempty) sections.push_back({sec.lo, sec.hi});
    } else {
      ++acc.n_end;
    }
  }
  std::sort(sections.begin(), sections.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  double covered = 0.0, cur_lo = 0.0, cur_hi = 0.0;
  bool open = false;
  for (const auto& s : sections) {
    if (open && s.lo <= cur_hi) {
      cur_hi = std::max(cur_hi, s.hi);
    } else {
      if (open) covered += cur_hi - cur_lo;
      cur_lo = s.lo;
      cur_hi = s.hi;
      open = true;
    }
  }
  if (open) covered += cur_hi - cur_lo;

  const double s0 = params.sin_theta0();
  acc.interior_surface = kappa / params.eps * interior.value();
  acc.covered_length = covered;
  acc.covered_target = kappa * s0 * covered;
  acc.end_correction = kappa / params.eps * clipped.value() -
                       kappa * s0 * segment_length_inside(domain, crack.p(), crack.q());
  return acc;
}

// ---------------------------------------------------------------------------
// Certificates

double RecoveryCertificate::deviation_of(double total, double target) {
  return target > 0.0 ? std::abs(total - target) / target : std::abs(total);
}

std::string RecoveryCertificate::csv_header() {
  return "eps,n_triangles,bulk,surface,total,target,deviation,end_correction";
}

std::string RecoveryCertificate::csv_row() const {
  char buf[320];
  std::snprintf(buf, sizeof buf, "%.17g,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", eps,
                n_triangles, energy.bulk, energy.surface, energy.total,
                target_surface + target_bulk, deviation, end_correction);
  return buf;
}

RecoveryCertificate recovery_certificate(const DomainPolygon& rectangle, const CrackSegment& crack,
                                         const AdmissibilityParams& params, const HookeTensor& a,
                                         double kappa, StripMesh* mesh_out,
                                         DisplacementField* u_out) {
  StripMesh strip = build_strip_mesh(rectangle, crack, params);
  DisplacementField u = interpolate_step(strip.mesh, crack);

  const auto dens = energy_densities(strip.mesh, u, a);
  const auto areas = clipped_areas(strip.mesh, rectangle);
  const auto chi = damage_from_threshold(dens, params.eps, kappa);

  RecoveryCertificate cert;
  cert.eps = params.eps;
  cert.energy = two_field_energy(dens, areas, chi, params, kappa);
  cert.energy.total = energy_F_eps(dens, areas, params.eps, DissipationProfile::brittle(kappa));
  cert.target_surface =
      kappa * params.sin_theta0() * segment_length_inside(rectangle, crack.p(), crack.q());
  cert.target_bulk = 0.0;
  cert.deviation = RecoveryCertificate::deviation_of(cert.energy.total,
                                                     cert.target_surface + cert.target_bulk);
  cert.end_correction = strip_accounting(strip, rectangle, crack, params, kappa).end_correction;
  cert.n_triangles = strip.mesh.num_triangles();
  if (mesh_out) *mesh_out = std::move(strip);
  if (u_out) *u_out = std::move(u);
  return cert;
}

std::vector<RecoveryCertificate> gamma_certificate(const DomainPolygon& rectangle,
                                                   const CrackSegment& crack,
                                                   const std::vector<double>& eps_sweep,
                                                   double omega_factor, double theta0_deg,
                                                   const HookeTensor& a, double kappa) {
  std::vector<RecoveryCertificate> out;
  out.reserve(eps_sweep.size());
  for (double eps : eps_sweep)
    out.push_back(recovery_certificate(
        rectangle, crack, AdmissibilityParams::with_factor(eps, omega_factor, theta0_deg), a,
        kappa));
  return out;
}

bool deviations_monotone(const std::vector<RecoveryCertificate>& certs, double abs_tol) {
  for (std::size_t i = 1; i < certs.size(); ++i)
    if (certs[i].deviation > certs[i - 1].deviation + abs_tol) return false;
  return true;
}

}  // namespace griffith
