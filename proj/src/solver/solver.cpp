#include "griffith/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "griffith/error.hpp"

namespace griffith {

// ---------------------------------------------------------------------------
// Boundary datum

namespace {

std::array<double, 10> monomials(const Point2& p) {
  const double x = p.x, y = p.y;
  return {1.0, x, y, x * x, x * y, y * y, x * x * x, x * x * y, x * y * y, y * y * y};
}

Vec2 poly_grad(const BoundaryDatum::Coeffs& c, const Point2& p) {
  const double x = p.x, y = p.y;
  const double dx = c[1] + 2 * c[3] * x + c[4] * y + 3 * c[6] * x * x + 2 * c[7] * x * y +
                    c[8] * y * y;
  const double dy = c[2] + c[4] * x + 2 * c[5] * y + c[7] * x * x + 2 * c[8] * x * y +
                    3 * c[9] * y * y;
  return {dx, dy};
}

double poly_eval(const BoundaryDatum::Coeffs& c, const Point2& p) {
  const auto m = monomials(p);
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) s += c[i] * m[i];
  return s;
}

}  // namespace

BoundaryDatum BoundaryDatum::affine(const Mat2& m, const Vec2& c) {
  Coeffs wx{}, wy{};
  wx[0] = c.x;
  wx[1] = m.a11;
  wx[2] = m.a12;
  wy[0] = c.y;
  wy[1] = m.a21;
  wy[2] = m.a22;
  return {wx, wy};
}

BoundaryDatum BoundaryDatum::cubic_opening(double amplitude, double y0, double width) {
  if (!(width > 0.0)) throw Error(ErrorKind::InvalidArgument, "opening width must be positive");
  const double a = 1.0 / width;
  const double a3 = a * a * a;
  Coeffs wy{};
  wy[0] = amplitude * (-1.5 * a * y0 + 0.5 * a3 * y0 * y0 * y0);
  wy[2] = amplitude * (1.5 * a - 1.5 * a3 * y0 * y0);
  wy[5] = amplitude * (1.5 * a3 * y0);
  wy[9] = amplitude * (-0.5 * a3);
  return {Coeffs{}, wy};
}

Vec2 BoundaryDatum::operator()(const Point2& p) const { return {poly_eval(wx_, p), poly_eval(wy_, p)}; }

Mat2 BoundaryDatum::gradient(const Point2& p) const {
  const Vec2 gx = poly_grad(wx_, p);
  const Vec2 gy = poly_grad(wy_, p);
  return {gx.x, gx.y, gy.x, gy.y};
}

bool BoundaryDatum::is_affine() const {
  for (std::size_t i = 3; i < 10; ++i)
    if (wx_[i] != 0.0 || wy_[i] != 0.0) return false;
  return true;
}

double BoundaryDatum::sampled_gradient_sup(const BBox& box, int n) const {
  if (is_affine()) return gradient({0, 0}).frobenius();
  double sup = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Point2 p{box.xmin + (box.xmax - box.xmin) * i / (n - 1),
                     box.ymin + (box.ymax - box.ymin) * j / (n - 1)};
      sup = std::max(sup, gradient(p).frobenius());
    }
  return sup;
}

DisplacementField interpolate_datum(const Mesh2& mesh, const BoundaryDatum& datum) {
  DisplacementField u(mesh.num_vertices());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = datum(mesh.vertex(static_cast<VertexId>(i)));
  return u;
}

// ---------------------------------------------------------------------------
// Dirichlet setup

DirichletSetup DirichletSetup::from_domains(const Mesh2& mesh, const DomainPolygon& inner,
                                            const DomainPolygon& outer,
                                            const BoundaryDatum& datum) {
  if (!inner.compactly_inside(outer))
    throw Error(ErrorKind::InvalidArgument, "inner domain must be compactly inside the outer one");
  DirichletSetup s;
  s.inner = inner;
  s.outer = outer;
  s.datum = datum;
  s.gradient_bound = datum.sampled_gradient_sup(outer.bbox());
  s.pinned_triangle.assign(mesh.num_triangles(), false);
  s.pinned_vertex.assign(mesh.num_vertices(), false);
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto c = mesh.corners(static_cast<TriangleId>(t));
    const double full = 0.5 * std::abs(orient2(c[0], c[1], c[2]));
    // T ∩ (Ω' \ closure Ω) is nonempty iff it has positive area.
    const double layer = outer.clipped_area(c) - inner.clipped_area(c);
    if (layer > 1e-12 * full) {
      s.pinned_triangle[t] = true;
      for (VertexId v : mesh.triangle(static_cast<TriangleId>(t)).v)
        s.pinned_vertex[static_cast<std::size_t>(v)] = true;
    }
  }
  s.pinned_values = interpolate_datum(mesh, datum);
  return s;
}

DirichletSetup DirichletSetup::from_pinned_vertices(const Mesh2& mesh, const DomainPolygon& inner,
                                                    const std::vector<VertexId>& pinned,
                                                    const BoundaryDatum& datum) {
  DirichletSetup s;
  s.inner = inner;
  s.datum = datum;
  s.gradient_bound = datum.sampled_gradient_sup(bbox_of(mesh.vertices()));
  s.pinned_vertex.assign(mesh.num_vertices(), false);
  for (VertexId v : pinned) {
    if (v < 0 || static_cast<std::size_t>(v) >= mesh.num_vertices())
      throw Error(ErrorKind::InvalidArgument, "pinned vertex out of range");
    s.pinned_vertex[static_cast<std::size_t>(v)] = true;
  }
  s.pinned_triangle.assign(mesh.num_triangles(), false);
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(static_cast<TriangleId>(t));
    s.pinned_triangle[t] = std::all_of(tri.v.begin(), tri.v.end(), [&](VertexId v) {
      return s.pinned_vertex[static_cast<std::size_t>(v)];
    });
  }
  s.pinned_values = interpolate_datum(mesh, datum);
  return s;
}

std::size_t DirichletSetup::num_pinned_vertices() const {
  return static_cast<std::size_t>(std::count(pinned_vertex.begin(), pinned_vertex.end(), true));
}

double DirichletSetup::eps0(double kappa, const HookeTensor& a) const {
  if (gradient_bound == 0.0) return std::numeric_limits<double>::infinity();
  return kappa / (a.beta() * gradient_bound * gradient_bound);
}

// ---------------------------------------------------------------------------
// Elastic solve

namespace {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

// Element stiffness w Bᵀ C B for dofs (u0x, u0y, u1x, u1y, u2x, u2y).
std::array<std::array<double, 6>, 6> element_stiffness(const std::array<Point2, 3>& c,
                                                       const HookeTensor& a, double weight) {
  const double det = orient2(c[0], c[1], c[2]);
  // Gradients of the barycentric basis functions.
  std::array<Vec2, 3> g;
  for (int i = 0; i < 3; ++i) {
    const Point2& pj = c[(i + 1) % 3];
    const Point2& pk = c[(i + 2) % 3];
    g[i] = {(pj.y - pk.y) / det, (pk.x - pj.x) / det};
  }
  const double r = std::sqrt(0.5);
  std::array<std::array<double, 6>, 3> b{};
  for (int i = 0; i < 3; ++i) {
    b[0][2 * i] = g[i].x;
    b[1][2 * i + 1] = g[i].y;
    b[2][2 * i] = r * g[i].y;
    b[2][2 * i + 1] = r * g[i].x;
  }
  const auto& cm = a.matrix();
  std::array<std::array<double, 6>, 3> cb{};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 6; ++k)
      cb[i][k] = cm[i][0] * b[0][k] + cm[i][1] * b[1][k] + cm[i][2] * b[2][k];
  std::array<std::array<double, 6>, 6> ke{};
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q)
      ke[p][q] = weight * (b[0][p] * cb[0][q] + b[1][p] * cb[1][q] + b[2][p] * cb[2][q]);
  return ke;
}

}  // namespace

SolveResult elastic_solve(const Mesh2& mesh, const DirichletSetup& setup, const DamageMask& chi,
                          const HookeTensor& a, const SolveOptions& options,
                          const DisplacementField* initial_guess) {
  const std::size_t nv = mesh.num_vertices();
  const std::size_t nt = mesh.num_triangles();
  if (chi.size() != nt || setup.pinned_vertex.size() != nv || setup.pinned_values.size() != nv)
    throw Error(ErrorKind::SizeMismatch, "mesh, mask and Dirichlet setup disagree in size");
  if (setup.num_pinned_vertices() == 0)
    throw Error(ErrorKind::InvalidArgument, "elastic_solve needs at least one pinned vertex");

  const auto areas = clipped_areas(mesh, setup.inner);
  std::vector<double> weight(nt, 0.0);
  for (std::size_t t = 0; t < nt; ++t) weight[t] = chi[t] ? 0.0 : areas[t];

  // Rigid anchoring: components of edge-adjacent active triangles are held
  // once two distinct vertices of theirs are held.
  DisjointSets comps(nt);
  for (const auto& e : mesh.edges())
    if (e.t1 >= 0 && weight[static_cast<std::size_t>(e.t0)] > 0.0 &&
        weight[static_cast<std::size_t>(e.t1)] > 0.0)
      comps.unite(e.t0, e.t1);
  std::vector<std::vector<VertexId>> comp_vertices(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    if (weight[t] <= 0.0) continue;
    auto& cv = comp_vertices[static_cast<std::size_t>(comps.find(static_cast<int>(t)))];
    for (VertexId v : mesh.triangle(static_cast<TriangleId>(t)).v) cv.push_back(v);
  }
  for (auto& cv : comp_vertices) {
    std::sort(cv.begin(), cv.end());
    cv.erase(std::unique(cv.begin(), cv.end()), cv.end());
  }
  std::vector<bool> held(setup.pinned_vertex.begin(), setup.pinned_vertex.end());
  std::vector<bool> comp_done(nt, false);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t c = 0; c < nt; ++c) {
      if (comp_done[c] || comp_vertices[c].empty()) continue;
      std::vector<Point2> held_pts;
      for (VertexId v : comp_vertices[c])
        if (held[static_cast<std::size_t>(v)]) held_pts.push_back(mesh.vertex(v));
      bool two = false;
      for (std::size_t i = 1; i < held_pts.size() && !two; ++i) two = !(held_pts[i] == held_pts[0]);
      if (two) {
        comp_done[c] = true;
        changed = true;
        for (VertexId v : comp_vertices[c]) held[static_cast<std::size_t>(v)] = true;
      }
    }
  }

  // Dof numbering: free vertices only.
  std::vector<int> dof(nv, -1);
  int nfree = 0;
  for (std::size_t v = 0; v < nv; ++v)
    if (!setup.pinned_vertex[v]) dof[v] = nfree++;

  SolveResult result;
  result.u = DisplacementField(nv);
  for (std::size_t v = 0; v < nv; ++v)
    if (setup.pinned_vertex[v]) result.u[v] = setup.pinned_values[v];

  // Floating groups: free vertices that are not held, grouped through
  // active triangles.
  {
    DisjointSets vs(nv);
    for (std::size_t t = 0; t < nt; ++t) {
      if (weight[t] <= 0.0) continue;
      const auto& tri = mesh.triangle(static_cast<TriangleId>(t));
      for (int i = 0; i < 3; ++i) {
        const auto p = static_cast<std::size_t>(tri.v[i]);
        const auto q = static_cast<std::size_t>(tri.v[(i + 1) % 3]);
        if (!held[p] && !held[q]) vs.unite(tri.v[i], tri.v[(i + 1) % 3]);
      }
    }
    std::vector<int> group(nv, -1);
    for (std::size_t v = 0; v < nv; ++v) {
      if (held[v]) continue;
      const auto root = static_cast<std::size_t>(vs.find(static_cast<int>(v)));
      if (group[root] < 0) {
        group[root] = static_cast<int>(result.floating_components.size());
        result.floating_components.emplace_back();
      }
      result.floating_components[static_cast<std::size_t>(group[root])].push_back(
          static_cast<VertexId>(v));
    }
  }
  if (nfree == 0) return result;

  const double eta = options.eta.value_or(1e-8 * a.alpha());
  const auto n = static_cast<Eigen::Index>(2 * nfree);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(36 * nt);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (std::size_t t = 0; t < nt; ++t) {
    if (weight[t] <= 0.0) continue;
    const auto& tri = mesh.triangle(static_cast<TriangleId>(t));
    const auto ke = element_stiffness(mesh.corners(static_cast<TriangleId>(t)), a, weight[t]);
    for (int p = 0; p < 6; ++p) {
      const auto vp = static_cast<std::size_t>(tri.v[p / 2]);
      if (dof[vp] < 0) continue;
      const int row = 2 * dof[vp] + p % 2;
      for (int q = 0; q < 6; ++q) {
        const auto vq = static_cast<std::size_t>(tri.v[q / 2]);
        if (dof[vq] >= 0) {
          trip.emplace_back(row, 2 * dof[vq] + q % 2, ke[p][q]);
        } else {
          const Vec2& w = setup.pinned_values[vq];
          rhs(row) -= ke[p][q] * (q % 2 == 0 ? w.x : w.y);
        }
      }
    }
  }
  for (std::size_t v = 0; v < nv; ++v) {
    if (dof[v] >= 0 && !held[v]) {
      trip.emplace_back(2 * dof[v], 2 * dof[v], eta);
      trip.emplace_back(2 * dof[v] + 1, 2 * dof[v] + 1, eta);
    }
  }
  Eigen::SparseMatrix<double> k(n, n);
  k.setFromTriplets(trip.begin(), trip.end());

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (rhs.norm() > 0.0) {
    if (initial_guess && initial_guess->size() == nv) {
      for (std::size_t v = 0; v < nv; ++v)
        if (dof[v] >= 0) {
          x(2 * dof[v]) = (*initial_guess)[v].x;
          x(2 * dof[v] + 1) = (*initial_guess)[v].y;
        }
    }
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(options.cg_tolerance);
    cg.setMaxIterations(options.cg_max_iters);
    cg.compute(k);
    x = cg.solveWithGuess(rhs, x);
    result.iterations = static_cast<int>(cg.iterations());
    result.residual = (rhs - k * x).norm() / rhs.norm();
    if (cg.info() != Eigen::Success && result.residual > options.cg_tolerance)
      throw SolveError("conjugate gradient did not converge", result.residual,
                       result.iterations);
  }
  for (std::size_t v = 0; v < nv; ++v)
    if (dof[v] >= 0) result.u[v] = {x(2 * dof[v]), x(2 * dof[v] + 1)};
  return result;
}

// ---------------------------------------------------------------------------
// Alternating minimization

std::string TraceRow::csv_header() { return "iter,bulk,surface,total,n_damaged,residual"; }

std::string TraceRow::csv_row() const {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%zu,%.17g", iter, energy.bulk,
                energy.surface, energy.total, n_damaged, residual);
  return buf;
}

AlternationResult alternate_minimize(const Mesh2& mesh, const DirichletSetup& setup,
                                     const HookeTensor& a, double kappa,
                                     const AdmissibilityParams& params,
                                     const SolveOptions& options,
                                     const DamageMask* initial_mask) {
  AlternationResult out;
  const double e0 = setup.eps0(kappa, a);
  if (params.eps >= e0) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "eps = %.6g >= eps0 = kappa / (beta |grad w|^2) = %.6g: pinned triangles may "
                  "damage",
                  params.eps, e0);
    out.warnings.emplace_back(buf);
  }
  const auto areas = clipped_areas(mesh, setup.inner);
  DamageMask chi = initial_mask ? *initial_mask : DamageMask(mesh.num_triangles());
  DisplacementField u_prev;
  double prev_u_energy = std::numeric_limits<double>::quiet_NaN();

  struct Best {
    DisplacementField u;
    DamageMask chi;
    double energy = std::numeric_limits<double>::infinity();
    std::vector<std::vector<VertexId>> floating;
  } best;

  auto count_pinned_damaged = [&](const DamageMask& m) {
    std::size_t c = 0;
    for (std::size_t t = 0; t < m.size(); ++t)
      if (m[t] && setup.pinned_triangle[t]) ++c;
    return c;
  };

  for (int k = 0; k < options.max_alternations; ++k) {
    auto solved = elastic_solve(mesh, setup, chi, a, options, u_prev.size() ? &u_prev : nullptr);
    const auto dens = energy_densities(mesh, solved.u, a);
    const auto e_u = two_field_energy(dens, areas, chi, params, kappa);
    out.trace.push_back({k, e_u, chi.count(), solved.residual});
    out.half_steps.push_back(e_u.total);
    out.max_pinned_damaged = std::max(out.max_pinned_damaged, count_pinned_damaged(chi));

    DamageMask next = damage_from_threshold(dens, params.eps, kappa);
    const auto e_chi = two_field_energy(dens, areas, next, params, kappa);
    out.half_steps.push_back(e_chi.total);
    out.max_pinned_damaged = std::max(out.max_pinned_damaged, count_pinned_damaged(next));
    out.iterations = k + 1;

    if (e_chi.total < best.energy) {
      best = {solved.u, next, e_chi.total, solved.floating_components};
    }
    const bool stable = next == chi;
    const bool stagnated =
        k > 0 && std::abs(prev_u_energy - e_u.total) <=
                     options.stagnation_tolerance * std::max(std::abs(e_u.total), 1e-300);
    if (stable || stagnated) {
      out.u = std::move(solved.u);
      out.chi = std::move(next);
      out.energy = e_chi;
      out.floating_components = std::move(solved.floating_components);
      out.converged = true;
      return out;
    }
    prev_u_energy = e_u.total;
    u_prev = std::move(solved.u);
    chi = std::move(next);
  }

  out.u = std::move(best.u);
  out.chi = std::move(best.chi);
  out.floating_components = std::move(best.floating);
  out.energy = two_field_energy(energy_densities(mesh, out.u, a), areas, out.chi, params, kappa);
  out.converged = false;
  out.warnings.emplace_back("max_alternations exceeded; returning best iterate");
  return out;
}

EnumerationResult global_minimum_by_enumeration(const Mesh2& mesh, const DirichletSetup& setup,
                                                const HookeTensor& a, double kappa,
                                                const AdmissibilityParams& params,
                                                const SolveOptions& options) {
  const std::size_t nt = mesh.num_triangles();
  if (nt > 20) throw Error(ErrorKind::InvalidArgument, "enumeration limited to 20 triangles");
  const auto areas = clipped_areas(mesh, setup.inner);
  EnumerationResult best{DamageMask(nt), DisplacementField{},
                         std::numeric_limits<double>::infinity()};
  for (std::uint32_t bits = 0; bits < (1u << nt); ++bits) {
    DamageMask chi(nt);
    for (std::size_t t = 0; t < nt; ++t) chi.set(t, (bits >> t) & 1u);
    auto solved = elastic_solve(mesh, setup, chi, a, options);
    const auto e = two_field_energy(energy_densities(mesh, solved.u, a), areas, chi, params, kappa);
    if (e.total < best.energy) best = {chi, std::move(solved.u), e.total};
  }
  return best;
}

double energy_G_eps(const Mesh2& mesh, const DisplacementField& u, const DirichletSetup& setup,
                    const HookeTensor& a, double kappa, const AdmissibilityParams& params) {
  check_field(mesh, u);
  for (std::size_t v = 0; v < u.size(); ++v) {
    if (!setup.pinned_vertex[v]) continue;
    const Vec2& w = setup.pinned_values[v];
    if (dist(u[v], w) > 1e-9 * std::max(1.0, norm(w)))
      return std::numeric_limits<double>::infinity();
  }
  return energy_F_eps(energy_densities(mesh, u, a), clipped_areas(mesh, setup.inner), params.eps,
                      DissipationProfile::brittle(kappa));
}

}  // namespace griffith
