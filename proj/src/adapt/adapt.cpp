#include "griffith/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "griffith/diagnostics.hpp"
#include "griffith/error.hpp"

namespace griffith {

namespace {

std::array<Point2, 3> corners_with(const Mesh2& mesh, TriangleId t, VertexId v, const Point2& p) {
  auto c = mesh.corners(t);
  const auto& tri = mesh.triangle(t);
  for (int i = 0; i < 3; ++i)
    if (tri.v[i] == v) c[i] = p;
  return c;
}

// Triangle inside closure(Ω) up to a relative area tolerance.
bool inside_inner(const DomainPolygon& inner, const std::array<Point2, 3>& c) {
  const double full = 0.5 * orient2(c[0], c[1], c[2]);
  return full - inner.clipped_area(c) <= 1e-12 * full;
}

bool star_ok(const Mesh2& mesh, const AdmissibilityParams& params, const DirichletSetup& setup,
             VertexId v, const Point2& p) {
  for (TriangleId t : mesh.star(v)) {
    const auto c = corners_with(mesh, t, v, p);
    if (!triangle_admissible(c, params)) return false;
    if (setup.outer && !inside_inner(setup.inner, c)) return false;
  }
  return true;
}

struct FlipGeometry {
  TriangleId t0 = -1, t1 = -1;
  VertexId c = -1, d = -1;  // opposite corners in t0 and t1
  Triangle n0{}, n1{};
};

bool flip_geometry(const Mesh2& mesh, VertexId a, VertexId b, FlipGeometry& g) {
  const EdgeId e = mesh.find_edge(a, b);
  if (e < 0) return false;
  const Edge& ed = mesh.edges()[static_cast<std::size_t>(e)];
  if (ed.t1 < 0) return false;
  g.t0 = ed.t0;
  g.t1 = ed.t1;
  auto opposite = [&](TriangleId t) {
    for (VertexId v : mesh.triangle(t).v)
      if (v != a && v != b) return v;
    return VertexId{-1};
  };
  g.c = opposite(g.t0);
  g.d = opposite(g.t1);
  // Orient (a, b) so that c lies to its left.
  VertexId p = a, q = b;
  if (orient2(mesh.vertex(p), mesh.vertex(q), mesh.vertex(g.c)) < 0) std::swap(p, q);
  g.n0 = {{g.c, p, g.d}};
  g.n1 = {{g.d, q, g.c}};
  return true;
}

std::array<Point2, 3> tri_points(const Mesh2& mesh, const Triangle& t) {
  return {mesh.vertex(t.v[0]), mesh.vertex(t.v[1]), mesh.vertex(t.v[2])};
}

double local_term(const std::array<Point2, 3>& c, const std::array<Vec2, 3>& vals,
                  const DomainPolygon& domain, const HookeTensor& a, double kappa, double eps) {
  const double area = domain.clipped_area(c);
  if (area <= 0.0) return 0.0;
  const double dens = a.energy_density(sym_grad(tri_gradient(c, vals)));
  return dens >= kappa / eps ? (kappa / eps) * area : dens * area;
}

std::array<Vec2, 3> values_of(const DisplacementField& u, const Triangle& t) {
  return {u[static_cast<std::size_t>(t.v[0])], u[static_cast<std::size_t>(t.v[1])],
          u[static_cast<std::size_t>(t.v[2])]};
}

}  // namespace

std::vector<MoveProposal> propose_vertex_moves(const Mesh2& mesh, const AdmissibilityParams& params,
                                               const DirichletSetup& setup, VertexId vertex,
                                               std::uint64_t seed, int n_candidates,
                                               double step) {
  if (vertex < 0 || static_cast<std::size_t>(vertex) >= mesh.num_vertices())
    throw Error(ErrorKind::InvalidArgument, "vertex out of range");
  if (setup.pinned_vertex[static_cast<std::size_t>(vertex)])
    throw Error(ErrorKind::InvalidArgument, "pinned vertices cannot move");
  std::mt19937_64 rng(seed);
  const Point2 x = mesh.vertex(vertex);
  const bool movable = !mesh.on_boundary(vertex);
  std::vector<MoveProposal> out;
  out.reserve(static_cast<std::size_t>(std::max(0, n_candidates)));
  for (int k = 0; k < n_candidates; ++k) {
    const double r = step * params.eps * std::sqrt(unit_uniform(rng()));
    const double phi = 2.0 * kPi * unit_uniform(rng());
    MoveProposal m;
    m.kind = MoveKind::VertexRelocate;
    m.vertex = vertex;
    m.target = {x.x + r * std::cos(phi), x.y + r * std::sin(phi)};
    m.admissible = movable && star_ok(mesh, params, setup, vertex, m.target);
    out.push_back(m);
  }
  return out;
}

MoveProposal propose_edge_flip(const Mesh2& mesh, const AdmissibilityParams& params,
                               const DirichletSetup& setup, VertexId a, VertexId b) {
  MoveProposal m;
  m.kind = MoveKind::EdgeFlip;
  m.edge_a = a;
  m.edge_b = b;
  FlipGeometry g;
  if (!flip_geometry(mesh, a, b, g)) return m;
  if (setup.pinned_triangle[static_cast<std::size_t>(g.t0)] ||
      setup.pinned_triangle[static_cast<std::size_t>(g.t1)])
    return m;
  if (mesh.find_edge(g.c, g.d) >= 0) return m;
  const auto c0 = tri_points(mesh, g.n0);
  const auto c1 = tri_points(mesh, g.n1);
  // Both new triangles positively oriented <=> the quad is strictly convex.
  m.admissible = triangle_admissible(c0, params) && triangle_admissible(c1, params);
  return m;
}

double frozen_energy_delta(const Mesh2& mesh, const DisplacementField& u,
                           const MoveProposal& proposal, const DomainPolygon& domain,
                           const HookeTensor& a, double kappa, double eps) {
  double before = 0.0, after = 0.0;
  if (proposal.kind == MoveKind::VertexRelocate) {
    for (TriangleId t : mesh.star(proposal.vertex)) {
      const auto vals = values_of(u, mesh.triangle(t));
      before += local_term(mesh.corners(t), vals, domain, a, kappa, eps);
      after += local_term(corners_with(mesh, t, proposal.vertex, proposal.target), vals, domain,
                          a, kappa, eps);
    }
  } else {
    FlipGeometry g;
    if (!flip_geometry(mesh, proposal.edge_a, proposal.edge_b, g))
      throw Error(ErrorKind::InvalidArgument, "flip edge is not interior");
    for (TriangleId t : {g.t0, g.t1})
      before += local_term(mesh.corners(t), values_of(u, mesh.triangle(t)), domain, a, kappa, eps);
    for (const Triangle& t : {g.n0, g.n1})
      after += local_term(tri_points(mesh, t), values_of(u, t), domain, a, kappa, eps);
  }
  return after - before;
}

AppliedMove apply_move(const Mesh2& mesh, const DisplacementField& u,
                       const MoveProposal& proposal) {
  if (!proposal.admissible)
    throw Error(ErrorKind::Inadmissible, "move proposal is not admissible");
  check_field(mesh, u);
  if (proposal.kind == MoveKind::VertexRelocate)
    return {mesh.with_vertex(proposal.vertex, proposal.target), u};
  FlipGeometry g;
  if (!flip_geometry(mesh, proposal.edge_a, proposal.edge_b, g))
    throw Error(ErrorKind::Inadmissible, "flip edge is not interior");
  auto tris = mesh.triangles();
  tris[static_cast<std::size_t>(g.t0)] = g.n0;
  tris[static_cast<std::size_t>(g.t1)] = g.n1;
  return {mesh.with_triangles(std::move(tris)), u};
}

DirichletSetup rebuild_setup(const Mesh2& mesh, const DirichletSetup& old) {
  DirichletSetup s;
  if (old.outer) {
    s = DirichletSetup::from_domains(mesh, old.inner, *old.outer, old.datum);
  } else {
    std::vector<VertexId> pinned;
    for (std::size_t v = 0; v < old.pinned_vertex.size(); ++v)
      if (old.pinned_vertex[v]) pinned.push_back(static_cast<VertexId>(v));
    s = DirichletSetup::from_pinned_vertices(mesh, old.inner, pinned, old.datum);
  }
  s.gradient_bound = old.gradient_bound;
  return s;
}

std::string AdaptTraceRow::csv_row() const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d,%zu,%.17g", sweep, accepted_moves, energy);
  return buf;
}

AdaptResult optimize_mesh(const Mesh2& mesh, const DirichletSetup& setup,
                          const AdmissibilityParams& params, const HookeTensor& a, double kappa,
                          const AdaptOptions& options) {
  AdaptResult res;
  res.mesh = mesh;
  res.setup = setup;

  auto validate = [&](const Mesh2& m) {
    if (!options.validate_each) return;
    ++res.validated_meshes;
    if (!validate_admissible(m, params, setup.inner).admissible()) ++res.invalid_meshes;
  };
  validate(res.mesh);

  auto alt = alternate_minimize(res.mesh, res.setup, a, kappa, params, options.solve);
  res.converged = alt.converged;
  res.u = std::move(alt.u);
  res.chi = std::move(alt.chi);
  res.energy = alt.energy;
  res.initial_energy = alt.energy.total;
  double energy = energy_G_eps(res.mesh, res.u, res.setup, a, kappa, params);
  res.trace.push_back({0, 0, energy});

  std::mt19937_64 rng(options.seed);
  const double eps = params.eps;
  for (int sweep = 1; sweep <= options.sweeps; ++sweep) {
    std::size_t accepted = 0;

    std::vector<VertexId> order;
    for (std::size_t v = 0; v < res.mesh.num_vertices(); ++v)
      if (!res.setup.pinned_vertex[v] && !res.mesh.on_boundary(static_cast<VertexId>(v)))
        order.push_back(static_cast<VertexId>(v));
    for (std::size_t i = order.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng() % i);
      std::swap(order[i - 1], order[j]);
    }

    const double accept_tol = 1e-14 * std::max(1.0, std::abs(energy));
    for (VertexId v : order) {
      auto props = propose_vertex_moves(res.mesh, params, res.setup, v, rng(),
                                        options.n_candidates, options.step);
      const MoveProposal* best = nullptr;
      for (auto& p : props) {
        if (!p.admissible) continue;
        p.energy_delta = frozen_energy_delta(res.mesh, res.u, p, res.setup.inner, a, kappa, eps);
        if (p.energy_delta < -accept_tol && (!best || p.energy_delta < best->energy_delta))
          best = &p;
      }
      if (!best) continue;
      res.mesh = apply_move(res.mesh, res.u, *best).mesh;
      energy += best->energy_delta;
      ++accepted;
      validate(res.mesh);
    }

    if (options.flips) {
      std::vector<std::pair<VertexId, VertexId>> edges;
      for (const auto& e : res.mesh.edges())
        if (e.t1 >= 0) edges.emplace_back(e.a, e.b);
      for (const auto& [ea, eb] : edges) {
        auto p = propose_edge_flip(res.mesh, params, res.setup, ea, eb);
        if (!p.admissible) continue;
        p.energy_delta = frozen_energy_delta(res.mesh, res.u, p, res.setup.inner, a, kappa, eps);
        if (!(p.energy_delta < -accept_tol)) continue;
        res.mesh = apply_move(res.mesh, res.u, p).mesh;
        res.setup = rebuild_setup(res.mesh, res.setup);
        energy += p.energy_delta;
        ++accepted;
        validate(res.mesh);
      }
    }

    res.setup = rebuild_setup(res.mesh, res.setup);
    // Re-evaluate the frozen field exactly to shed accumulated deltas.
    energy = energy_G_eps(res.mesh, res.u, res.setup, a, kappa, params);
    const auto warm = damage_from_threshold(res.mesh, res.u, params, a, kappa);
    auto re = alternate_minimize(res.mesh, res.setup, a, kappa, params, options.solve, &warm);
    res.converged = res.converged && re.converged;
    const double e_re = energy_G_eps(res.mesh, re.u, res.setup, a, kappa, params);
    if (e_re <= energy) {
      res.u = std::move(re.u);
      energy = e_re;
    }
    res.trace.push_back({sweep, accepted, energy});
    if (accepted == 0) break;
  }

  res.chi = damage_from_threshold(res.mesh, res.u, params, a, kappa);
  res.energy = two_field_energy(res.mesh, res.u, res.chi, params, a, kappa, res.setup.inner);
  return res;
}

}  // namespace griffith
