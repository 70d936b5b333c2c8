#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "griffith/adapt.hpp"
#include "griffith/diagnostics.hpp"
#include "griffith/error.hpp"
#include "griffith/mesh_builders.hpp"
#include "griffith/mesh_io.hpp"
#include "griffith/recovery.hpp"
#include "griffith/solver.hpp"

namespace fs = std::filesystem;
using namespace griffith;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitIo = 2;
constexpr int kExitNotConverged = 3;

struct Common {
  std::string config_file;
  std::vector<std::string> overrides;
  std::string out_dir = ".";

  Config load() const {
    Config cfg;
    if (!config_file.empty()) cfg.load_file(config_file);
    for (const auto& o : overrides) cfg.set(o);
    return cfg;
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config_file, "key=value configuration file");
  cmd->add_option("-s,--set", c.overrides, "override, key=value (repeatable; later wins)");
  cmd->add_option("-o,--out", c.out_dir, "output directory");
}

fs::path out_path(const Common& c, const std::string& name) {
  fs::create_directories(c.out_dir);
  return fs::path(c.out_dir) / name;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw Error(ErrorKind::Io, "cannot write " + p.string());
  return os;
}

AdmissibilityParams params_from(const Config& cfg) {
  auto p = AdmissibilityParams::with_factor(cfg.num("eps", 1.0 / 32), cfg.num("omega_factor", 6.0),
                                            cfg.num("theta0", max_theta0_deg()));
  p.check();
  return p;
}

// hooke = identity | scaled (hooke.scale) | lame (lame.lambda, lame.mu); the
// Lamé keys alone also select lame.
HookeTensor hooke_from(const Config& cfg) {
  const bool lame_keys = cfg.has("lame.lambda") || cfg.has("lame.mu");
  const std::string kind = cfg.str("hooke", lame_keys ? "lame" : "identity");
  if (kind == "identity") return HookeTensor::identity();
  if (kind == "scaled") return HookeTensor::scaled(cfg.num("hooke.scale", 1.0));
  if (kind == "lame") return HookeTensor::lame(cfg.num("lame.lambda", 0.0), cfg.num("lame.mu", 0.5));
  throw Error(ErrorKind::InvalidArgument, "hooke must be identity, scaled or lame");
}

std::array<double, 4> rect_values(const Config& cfg, const std::string& key,
                                  std::array<double, 4> fallback) {
  const auto v = cfg.list(key, {fallback[0], fallback[1], fallback[2], fallback[3]});
  if (v.size() != 4)
    throw Error(ErrorKind::InvalidArgument, "config key '" + key + "' needs xmin,ymin,xmax,ymax");
  return {v[0], v[1], v[2], v[3]};
}

DomainPolygon rect_from(const Config& cfg, const std::string& key, std::array<double, 4> fallback,
                        DomainRole role = DomainRole::Inner) {
  const auto r = rect_values(cfg, key, fallback);
  return DomainPolygon::rectangle(r[0], r[1], r[2], r[3], role);
}

Vec2 vec_from(const Config& cfg, const std::string& key, Vec2 fallback) {
  const auto v = cfg.list(key, {fallback.x, fallback.y});
  if (v.size() != 2) throw Error(ErrorKind::InvalidArgument, "config key '" + key + "' needs x,y");
  return {v[0], v[1]};
}

BoundaryDatum datum_from(const Config& cfg) {
  const std::string kind = cfg.str("datum.kind", "opening");
  if (kind == "zero") return BoundaryDatum::zero();
  if (kind == "affine") {
    const auto m = cfg.list("datum.M", {0, 0, 0, 0});
    if (m.size() != 4) throw Error(ErrorKind::InvalidArgument, "datum.M needs a11,a12,a21,a22");
    return BoundaryDatum::affine({m[0], m[1], m[2], m[3]}, vec_from(cfg, "datum.c", {0, 0}));
  }
  if (kind == "opening")
    return BoundaryDatum::cubic_opening(cfg.num("datum.amplitude", 1.0), cfg.num("datum.y0", 0.5),
                                        cfg.num("datum.width", 0.75));
  throw Error(ErrorKind::InvalidArgument, "datum.kind must be zero, affine or opening");
}

SolveOptions solve_from(const Config& cfg) {
  SolveOptions o;
  o.cg_tolerance = cfg.num("solver.cg_tol", o.cg_tolerance);
  o.cg_max_iters = static_cast<int>(cfg.integer("solver.cg_max_iters", o.cg_max_iters));
  if (cfg.has("solver.eta")) o.eta = cfg.num("solver.eta", 0.0);
  o.max_alternations =
      static_cast<int>(cfg.integer("solver.max_alternations", o.max_alternations));
  o.stagnation_tolerance = cfg.num("solver.stagnation_tol", o.stagnation_tolerance);
  if (!(o.cg_tolerance > 0) || o.cg_max_iters <= 0 || o.max_alternations <= 0 ||
      (o.eta && !(*o.eta > 0)) || !(o.stagnation_tolerance > 0))
    throw Error(ErrorKind::InvalidArgument, "solver options must be positive");
  return o;
}

CrackSegment crack_from(const Config& cfg, const DomainPolygon& domain) {
  const auto& b = domain.bbox();
  return CrackSegment::horizontal(b.xmin, b.xmax, cfg.num("crack.y0", 0.5 * (b.ymin + b.ymax)),
                                  vec_from(cfg, "crack.a_minus", {0, 0}),
                                  vec_from(cfg, "crack.a_plus", {1, 0}));
}

struct MeshInput {
  std::string nodes, elements;
};

// Mesh from files, or a square grid (spacing mesh.h) exactly tiling `outer`
// when no files are given; `outer` is then snapped to whole cells.
Mesh2 mesh_from(const Config& cfg, const MeshInput& in, const AdmissibilityParams& params,
                std::array<double, 4>* outer) {
  const std::string nodes = in.nodes.empty() ? cfg.str("mesh.nodes", "") : in.nodes;
  const std::string elements = in.elements.empty() ? cfg.str("mesh.elements", "") : in.elements;
  if (!nodes.empty() || !elements.empty()) {
    if (nodes.empty() || elements.empty())
      throw Error(ErrorKind::Io, "both node and element files are needed");
    return read_mesh(nodes, elements);
  }
  if (!outer) throw Error(ErrorKind::InvalidArgument, "no mesh given");
  auto& r = *outer;
  const double h = cfg.num("mesh.h", 1.5 * params.eps);
  if (!(h > 0)) throw Error(ErrorKind::InvalidArgument, "mesh.h must be positive");
  const int nx = std::max(1, static_cast<int>(std::lround((r[2] - r[0]) / h)));
  const int ny = std::max(1, static_cast<int>(std::lround((r[3] - r[1]) / h)));
  r[2] = r[0] + nx * h;
  r[3] = r[1] + ny * h;
  return square_grid(r[0], r[1], h, nx, ny, Diagonal::Alternating);
}

void print_report(const ValidationReport& rep) {
  std::printf("admissible: %s\n", rep.admissible() ? "yes" : "no");
  std::printf("violations: %zu\n", rep.violations.size());
  const std::size_t shown = std::min<std::size_t>(rep.violations.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& v = rep.violations[i];
    std::printf("  %s id=%d other=%d value=%.17g\n", to_string(v.kind).c_str(), v.id, v.other,
                v.value);
  }
  if (shown < rep.violations.size())
    std::printf("  ... %zu more (use --json for the full list)\n", rep.violations.size() - shown);
}

nlohmann::json report_json(const ValidationReport& rep, const AdmissibilityParams& p) {
  nlohmann::json j;
  j["admissible"] = rep.admissible();
  j["eps"] = p.eps;
  j["omega"] = p.omega;
  j["theta0_deg"] = p.theta0_deg;
  j["violations"] = nlohmann::json::array();
  for (const auto& v : rep.violations)
    j["violations"].push_back(
        {{"kind", to_string(v.kind)}, {"id", v.id}, {"other", v.other}, {"value", v.value}});
  return j;
}

void write_field(const fs::path& p, const DisplacementField& u) {
  auto os = open_out(p);
  write_nodes(os, u.values);
}

DisplacementField read_field(const fs::path& p, std::size_t n) {
  std::ifstream is(p);
  if (!is) throw Error(ErrorKind::Io, "cannot read " + p.string());
  DisplacementField u(read_nodes(is));
  if (u.size() != n) throw Error(ErrorKind::Io, "displacement file does not match the mesh");
  return u;
}

std::vector<double> mask_values(const DamageMask& chi) {
  std::vector<double> d(chi.size());
  for (std::size_t t = 0; t < chi.size(); ++t) d[t] = chi[t] ? 1.0 : 0.0;
  return d;
}

// ---------------------------------------------------------------------------

int cmd_validate(const Common& c, const MeshInput& in, const std::string& json_file) {
  const Config cfg = c.load();
  const auto params = params_from(cfg);
  const Mesh2 mesh = mesh_from(cfg, in, params, nullptr);
  const auto b = bbox_of(mesh.vertices());
  const auto domain = rect_from(cfg, "domain", {b.xmin, b.ymin, b.xmax, b.ymax});
  const auto rep = validate_admissible(mesh, params, domain);
  print_report(rep);
  if (!json_file.empty()) {
    fs::path p(json_file);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    auto os = open_out(p);
    os << report_json(rep, params).dump(2) << "\n";
  }
  return rep.admissible() ? kExitOk : kExitFailure;
}

int cmd_energy(const Common& c, const MeshInput& in, const std::string& field_file) {
  const Config cfg = c.load();
  const auto params = params_from(cfg);
  const auto a = hooke_from(cfg);
  const double kappa = cfg.num("kappa", 1.0);
  auto outer = rect_values(cfg, "outer", {-0.25, -0.25, 1.25, 1.25});
  const Mesh2 mesh = mesh_from(cfg, in, params, &outer);
  const auto domain = rect_from(cfg, "domain", {0, 0, 1, 1});
  const DisplacementField u = field_file.empty() ? interpolate_datum(mesh, datum_from(cfg))
                                                 : read_field(field_file, mesh.num_vertices());
  const std::string profile = cfg.str("profile", "brittle");
  const DissipationProfile f = profile == "brittle"  ? DissipationProfile::brittle(kappa)
                               : profile == "arctan" ? DissipationProfile::arctan(kappa)
                                                     : throw Error(ErrorKind::InvalidArgument,
                                                                   "profile must be brittle or arctan");
  const auto chi = damage_from_threshold(mesh, u, params, a, kappa);
  const auto e = two_field_energy(mesh, u, chi, params, a, kappa, domain);
  const double F = energy_F_eps(mesh, u, params, a, f, domain);
  auto os = open_out(out_path(c, "energy.csv"));
  os << EnergyBreakdown::csv_header() << "\n" << e.csv_row(params.eps) << "\n";
  std::printf("%s\n%s\n", EnergyBreakdown::csv_header().c_str(), e.csv_row(params.eps).c_str());
  std::printf("F_eps(%s) = %.17g\n", profile.c_str(), F);
  return kExitOk;
}

int cmd_minimize(const Common& c, const MeshInput& in, bool adapt_flag) {
  const Config cfg = c.load();
  const auto params = params_from(cfg);
  const auto a = hooke_from(cfg);
  const double kappa = cfg.num("kappa", 1.0);
  auto outer_r = rect_values(cfg, "outer", {-0.25, -0.25, 1.25, 1.25});
  const Mesh2 mesh = mesh_from(cfg, in, params, &outer_r);
  const auto inner = rect_from(cfg, "domain", {0, 0, 1, 1});
  const auto outer = DomainPolygon::rectangle(outer_r[0], outer_r[1], outer_r[2], outer_r[3],
                                              DomainRole::Outer);
  const auto setup = DirichletSetup::from_domains(mesh, inner, outer, datum_from(cfg));
  const auto opts = solve_from(cfg);
  const bool adapt = adapt_flag || cfg.flag("adapt", false);

  const auto rep = validate_admissible(mesh, params, inner);
  if (!rep.admissible()) {
    print_report(rep);
    std::fprintf(stderr, "input mesh is not admissible\n");
    return kExitFailure;
  }

  Mesh2 out_mesh = mesh;
  DisplacementField u;
  DamageMask chi;
  EnergyBreakdown energy;
  bool converged = true;

  auto alt = alternate_minimize(mesh, setup, a, kappa, params, opts);
  for (const auto& w : alt.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  {
    auto os = open_out(out_path(c, "trace.csv"));
    os << TraceRow::csv_header() << "\n";
    for (const auto& row : alt.trace) os << row.csv_row() << "\n";
  }
  converged = alt.converged;
  u = alt.u;
  chi = alt.chi;
  energy = alt.energy;

  if (adapt) {
    AdaptOptions ao;
    ao.sweeps = static_cast<int>(cfg.integer("adapt.sweeps", ao.sweeps));
    ao.n_candidates = static_cast<int>(cfg.integer("adapt.candidates", ao.n_candidates));
    ao.step = cfg.num("adapt.step", ao.step);
    ao.flips = cfg.flag("adapt.flips", ao.flips);
    ao.seed = static_cast<std::uint64_t>(cfg.integer("seed", 1));
    ao.validate_each = cfg.flag("adapt.validate_each", false);
    ao.solve = opts;
    auto res = optimize_mesh(mesh, setup, params, a, kappa, ao);
    auto os = open_out(out_path(c, "adapt_trace.csv"));
    os << AdaptTraceRow::csv_header() << "\n";
    for (const auto& row : res.trace) os << row.csv_row() << "\n";
    out_mesh = res.mesh;
    u = res.u;
    chi = res.chi;
    energy = res.energy;
    converged = converged && res.converged;
    if (ao.validate_each && res.invalid_meshes > 0) {
      std::fprintf(stderr, "%zu intermediate meshes failed validation\n", res.invalid_meshes);
      return kExitFailure;
    }
  }

  write_mesh(out_mesh, out_path(c, "mesh.node"), out_path(c, "mesh.ele"));
  write_field(out_path(c, "displacement.node"), u);
  {
    auto os = open_out(out_path(c, "energy.csv"));
    os << EnergyBreakdown::csv_header() << "\n" << energy.csv_row(params.eps) << "\n";
  }
  VtkFields fields;
  fields.displacement = u.values;
  fields.damage = mask_values(chi);
  fields.energy_density = energy_densities(out_mesh, u, a);
  write_vtk(out_path(c, "solution.vtk"), out_mesh, fields, "minimize");

  std::printf("%s\n%s\n", EnergyBreakdown::csv_header().c_str(),
              energy.csv_row(params.eps).c_str());
  std::printf("damaged triangles: %zu of %zu\n", chi.count(), chi.size());
  if (!converged) {
    std::fprintf(stderr, "alternating minimization did not converge\n");
    return kExitNotConverged;
  }
  return kExitOk;
}

int cmd_gamma_study(const Common& c) {
  const Config cfg = c.load();
  const auto domain = rect_from(cfg, "domain", {0, 0, 1, 1});
  const auto crack = crack_from(cfg, domain);
  const auto sweep = cfg.list("eps_sweep", {1.0 / 16, 1.0 / 32, 1.0 / 64});
  const double bound = cfg.num("gamma.max_deviation", 0.05);
  const auto t0 = std::chrono::steady_clock::now();
  const auto certs =
      gamma_certificate(domain, crack, sweep, cfg.num("omega_factor", 6.0),
                        cfg.num("theta0", max_theta0_deg()), hooke_from(cfg), cfg.num("kappa", 1.0));
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto os = open_out(out_path(c, "gamma.csv"));
  os << RecoveryCertificate::csv_header() << "\n";
  std::printf("%s\n", RecoveryCertificate::csv_header().c_str());
  for (const auto& cert : certs) {
    os << cert.csv_row() << "\n";
    std::printf("%s\n", cert.csv_row().c_str());
  }
  const bool monotone = deviations_monotone(certs);
  const bool final_ok = !certs.empty() && certs.back().deviation <= bound;
  std::printf("monotone: %s, final deviation %.3g (bound %.3g), %.3f s\n", monotone ? "yes" : "no",
              certs.empty() ? 0.0 : certs.back().deviation, bound, secs);
  return monotone && final_ok ? kExitOk : kExitFailure;
}

int cmd_recovery(const Common& c) {
  const Config cfg = c.load();
  const auto params = params_from(cfg);
  const auto domain = rect_from(cfg, "domain", {0, 0, 1, 1});
  const auto crack = crack_from(cfg, domain);
  const auto a = hooke_from(cfg);
  const double kappa = cfg.num("kappa", 1.0);
  StripMesh strip;
  DisplacementField u;
  const auto cert = recovery_certificate(domain, crack, params, a, kappa, &strip, &u);
  const auto acc = strip_accounting(strip, domain, crack, params, kappa);

  auto os = open_out(out_path(c, "recovery.csv"));
  os << RecoveryCertificate::csv_header() << "\n" << cert.csv_row() << "\n";
  write_mesh(strip.mesh, out_path(c, "recovery.node"), out_path(c, "recovery.ele"));
  VtkFields fields;
  fields.displacement = u.values;
  fields.damage = mask_values(damage_from_threshold(strip.mesh, u, params, a, kappa));
  fields.energy_density = energy_densities(strip.mesh, u, a);
  write_vtk(out_path(c, "recovery.vtk"), strip.mesh, fields, "recovery");

  std::printf("%s\n%s\n", RecoveryCertificate::csv_header().c_str(), cert.csv_row().c_str());
  std::printf("strip triangles: %zu (interior %zu, end %zu)\n", acc.n_strip, acc.n_interior,
              acc.n_end);
  std::printf("interior surface %.17g, kappa sin(theta0) covered length %.17g\n",
              acc.interior_surface, acc.covered_target);
  return kExitOk;
}

int cmd_slice_diag(const Common& c) {
  const Config cfg = c.load();
  const auto params = params_from(cfg);
  const auto domain = rect_from(cfg, "domain", {0, 0, 1, 1});
  const auto crack = crack_from(cfg, domain);
  const auto a = hooke_from(cfg);
  const double kappa = cfg.num("kappa", 1.0);
  const auto strip = build_strip_mesh(domain, crack, params);
  const auto u = interpolate_step(strip.mesh, crack);
  const auto chi = damage_from_threshold(strip.mesh, u, params, a, kappa);
  Vec2 xi = vec_from(cfg, "slice.xi", crack.nu());
  xi = xi * (1.0 / norm(xi));
  const SliceFrame frame(crack.nu(), xi);
  const int lines = static_cast<int>(cfg.integer("slice.lines", 10000));
  const auto seed = static_cast<std::uint64_t>(cfg.integer("seed", 1));
  const auto rep = slice_count(strip.mesh, chi, frame, crack, lines, seed);
  const auto fam = two_family_coverage(strip.mesh, chi, frame, crack, lines, seed);

  {
    auto os = open_out(out_path(c, "slice_histogram.csv"));
    os << SliceReport::csv_header() << "\n";
    for (std::size_t k = 0; k < rep.histogram.size(); ++k)
      os << k << "," << rep.histogram[k] << "\n";
  }
  for (int f = 1; f <= 2; ++f) {
    auto os = open_out(out_path(c, "family" + std::to_string(f) + ".txt"));
    for (TriangleId t : f == 1 ? fam.family1 : fam.family2) os << t << "\n";
  }
  std::printf("lines %d: count>=1 %.6f, count>=2 %.6f, count==2 %.6f\n", lines, rep.fraction_ge1,
              rep.fraction_ge2, rep.fraction_eq2);
  std::printf("families: %zu / %zu triangles, coverage %.17g / %.17g of %.17g\n",
              fam.family1.size(), fam.family2.size(), fam.covered1, fam.covered2,
              fam.crack_length);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Discrete brittle-damage energies on constrained triangulations.\n"
      "Units: lengths in domain units, angles (theta0) in degrees, kappa in energy per area.\n"
      "Config: flat key=value file (-c) plus -s key=value overrides, later wins.\n"
      "Exit codes: 0 success, 1 validation/acceptance failure, 2 I/O, 3 non-convergence."};
  app.require_subcommand(1);

  Common common;
  MeshInput mesh_in;
  std::string json_file, field_file;
  bool adapt = false;

  auto* validate = app.add_subcommand("validate", "check a mesh against the admissible class");
  add_common(validate, common);
  validate->add_option("--nodes", mesh_in.nodes, "node file");
  validate->add_option("--elements", mesh_in.elements, "element file");
  validate->add_option("--json", json_file, "write the report as JSON");

  auto* energy = app.add_subcommand("energy", "evaluate the discrete energy of a field");
  add_common(energy, common);
  energy->add_option("--nodes", mesh_in.nodes, "node file");
  energy->add_option("--elements", mesh_in.elements, "element file");
  energy->add_option("--displacement", field_file,
                     "vertex displacements (node format); default: interpolated datum");

  auto* minimize = app.add_subcommand("minimize", "alternating minimization under Dirichlet data");
  add_common(minimize, common);
  minimize->add_option("--nodes", mesh_in.nodes, "node file");
  minimize->add_option("--elements", mesh_in.elements, "element file");
  minimize->add_flag("--adapt", adapt, "interleave mesh optimization");

  auto* gamma = app.add_subcommand("gamma-study", "recovery certificates over an eps sweep");
  add_common(gamma, common);
  auto* recovery = app.add_subcommand("recovery", "strip recovery mesh and certificate");
  add_common(recovery, common);
  auto* slice = app.add_subcommand("slice-diag", "slice counts and two-family coverage");
  add_common(slice, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitFailure;
  }

  try {
    if (*validate) return cmd_validate(common, mesh_in, json_file);
    if (*energy) return cmd_energy(common, mesh_in, field_file);
    if (*minimize) return cmd_minimize(common, mesh_in, adapt);
    if (*gamma) return cmd_gamma_study(common);
    if (*recovery) return cmd_recovery(common);
    if (*slice) return cmd_slice_diag(common);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    switch (e.kind()) {
      case ErrorKind::Io:
        return kExitIo;
      case ErrorKind::NotConverged:
        return kExitNotConverged;
      default:
        return kExitFailure;
    }
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
  return kExitFailure;
}
