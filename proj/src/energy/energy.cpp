#include "griffith/energy.hpp"

#include <algorithm>
#include <cstdio>

#include "griffith/error.hpp"
#include "griffith/kahan.hpp"

namespace griffith {

std::size_t DamageMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::string EnergyBreakdown::csv_header() {
  return "eps,bulk,surface,total,implied_crack_length,perimeter_bound";
}

std::string EnergyBreakdown::csv_row(double eps) const {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", eps, bulk, surface, total,
                implied_crack_length, perimeter_bound);
  return buf;
}

std::vector<double> clipped_areas(const Mesh2& mesh, const DomainPolygon& domain) {
  std::vector<double> out(mesh.num_triangles());
  for (std::size_t t = 0; t < out.size(); ++t)
    out[t] = domain.clipped_area(mesh.corners(static_cast<TriangleId>(t)));
  return out;
}

std::vector<double> energy_densities(const Mesh2& mesh, const DisplacementField& u,
                                     const HookeTensor& a) {
  check_field(mesh, u);
  std::vector<double> out(mesh.num_triangles());
  for (std::size_t t = 0; t < out.size(); ++t)
    out[t] = a.energy_density(sym_grad(tri_gradient(mesh, u, static_cast<TriangleId>(t))));
  return out;
}

namespace {

void check_lengths(std::span<const double> d, std::span<const double> areas) {
  if (d.size() != areas.size())
    throw Error(ErrorKind::SizeMismatch, "density and area arrays differ in length");
}

// Per-triangle brittle contribution; shared by F_eps and the two-field
// energy so both sum identical terms in identical order.
double brittle_term(double density, double area, double eps, double kappa, bool damaged) {
  return damaged ? (kappa / eps) * area : density * area;
}

}  // namespace

double energy_F_eps(std::span<const double> d, std::span<const double> areas, double eps,
                    const DissipationProfile& f) {
  check_lengths(d, areas);
  KahanSum s;
  if (f.is_brittle()) {
    const double kappa = f.kappa();
    for (std::size_t t = 0; t < d.size(); ++t)
      s += brittle_term(d[t], areas[t], eps, kappa, d[t] >= kappa / eps);
  } else {
    for (std::size_t t = 0; t < d.size(); ++t) s += areas[t] * f(eps * d[t]) / eps;
  }
  return s.value();
}

double energy_F_eps(const Mesh2& mesh, const DisplacementField& u,
                    const AdmissibilityParams& params, const HookeTensor& a,
                    const DissipationProfile& f, const DomainPolygon& domain) {
  return energy_F_eps(energy_densities(mesh, u, a), clipped_areas(mesh, domain), params.eps, f);
}

DamageMask damage_from_threshold(std::span<const double> d, double eps, double kappa) {
  DamageMask chi(d.size());
  const double thr = kappa / eps;
  for (std::size_t t = 0; t < d.size(); ++t) chi.set(t, d[t] >= thr);
  return chi;
}

DamageMask damage_from_threshold(std::span<const double> d, double eps, double K, double delta) {
  DamageMask chi(d.size());
  const double thr = K / eps;
  for (std::size_t t = 0; t < d.size(); ++t) chi.set(t, (1.0 - delta) * d[t] >= thr);
  return chi;
}

DamageMask damage_from_threshold(const Mesh2& mesh, const DisplacementField& u,
                                 const AdmissibilityParams& params, const HookeTensor& a,
                                 double kappa) {
  return damage_from_threshold(energy_densities(mesh, u, a), params.eps, kappa);
}

EnergyBreakdown two_field_energy(std::span<const double> d, std::span<const double> areas,
                                 const DamageMask& chi, const AdmissibilityParams& params,
                                 double kappa) {
  check_lengths(d, areas);
  if (chi.size() != d.size())
    throw Error(ErrorKind::SizeMismatch, "damage mask length differs from triangle count");
  KahanSum bulk, damaged, total;
  for (std::size_t t = 0; t < d.size(); ++t) {
    if (chi[t])
      damaged += areas[t];
    else
      bulk += d[t] * areas[t];
    total += brittle_term(d[t], areas[t], params.eps, kappa, chi[t]);
  }
  EnergyBreakdown e;
  e.bulk = bulk.value();
  e.damaged_area = damaged.value();
  e.surface = (kappa / params.eps) * e.damaged_area;
  e.total = total.value();
  e.implied_crack_length = e.damaged_area / (params.eps * params.sin_theta0());
  e.perimeter_bound = 6.0 * e.implied_crack_length;
  return e;
}

EnergyBreakdown two_field_energy(const Mesh2& mesh, const DisplacementField& u,
                                 const DamageMask& chi, const AdmissibilityParams& params,
                                 const HookeTensor& a, double kappa,
                                 const DomainPolygon& domain) {
  return two_field_energy(energy_densities(mesh, u, a), clipped_areas(mesh, domain), chi, params,
                          kappa);
}

double sandwich_lower_bound(std::span<const double> d, std::span<const double> areas, double eps,
                            double K, double delta) {
  check_lengths(d, areas);
  const auto chi = damage_from_threshold(d, eps, K, delta);
  KahanSum bulk, damaged;
  for (std::size_t t = 0; t < d.size(); ++t) {
    if (chi[t])
      damaged += areas[t];
    else
      bulk += d[t] * areas[t];
  }
  return (1.0 - delta) * bulk.value() + (K / eps) * damaged.value();
}

PiecewiseField PiecewiseField::from_continuous(const Mesh2& mesh, const DisplacementField& u) {
  check_field(mesh, u);
  PiecewiseField p;
  p.values.resize(mesh.num_triangles());
  for (std::size_t t = 0; t < p.values.size(); ++t) {
    const auto& tri = mesh.triangle(static_cast<TriangleId>(t));
    for (int i = 0; i < 3; ++i) p.values[t][i] = u[static_cast<std::size_t>(tri.v[i])];
  }
  return p;
}

PiecewiseField truncate_by_mask(const Mesh2& mesh, const DisplacementField& u,
                                const DamageMask& chi) {
  if (chi.size() != mesh.num_triangles())
    throw Error(ErrorKind::SizeMismatch, "damage mask length differs from triangle count");
  auto p = PiecewiseField::from_continuous(mesh, u);
  for (std::size_t t = 0; t < p.values.size(); ++t)
    if (chi[t]) p.values[t] = {Vec2{}, Vec2{}, Vec2{}};
  return p;
}

}  // namespace griffith
