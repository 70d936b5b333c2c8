#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "griffith/admissibility.hpp"
#include "griffith/elasticity.hpp"
#include "griffith/polygon.hpp"

namespace griffith {

// Per-triangle damage indicator (true = damaged).
class DamageMask {
 public:
  DamageMask() = default;
  explicit DamageMask(std::size_t n, bool value = false) : bits_(n, value ? 1 : 0) {}

  std::size_t size() const { return bits_.size(); }
  bool operator[](std::size_t t) const { return bits_[t] != 0; }
  void set(std::size_t t, bool v) { bits_[t] = v ? 1 : 0; }
  std::size_t count() const;
  friend bool operator==(const DamageMask&, const DamageMask&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

struct EnergyBreakdown {
  double bulk = 0.0;
  double surface = 0.0;
  double total = 0.0;
  double damaged_area = 0.0;
  double implied_crack_length = 0.0;  // damaged area / (eps sin θ0)
  double perimeter_bound = 0.0;       // 6 × implied_crack_length

  static std::string csv_header();
  // eps, bulk, surface, total, implied_crack_length, perimeter_bound
  std::string csv_row(double eps) const;
};

// |T ∩ Ω| for every triangle, by exact polygon clipping.
std::vector<double> clipped_areas(const Mesh2& mesh, const DomainPolygon& domain);

// A e(u) : e(u) on every triangle.
std::vector<double> energy_densities(const Mesh2& mesh, const DisplacementField& u,
                                     const HookeTensor& a);

// (1/eps) ∫_Ω f(eps A e(u):e(u)).
double energy_F_eps(const Mesh2& mesh, const DisplacementField& u,
                    const AdmissibilityParams& params, const HookeTensor& a,
                    const DissipationProfile& f, const DomainPolygon& domain);
double energy_F_eps(std::span<const double> densities, std::span<const double> areas,
                    double eps, const DissipationProfile& f);

// χ_T = [A e:e >= kappa / eps]; ties count as damaged.
DamageMask damage_from_threshold(const Mesh2& mesh, const DisplacementField& u,
                                 const AdmissibilityParams& params, const HookeTensor& a,
                                 double kappa);
DamageMask damage_from_threshold(std::span<const double> densities, double eps, double kappa);
// Lower-bound mask χ_T = [(1-δ) A e:e >= K / eps] for general profiles.
DamageMask damage_from_threshold(std::span<const double> densities, double eps, double K,
                                 double delta);

EnergyBreakdown two_field_energy(const Mesh2& mesh, const DisplacementField& u,
                                 const DamageMask& chi, const AdmissibilityParams& params,
                                 const HookeTensor& a, double kappa,
                                 const DomainPolygon& domain);
EnergyBreakdown two_field_energy(std::span<const double> densities, std::span<const double> areas,
                                 const DamageMask& chi, const AdmissibilityParams& params,
                                 double kappa);

// (1-δ) × bulk + (K/eps) × damaged area for the (δ, K) threshold mask; a
// lower bound for energy_F_eps whenever f(t) >= min(K, (1-δ) t).
double sandwich_lower_bound(std::span<const double> densities, std::span<const double> areas,
                            double eps, double K, double delta);

// Per-triangle field: the values at the corners of each triangle. Allows
// discontinuities across edges.
struct PiecewiseField {
  std::vector<std::array<Vec2, 3>> values;

  static PiecewiseField from_continuous(const Mesh2& mesh, const DisplacementField& u);
  std::size_t size() const { return values.size(); }
};

// (1 - χ) u: u on undamaged triangles, 0 on damaged ones.
PiecewiseField truncate_by_mask(const Mesh2& mesh, const DisplacementField& u,
                                const DamageMask& chi);

}  // namespace griffith
