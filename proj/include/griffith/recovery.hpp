#pragma once

#include <functional>
#include <vector>

#include "griffith/energy.hpp"

namespace griffith {

// Straight crack segment [p, q] with unit normal nu; a_minus / a_plus are the
// displacement values on the sides nu·(x - p) < 0 and > 0.
class CrackSegment {
 public:
  // Throws Error(InvalidArgument) when p == q, |nu| != 1 or nu is not
  // orthogonal to q - p (1e-12).
  CrackSegment(Point2 p, Point2 q, Vec2 a_minus, Vec2 a_plus, Vec2 nu);
  // y = y0 from x0 to x1 with nu = (0, 1).
  static CrackSegment horizontal(double x0, double x1, double y0, Vec2 a_minus, Vec2 a_plus);

  const Point2& p() const { return p_; }
  const Point2& q() const { return q_; }
  const Vec2& a_minus() const { return a_minus_; }
  const Vec2& a_plus() const { return a_plus_; }
  const Vec2& nu() const { return nu_; }
  double length() const { return dist(p_, q_); }
  Vec2 tangent() const { return (q_ - p_) * (1.0 / length()); }
  // Signed distance to the crack line, positive on the a_plus side.
  double side(const Point2& x) const { return dot(nu_, x - p_); }

  // Rigid motion x ↦ R x + shift of the geometry; the jump values are
  // rotated too so the whole configuration moves rigidly.
  CrackSegment transformed(double angle_rad, const Vec2& shift) const;

 private:
  Point2 p_, q_;
  Vec2 a_minus_, a_plus_, nu_;
};

// H¹(segment ∩ Ω).
double segment_length_inside(const DomainPolygon& domain, const Point2& p, const Point2& q);

struct StripMesh {
  Mesh2 mesh;
  std::vector<TriangleId> strip_triangles;  // the band around the crack
  double strip_height = 0.0;                // eps sin θ0
  double strip_base = 0.0;                  // 2 eps cos θ0
  int doubling_levels = 0;
};

// Crack-adapted mesh of a rectangle: a band of height eps sin θ0 centred on
// the crack, tiled by alternating isosceles triangles with slants eps and
// base angles θ0, with graded square rows above and below. The band extends
// past both sides of the rectangle; triangles missing the rectangle are
// dropped. Throws Error(InvalidArgument) for non-rectangular domains or
// cracks that are not horizontal and full width, Error(Construction) when
// the band does not fit or the result fails validation.
StripMesh build_strip_mesh(const DomainPolygon& rectangle, const CrackSegment& crack,
                           const AdmissibilityParams& params);

// Vertex value from the side of the crack line it lies on. Throws
// Error(InvalidArgument) when a vertex lies on the segment.
using SideField = std::function<Vec2(const Point2&)>;
DisplacementField interpolate_piecewise(const Mesh2& mesh, const CrackSegment& crack,
                                        const SideField& below, const SideField& above);
// Step function a_minus / a_plus.
DisplacementField interpolate_step(const Mesh2& mesh, const CrackSegment& crack);

struct StripAccounting {
  std::size_t n_strip = 0;
  std::size_t n_interior = 0;  // strip triangles inside Ω
  std::size_t n_end = 0;       // strip triangles clipped by ∂Ω
  double interior_surface = 0.0;  // (κ/ε) Σ_interior |T|
  double covered_length = 0.0;    // H¹ of the crack line inside interior triangles
  double covered_target = 0.0;    // κ sin θ0 · covered_length
  double end_correction = 0.0;    // (κ/ε) Σ_strip |T∩Ω| - κ sin θ0 H¹(crack ∩ Ω)
};

StripAccounting strip_accounting(const StripMesh& strip, const DomainPolygon& domain,
                                 const CrackSegment& crack, const AdmissibilityParams& params,
                                 double kappa);

struct RecoveryCertificate {
  double eps = 0.0;
  EnergyBreakdown energy;
  double target_surface = 0.0;  // κ sin θ0 H¹(crack ∩ Ω)
  double target_bulk = 0.0;
  double deviation = 0.0;       // |total - target| / target (absolute when target = 0)
  double end_correction = 0.0;
  std::size_t n_triangles = 0;

  static double deviation_of(double total, double target);
  static std::string csv_header();
  std::string csv_row() const;
};

// One certificate per eps: strip mesh, step interpolant, brittle F_ε.
RecoveryCertificate recovery_certificate(const DomainPolygon& rectangle, const CrackSegment& crack,
                                         const AdmissibilityParams& params, const HookeTensor& a,
                                         double kappa, StripMesh* mesh_out = nullptr,
                                         DisplacementField* u_out = nullptr);
std::vector<RecoveryCertificate> gamma_certificate(const DomainPolygon& rectangle,
                                                   const CrackSegment& crack,
                                                   const std::vector<double>& eps_sweep,
                                                   double omega_factor, double theta0_deg,
                                                   const HookeTensor& a, double kappa);

// Deviations non-increasing along the sweep, up to `abs_tol`.
bool deviations_monotone(const std::vector<RecoveryCertificate>& certs, double abs_tol = 1e-12);

}  // namespace griffith
