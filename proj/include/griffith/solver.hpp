#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "griffith/energy.hpp"

namespace griffith {

// Boundary displacement w with closed-form gradient. Each component is a
// bivariate polynomial of degree <= 3 with coefficients on the monomials
// 1, x, y, x², xy, y², x³, x²y, xy², y³.
class BoundaryDatum {
 public:
  using Coeffs = std::array<double, 10>;

  BoundaryDatum() = default;
  BoundaryDatum(const Coeffs& wx, const Coeffs& wy) : wx_(wx), wy_(wy) {}

  // w(x) = M x + c.
  static BoundaryDatum affine(const Mat2& m, const Vec2& c);
  static BoundaryDatum zero() { return {}; }
  // Vertical opening centred on y = y0: w = (0, amplitude · s((y - y0) / width))
  // with s(t) = 1.5 t - 0.5 t³, monotone from -1 to 1 on |t| <= 1. Choose
  // width so the whole outer domain has |t| <= 1.
  static BoundaryDatum cubic_opening(double amplitude, double y0, double width);

  Vec2 operator()(const Point2& p) const;
  Mat2 gradient(const Point2& p) const;
  bool is_affine() const;
  const Coeffs& wx() const { return wx_; }
  const Coeffs& wy() const { return wy_; }

  // sup |∇w|_F over a grid of the box; exact for affine data.
  double sampled_gradient_sup(const BBox& box, int n = 65) const;

 private:
  Coeffs wx_{};
  Coeffs wy_{};
};

// Dirichlet layer: triangles meeting Ω' \ closure(Ω) are pinned to the
// Lagrange interpolant of the datum.
struct DirichletSetup {
  DomainPolygon inner;
  std::optional<DomainPolygon> outer;
  BoundaryDatum datum;
  double gradient_bound = 0.0;  // declared ‖∇w‖_∞ over Ω'
  std::vector<bool> pinned_triangle;
  std::vector<bool> pinned_vertex;
  DisplacementField pinned_values;  // w(x_i) at every vertex (used where pinned)

  // Throws Error(InvalidArgument) unless closure(inner) ⊂ interior(outer).
  static DirichletSetup from_domains(const Mesh2& mesh, const DomainPolygon& inner,
                                     const DomainPolygon& outer, const BoundaryDatum& datum);
  // Explicit pinned vertices; pinned triangles are those with all corners pinned.
  static DirichletSetup from_pinned_vertices(const Mesh2& mesh, const DomainPolygon& inner,
                                             const std::vector<VertexId>& pinned,
                                             const BoundaryDatum& datum);

  std::size_t num_pinned_vertices() const;
  // κ / (β ‖∇w‖²): below this eps pinned data never reach the damage threshold.
  double eps0(double kappa, const HookeTensor& a) const;
};

// Lagrange interpolation: vertex i ↦ w(x_i).
DisplacementField interpolate_datum(const Mesh2& mesh, const BoundaryDatum& datum);

struct SolveOptions {
  double cg_tolerance = 1e-10;
  int cg_max_iters = 20000;
  std::optional<double> eta;  // floating regularization; default 1e-8 α
  int max_alternations = 200;
  double stagnation_tolerance = 1e-12;
};

struct SolveResult {
  DisplacementField u;
  // Free vertices not held by the Dirichlet data through undamaged
  // triangles, grouped by connectivity; solved with the η regularizer.
  std::vector<std::vector<VertexId>> floating_components;
  double residual = 0.0;
  int iterations = 0;
};

// Minimizes Σ (1-χ_T) |T∩Ω| A e(u):e(u) (+ η |u|² on floating vertices)
// with pinned vertices fixed. Throws SolveError when CG does not converge.
SolveResult elastic_solve(const Mesh2& mesh, const DirichletSetup& setup, const DamageMask& chi,
                          const HookeTensor& a, const SolveOptions& options,
                          const DisplacementField* initial_guess = nullptr);

struct TraceRow {
  int iter;
  EnergyBreakdown energy;
  std::size_t n_damaged;
  double residual;

  static std::string csv_header();
  std::string csv_row() const;
};

struct AlternationResult {
  DisplacementField u;
  DamageMask chi;
  EnergyBreakdown energy;
  std::vector<TraceRow> trace;
  // Energies after every half step: u-step, χ-step, u-step, ...
  std::vector<double> half_steps;
  bool converged = false;
  int iterations = 0;
  std::size_t max_pinned_damaged = 0;
  std::vector<std::vector<VertexId>> floating_components;
  std::vector<std::string> warnings;
};

// Alternates the u-step (elastic_solve) and the χ-step (threshold) from
// `initial_mask` (all undamaged by default) until the mask is stable or the
// energy stagnates.
AlternationResult alternate_minimize(const Mesh2& mesh, const DirichletSetup& setup,
                                     const HookeTensor& a, double kappa,
                                     const AdmissibilityParams& params,
                                     const SolveOptions& options,
                                     const DamageMask* initial_mask = nullptr);

// Exhaustive minimum of the two-field energy over all 2^n masks (n <= 20),
// with one u-solve per mask.
struct EnumerationResult {
  DamageMask chi;
  DisplacementField u;
  double energy;
};
EnumerationResult global_minimum_by_enumeration(const Mesh2& mesh, const DirichletSetup& setup,
                                                const HookeTensor& a, double kappa,
                                                const AdmissibilityParams& params,
                                                const SolveOptions& options);

// ∫_Ω (κ/ε) ∧ A e(u):e(u) when u matches the pinned data (1e-9), +∞ otherwise.
double energy_G_eps(const Mesh2& mesh, const DisplacementField& u, const DirichletSetup& setup,
                    const HookeTensor& a, double kappa, const AdmissibilityParams& params);

}  // namespace griffith
