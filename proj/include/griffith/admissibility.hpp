#pragma once

#include <string>
#include <vector>

#include "griffith/mesh.hpp"
#include "griffith/polygon.hpp"

namespace griffith {

// Parameters of the admissible class: edge lengths in [eps, omega] and all
// angles >= theta0.
struct AdmissibilityParams {
  double eps = 0.0;
  double omega = 0.0;
  double theta0_deg = 0.0;

  // Throws Error(InvalidArgument) unless 0 < theta0 <= 45° - arctan(1/2),
  // eps > 0 and omega >= 6 eps.
  void check() const;
  double sin_theta0() const;
  static AdmissibilityParams with_factor(double eps, double omega_factor, double theta0_deg);
};

// Relative tolerance of length/angle comparisons so that extremal triangles
// (edge = eps, angle = theta0) validate.
inline constexpr double kAdmissibilityRelTol = 1e-9;

enum class ViolationKind {
  EdgeTooShort,
  EdgeTooLong,
  AngleTooSmall,
  NonConforming,
  NotCovered,
  Degenerate,
};

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  int id;        // edge id for edge checks, triangle id otherwise (-1 for coverage)
  int other;     // second triangle for NonConforming, else -1
  double value;  // offending length / angle (deg) / uncovered area
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool admissible() const { return violations.empty(); }
  std::size_t count(ViolationKind kind) const;
};

ValidationReport validate_admissible(const Mesh2& mesh, const AdmissibilityParams& params,
                                     const DomainPolygon& domain);

// Per-triangle constraints only (edges, angles); used for local checks.
bool triangle_admissible(const std::array<Point2, 3>& corners, const AdmissibilityParams& params);

enum class PairRelation { Disjoint, SharedVertex, SharedEdge, Violation };

// Geometric classification of the intersection of two closed mesh triangles.
PairRelation classify_pair(const Mesh2& mesh, TriangleId a, TriangleId b);

// Pairs (a < b) that violate conformity, found with a uniform-grid broad phase.
std::vector<std::pair<TriangleId, TriangleId>> nonconforming_pairs(const Mesh2& mesh);

// Σ_T |T ∩ Ω| with compensated summation.
double covered_area(const Mesh2& mesh, const DomainPolygon& domain);

}  // namespace griffith
