#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "griffith/recovery.hpp"
#include "griffith/slicing.hpp"

namespace griffith {

// Infinitesimal rigid motion r(x) = w (-x2, x1) + c; e(r) = 0.
struct RigidMotion2 {
  double w = 0.0;
  Vec2 c{};

  Vec2 operator()(const Point2& x) const { return Vec2{-x.y, x.x} * w + c; }
  Mat2 gradient() const { return {0.0, -w, w, 0.0}; }
};

struct RigidFit {
  RigidMotion2 motion;
  double residual = 0.0;  // sqrt Σ |v - u - r|² over the component vertices
};

// Least-squares r with v ≈ u + r on the vertices of `component`. Throws
// Error(InvalidArgument) when the component has fewer than two distinct
// vertices (rotation undetermined).
RigidFit fit_rigid(const Mesh2& mesh, const DisplacementField& u, const DisplacementField& v,
                   const std::vector<TriangleId>& component);

// Connected components (through shared edges) of the undamaged triangles.
std::vector<std::vector<TriangleId>> undamaged_components(const Mesh2& mesh,
                                                          const DamageMask& chi);

// ∫_Ω M ∧ |u - v|, adaptive 7-point quadrature per triangle. Cells whose
// image stays at distance >= M from 0 are integrated exactly; the others are
// split until the rule and its refinement agree to `rel_tol` M |cell|.
// Throws Error(SizeMismatch) unless both fields match the mesh.
double distance_in_measure(const Mesh2& mesh, const PiecewiseField& u, const PiecewiseField& v,
                           double cap, const DomainPolygon& domain, double rel_tol = 1e-5);

struct SliceReport {
  Vec2 xi{};
  std::vector<Point2> base_points;  // on the crack line
  std::vector<int> counts;
  std::vector<std::size_t> histogram;  // histogram[k] = lines with count k
  double fraction_ge1 = 0.0;
  double fraction_ge2 = 0.0;
  double fraction_eq2 = 0.0;

  static std::string csv_header() { return "count,lines"; }
};

// For n_lines base points y on the crack (stratified, seeded jitter away
// from lines through damaged-triangle vertices), counts damaged triangles
// whose open interior meets y + R xi.
SliceReport slice_count(const Mesh2& mesh, const DamageMask& chi, const SliceFrame& frame,
                        const CrackSegment& crack, int n_lines, std::uint64_t seed = 1);

struct TwoFamilyReport {
  std::vector<TriangleId> family1;
  std::vector<TriangleId> family2;
  double covered1 = 0.0;  // H¹(Φ(p_ξ(∪ family)) ∩ crack)
  double covered2 = 0.0;
  double crack_length = 0.0;
  std::size_t samples = 0;
  std::size_t samples_without_pair = 0;  // > 0 means a partial cover
};

// Greedy two-family extraction along n_samples crack points in increasing
// order: per point the pair of distinct damaged triangles crossing the line
// with least projected overlap, merged into the families by the induction
// of the lower-bound argument.
TwoFamilyReport two_family_coverage(const Mesh2& mesh, const DamageMask& chi,
                                    const SliceFrame& frame, const CrackSegment& crack,
                                    int n_samples, std::uint64_t seed = 1);

// Uniform double in [0, 1) from the top 53 bits; stable across platforms.
double unit_uniform(std::uint64_t bits);

}  // namespace griffith
