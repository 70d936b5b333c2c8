#pragma once

#include <array>
#include <variant>
#include <vector>

#include "griffith/mesh.hpp"

namespace griffith {

// Row-major 2×2 matrix; for a displacement gradient, row i is ∇u_i.
struct Mat2 {
  double a11 = 0, a12 = 0, a21 = 0, a22 = 0;

  double frobenius() const;
  Vec2 operator*(const Vec2& v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
};

struct SymMatrix2 {
  double e11 = 0, e22 = 0, e12 = 0;

  // e:e = e11² + e22² + 2 e12².
  double norm2() const { return e11 * e11 + e22 * e22 + 2.0 * e12 * e12; }
  double trace() const { return e11 + e22; }
  // Components in the orthonormal basis (e11, e22, √2 e12).
  std::array<double, 3> voigt() const;
  static SymMatrix2 from_voigt(const std::array<double, 3>& v);
};

SymMatrix2 sym_grad(const Mat2& grad);

// Symmetric positive-definite operator on symmetric 2×2 matrices, stored in
// the orthonormal basis above so its extreme eigenvalues are the
// ellipticity constants (alpha, beta).
class HookeTensor {
 public:
  // Throws Error(InvalidArgument) unless symmetric positive definite.
  explicit HookeTensor(const std::array<std::array<double, 3>, 3>& matrix);

  static HookeTensor identity();
  static HookeTensor scaled(double c);
  // A e = 2 mu e + lambda tr(e) Id.
  static HookeTensor lame(double lambda, double mu);

  const std::array<std::array<double, 3>, 3>& matrix() const { return m_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  SymMatrix2 apply(const SymMatrix2& e) const;
  // A e : e.
  double energy_density(const SymMatrix2& e) const;

 private:
  std::array<std::array<double, 3>, 3> m_;
  double alpha_ = 0.0;
  double beta_ = 0.0;
};

inline double hooke_energy_density(const HookeTensor& a, const SymMatrix2& e) {
  return a.energy_density(e);
}

struct BrittleMin {
  double kappa;
};
// (2κ/π) arctan(π t / (2κ)): unit slope at 0 and limit κ.
struct SmoothArctan {
  double kappa;
};
// Piecewise-linear through (0,0) and the given knots, constant past the last
// knot; kappa is the last value. Accepted but not certified.
struct Tabulated {
  std::vector<double> t;
  std::vector<double> f;
};

class DissipationProfile {
 public:
  using Variant = std::variant<BrittleMin, SmoothArctan, Tabulated>;

  // Throws Error(InvalidArgument) on kappa <= 0 or malformed tables.
  explicit DissipationProfile(Variant v);
  static DissipationProfile brittle(double kappa) { return DissipationProfile(BrittleMin{kappa}); }
  static DissipationProfile arctan(double kappa) { return DissipationProfile(SmoothArctan{kappa}); }

  const Variant& variant() const { return v_; }
  bool is_brittle() const { return std::holds_alternative<BrittleMin>(v_); }
  double kappa() const;
  // Throws Error(InvalidArgument) for t < 0.
  double operator()(double t) const;

 private:
  Variant v_;
};

inline double f_eval(const DissipationProfile& f, double t) { return f(t); }

// Constants (t*, K = (1-δ) t*) with f(t) >= min(K, (1-δ) t) for all t >= 0;
// t* is the largest point with f(t*) >= (1-δ) t*, found by bisection.
struct SandwichConstant {
  double t_star;
  double K;
};
SandwichConstant sandwich_constant(const DissipationProfile& f, double delta);

struct DisplacementField {
  std::vector<Vec2> values;

  DisplacementField() = default;
  explicit DisplacementField(std::size_t n) : values(n) {}
  explicit DisplacementField(std::vector<Vec2> v) : values(std::move(v)) {}

  std::size_t size() const { return values.size(); }
  const Vec2& operator[](std::size_t i) const { return values[i]; }
  Vec2& operator[](std::size_t i) { return values[i]; }
  friend bool operator==(const DisplacementField&, const DisplacementField&) = default;
};

// Throws Error(SizeMismatch) when the field does not match the mesh.
void check_field(const Mesh2& mesh, const DisplacementField& u);

// Constant ∇u of the P1 field on triangle t. Throws on degenerate triangles.
Mat2 tri_gradient(const Mesh2& mesh, const DisplacementField& u, TriangleId t);
Mat2 tri_gradient(const std::array<Point2, 3>& corners, const std::array<Vec2, 3>& values);

struct GradientBound {
  double lhs;  // |∇u|_F on T
  double rhs;  // (√5 / sin θ0) · max_edges |u(x_i) - u(x_j)| / |x_i - x_j|
  bool holds() const { return lhs <= rhs * (1.0 + 1e-12) + 1e-300; }
};
GradientBound gradient_bound_check(const Mesh2& mesh, const DisplacementField& u, TriangleId t,
                                   double theta0_deg);
GradientBound gradient_bound_check(const std::array<Point2, 3>& corners,
                                   const std::array<Vec2, 3>& values, double theta0_deg);

}  // namespace griffith
