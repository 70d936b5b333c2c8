#include "griffith/elasticity.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "griffith/error.hpp"

namespace griffith {

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

double Mat2::frobenius() const {
  return std::sqrt(a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22);
}

std::array<double, 3> SymMatrix2::voigt() const { return {e11, e22, kSqrt2 * e12}; }

SymMatrix2 SymMatrix2::from_voigt(const std::array<double, 3>& v) {
  return {v[0], v[1], v[2] / kSqrt2};
}

SymMatrix2 sym_grad(const Mat2& g) { return {g.a11, g.a22, 0.5 * (g.a12 + g.a21)}; }

HookeTensor::HookeTensor(const std::array<std::array<double, 3>, 3>& matrix) : m_(matrix) {
  double scale = 0.0;
  for (const auto& row : m_)
    for (double v : row) {
      if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "non-finite Hooke entry");
      scale = std::max(scale, std::abs(v));
    }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (std::abs(m_[i][j] - m_[j][i]) > 1e-12 * scale)
        throw Error(ErrorKind::InvalidArgument, "Hooke tensor must be symmetric");
  Eigen::Matrix3d a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = m_[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(a, Eigen::EigenvaluesOnly);
  alpha_ = es.eigenvalues()(0);
  beta_ = es.eigenvalues()(2);
  if (!(alpha_ > 0.0)) throw Error(ErrorKind::InvalidArgument, "Hooke tensor is not elliptic");
}

HookeTensor HookeTensor::identity() { return scaled(1.0); }

HookeTensor HookeTensor::scaled(double c) {
  return HookeTensor({{{c, 0, 0}, {0, c, 0}, {0, 0, c}}});
}

HookeTensor HookeTensor::lame(double lambda, double mu) {
  return HookeTensor({{{2 * mu + lambda, lambda, 0}, {lambda, 2 * mu + lambda, 0}, {0, 0, 2 * mu}}});
}

SymMatrix2 HookeTensor::apply(const SymMatrix2& e) const {
  const auto v = e.voigt();
  std::array<double, 3> r{};
  for (int i = 0; i < 3; ++i) r[i] = m_[i][0] * v[0] + m_[i][1] * v[1] + m_[i][2] * v[2];
  return SymMatrix2::from_voigt(r);
}

double HookeTensor::energy_density(const SymMatrix2& e) const {
  const auto v = e.voigt();
  double s = 0.0;
  for (int i = 0; i < 3; ++i) s += v[i] * (m_[i][0] * v[0] + m_[i][1] * v[1] + m_[i][2] * v[2]);
  return std::max(s, 0.0);
}

DissipationProfile::DissipationProfile(Variant v) : v_(std::move(v)) {
  if (auto* tab = std::get_if<Tabulated>(&v_)) {
    if (tab->t.empty() || tab->t.size() != tab->f.size())
      throw Error(ErrorKind::InvalidArgument, "tabulated profile needs matching knots");
    double prev_t = 0.0, prev_f = 0.0;
    for (std::size_t i = 0; i < tab->t.size(); ++i) {
      if (!(tab->t[i] > prev_t) || tab->f[i] < prev_f)
        throw Error(ErrorKind::InvalidArgument,
                    "tabulated profile must be increasing in t and nondecreasing in f");
      prev_t = tab->t[i];
      prev_f = tab->f[i];
    }
  }
  if (!(kappa() > 0.0)) throw Error(ErrorKind::InvalidArgument, "kappa must be positive");
}

double DissipationProfile::kappa() const {
  return std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Tabulated>)
          return p.f.back();
        else
          return p.kappa;
      },
      v_);
}

double DissipationProfile::operator()(double t) const {
  if (!(t >= 0.0)) throw Error(ErrorKind::InvalidArgument, "dissipation profile needs t >= 0");
  return std::visit(
      [t](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BrittleMin>) {
          return std::min(t, p.kappa);
        } else if constexpr (std::is_same_v<T, SmoothArctan>) {
          return (2.0 * p.kappa / kPi) * std::atan(kPi * t / (2.0 * p.kappa));
        } else {
          if (t >= p.t.back()) return p.f.back();
          auto it = std::upper_bound(p.t.begin(), p.t.end(), t);
          const auto i = static_cast<std::size_t>(it - p.t.begin());
          const double t0 = i == 0 ? 0.0 : p.t[i - 1];
          const double f0 = i == 0 ? 0.0 : p.f[i - 1];
          return f0 + (p.f[i] - f0) * (t - t0) / (p.t[i] - t0);
        }
      },
      v_);
}

SandwichConstant sandwich_constant(const DissipationProfile& f, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw Error(ErrorKind::InvalidArgument, "sandwich delta must lie in (0, 1)");
  auto ok = [&](double t) { return f(t) >= (1.0 - delta) * t; };
  // f <= kappa, so the inequality fails beyond kappa / (1 - delta).
  double hi = 2.0 * f.kappa() / (1.0 - delta);
  double lo = 0.0;
  while (hi - lo > 1e-12 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return {lo, (1.0 - delta) * lo};
}

void check_field(const Mesh2& mesh, const DisplacementField& u) {
  if (u.size() != mesh.num_vertices())
    throw Error(ErrorKind::SizeMismatch, "displacement field length differs from vertex count");
}

Mat2 tri_gradient(const std::array<Point2, 3>& c, const std::array<Vec2, 3>& v) {
  const Vec2 e1 = c[1] - c[0];
  const Vec2 e2 = c[2] - c[0];
  const double det = cross(e1, e2);
  const double scale = std::max(norm(e1), norm(e2));
  if (!(std::abs(det) > 1e-14 * scale * scale))
    throw Error(ErrorKind::DegenerateTriangle, "gradient on degenerate triangle");
  const Vec2 d1 = v[1] - v[0];
  const Vec2 d2 = v[2] - v[0];
  // ∇u = [d1 d2] [e1 e2]^{-1}; inverse rows are (e2.y, -e2.x)/det, (-e1.y, e1.x)/det.
  Mat2 g;
  g.a11 = (d1.x * e2.y - d2.x * e1.y) / det;
  g.a12 = (-d1.x * e2.x + d2.x * e1.x) / det;
  g.a21 = (d1.y * e2.y - d2.y * e1.y) / det;
  g.a22 = (-d1.y * e2.x + d2.y * e1.x) / det;
  return g;
}

Mat2 tri_gradient(const Mesh2& mesh, const DisplacementField& u, TriangleId t) {
  check_field(mesh, u);
  const auto& tri = mesh.triangle(t);
  return tri_gradient(mesh.corners(t), {u[static_cast<std::size_t>(tri.v[0])],
                                        u[static_cast<std::size_t>(tri.v[1])],
                                        u[static_cast<std::size_t>(tri.v[2])]});
}

GradientBound gradient_bound_check(const std::array<Point2, 3>& c, const std::array<Vec2, 3>& v,
                                   double theta0_deg) {
  const Mat2 g = tri_gradient(c, v);
  double slope = 0.0;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    slope = std::max(slope, dist(v[i], v[j]) / dist(c[i], c[j]));
  }
  return {g.frobenius(), std::sqrt(5.0) / std::sin(deg2rad(theta0_deg)) * slope};
}

GradientBound gradient_bound_check(const Mesh2& mesh, const DisplacementField& u, TriangleId t,
                                   double theta0_deg) {
  check_field(mesh, u);
  const auto& tri = mesh.triangle(t);
  return gradient_bound_check(mesh.corners(t),
                              {u[static_cast<std::size_t>(tri.v[0])],
                               u[static_cast<std::size_t>(tri.v[1])],
                               u[static_cast<std::size_t>(tri.v[2])]},
                              theta0_deg);
}

}  // namespace griffith
