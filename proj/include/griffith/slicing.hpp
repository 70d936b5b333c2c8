#pragma once

#include <array>
#include <span>
#include <vector>

#include "griffith/point.hpp"

namespace griffith {

// Jump normal nu and slicing direction xi, both unit vectors with nu·xi != 0.
class SliceFrame {
 public:
  // Throws Error(InvalidArgument) when not unit (1e-12) or nu·xi == 0.
  SliceFrame(Vec2 nu, Vec2 xi);

  const Vec2& nu() const { return nu_; }
  const Vec2& xi() const { return xi_; }
  // The cone condition nu·xi >= 1/2 used by the lower-bound slicing.
  bool in_slicing_cone() const { return dot(nu_, xi_) >= 0.5; }

 private:
  Vec2 nu_, xi_;
};

struct Section {
  bool empty = true;
  double lo = 0.0;
  double hi = 0.0;
  // True iff the line meets the open triangle.
  bool interior_nonempty = false;
};

// {s : y + s xi ∈ T} for the closed triangle T.
Section section(const std::array<Point2, 3>& tri, const Point2& y, const Vec2& xi);

// Coordinate of z on Π_xi = xi⊥, measured along perp(xi).
double project_p_xi(const Point2& z, const Vec2& xi);

struct Interval {
  double lo, hi;
  double length() const { return hi - lo; }
};

// p_xi of a point set (triangle, segment) as an interval on Π_xi.
Interval project_p_xi(std::span<const Point2> pts, const Vec2& xi);

// Projection onto Π_nu along xi: z - ((nu·z)/(nu·xi)) xi.
Point2 project_Phi(const Point2& z, const SliceFrame& frame);

// Affine variant for a hyperplane through `origin` instead of 0.
Point2 project_Phi(const Point2& z, const SliceFrame& frame, const Point2& origin);

}  // namespace griffith
