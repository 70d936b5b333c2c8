#pragma once

#include <cmath>

namespace griffith {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  Point2& operator+=(const Point2& o) { x += o.x; y += o.y; return *this; }
  Point2& operator-=(const Point2& o) { x -= o.x; y -= o.y; return *this; }
  Point2& operator*=(double s) { x *= s; y *= s; return *this; }

  friend Point2 operator+(Point2 a, const Point2& b) { return a += b; }
  friend Point2 operator-(Point2 a, const Point2& b) { return a -= b; }
  friend Point2 operator*(Point2 a, double s) { return a *= s; }
  friend Point2 operator*(double s, Point2 a) { return a *= s; }
  friend Point2 operator-(const Point2& a) { return {-a.x, -a.y}; }
  friend bool operator==(const Point2&, const Point2&) = default;
};

using Vec2 = Point2;

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
inline double dist(const Point2& a, const Point2& b) { return norm(a - b); }
inline Vec2 perp(const Vec2& a) { return {-a.y, a.x}; }

// Twice the signed area of (a, b, c); positive when counterclockwise.
inline double orient2(const Point2& a, const Point2& b, const Point2& c) {
  return cross(b - a, c - a);
}

inline bool is_finite(const Point2& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

constexpr double kPi = 3.14159265358979323846;
inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

// Largest admissible minimum angle, 45 deg - arctan(1/2), in degrees.
inline double max_theta0_deg() { return 45.0 - rad2deg(std::atan(0.5)); }

}  // namespace griffith
