#pragma once

#include <array>
#include <span>
#include <vector>

#include "griffith/point.hpp"

namespace griffith {

struct BBox {
  double xmin, ymin, xmax, ymax;

  bool overlaps(const BBox& o, double tol = 0.0) const {
    return xmin <= o.xmax + tol && o.xmin <= xmax + tol && ymin <= o.ymax + tol &&
           o.ymin <= ymax + tol;
  }
};

BBox bbox_of(std::span<const Point2> pts);

// Signed area of a closed polygon (shoelace); positive for counterclockwise.
double signed_area(std::span<const Point2> poly);

// Sutherland-Hodgman clip of an arbitrary polygon against a convex,
// counterclockwise clipper. Touching boundaries are kept (closed clip).
std::vector<Point2> clip_convex(std::span<const Point2> subject,
                                std::span<const Point2> convex_ccw);

enum class DomainRole { Inner, Outer };

// Simple counterclockwise polygon; the inner domain or the enlarged outer
// domain carrying the Dirichlet layer.
class DomainPolygon {
 public:
  DomainPolygon() = default;
  // Throws Error(InvalidArgument) unless the polygon is simple with positive area.
  explicit DomainPolygon(std::vector<Point2> ccw_vertices,
                         DomainRole role = DomainRole::Inner);

  static DomainPolygon rectangle(double xmin, double ymin, double xmax, double ymax,
                                 DomainRole role = DomainRole::Inner);

  const std::vector<Point2>& vertices() const { return vertices_; }
  DomainRole role() const { return role_; }
  double area() const { return area_; }
  bool convex() const { return convex_; }
  const BBox& bbox() const { return bbox_; }

  // Closed containment (boundary points count as inside within tol).
  bool contains(const Point2& p, double tol = 1e-12) const;
  bool strictly_contains(const Point2& p, double tol = 1e-12) const;
  double distance_to_boundary(const Point2& p) const;

  // |T ∩ Ω| for a triangle given by its three corners.
  double clipped_area(const std::array<Point2, 3>& tri) const;

  // closure(this) ⊂ interior(outer).
  bool compactly_inside(const DomainPolygon& outer) const;

 private:
  std::vector<Point2> vertices_;
  DomainRole role_ = DomainRole::Inner;
  double area_ = 0.0;
  bool convex_ = false;
  BBox bbox_{0, 0, 0, 0};
};

bool segments_intersect(const Point2& a, const Point2& b, const Point2& c, const Point2& d);
double point_segment_distance(const Point2& p, const Point2& a, const Point2& b);

}  // namespace griffith
