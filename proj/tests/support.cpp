#include "support.hpp"

#include <algorithm>
#include <cmath>

namespace testing_support {

std::array<Point2, 3> random_triangle(Rng& rng, double min_angle_deg, double shortest) {
  for (;;) {
    const double a = rng.uniform(min_angle_deg, 180.0 - 2.0 * min_angle_deg);
    const double b = rng.uniform(min_angle_deg, 180.0 - a - min_angle_deg);
    const double c = 180.0 - a - b;
    if (c < min_angle_deg) continue;
    // Law of sines: edge opposite each angle.
    const double sa = std::sin(deg2rad(a)), sb = std::sin(deg2rad(b)), sc = std::sin(deg2rad(c));
    const double scale = shortest / std::min({sa, sb, sc});
    const double ab = sc * scale;  // side between corners A and B, opposite C
    const double ac = sb * scale;
    const Point2 p0{0.0, 0.0};
    const Point2 p1{ab, 0.0};
    const Point2 p2{ac * std::cos(deg2rad(a)), ac * std::sin(deg2rad(a))};
    const double rot = rng.uniform(0.0, 2.0 * kPi);
    const Point2 shift{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    auto tr = [&](const Point2& p) {
      return Point2{std::cos(rot) * p.x - std::sin(rot) * p.y + shift.x,
                    std::sin(rot) * p.x + std::cos(rot) * p.y + shift.y};
    };
    return {tr(p0), tr(p1), tr(p2)};
  }
}

Mesh2 jittered_grid(Rng& rng, double x0, double y0, double h, int nx, int ny, double jitter) {
  const Mesh2 base = square_grid(x0, y0, h, nx, ny, Diagonal::Alternating);
  std::vector<Point2> pts = base.vertices();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (base.on_boundary(static_cast<VertexId>(i))) continue;
    pts[i].x += rng.uniform(-jitter, jitter) * h;
    pts[i].y += rng.uniform(-jitter, jitter) * h;
  }
  return Mesh2(std::move(pts), base.triangles());
}

}  // namespace testing_support
