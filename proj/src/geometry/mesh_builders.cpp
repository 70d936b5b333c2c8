#include "griffith/mesh_builders.hpp"

#include <cmath>

#include "griffith/error.hpp"

namespace griffith {

Mesh2 square_grid(double x0, double y0, double h, int nx, int ny, Diagonal pattern) {
  if (nx < 1 || ny < 1 || !(h > 0.0))
    throw Error(ErrorKind::InvalidArgument, "square_grid needs nx, ny >= 1 and h > 0");
  std::vector<Point2> verts;
  verts.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) verts.push_back({x0 + i * h, y0 + j * h});
  auto id = [&](int i, int j) { return static_cast<VertexId>(j * (nx + 1) + i); };
  std::vector<Triangle> tris;
  tris.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const VertexId a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      const bool forward = pattern == Diagonal::Forward || (i + j) % 2 == 0;
      if (forward) {
        tris.push_back({{a, b, c}});
        tris.push_back({{a, c, d}});
      } else {
        tris.push_back({{a, b, d}});
        tris.push_back({{b, c, d}});
      }
    }
  }
  return Mesh2(std::move(verts), std::move(tris));
}

Mesh2 transformed(const Mesh2& mesh, double angle_rad, const Vec2& shift) {
  const double c = std::cos(angle_rad);
  const double s = std::sin(angle_rad);
  std::vector<Point2> verts;
  verts.reserve(mesh.num_vertices());
  for (const auto& p : mesh.vertices())
    verts.push_back(Point2{c * p.x - s * p.y, s * p.x + c * p.y} + shift);
  return Mesh2(std::move(verts), mesh.triangles());
}

}  // namespace griffith
