#pragma once

#include <cstdint>

#include "griffith/mesh.hpp"

namespace griffith {

enum class Diagonal { Forward, Alternating };

// nx × ny squares over [x0, x0 + nx h] × [y0, y0 + ny h], each split into two
// right isosceles triangles.
Mesh2 square_grid(double x0, double y0, double h, int nx, int ny,
                  Diagonal pattern = Diagonal::Alternating);

// Rigid transform x ↦ R(angle) x + shift applied to every vertex.
Mesh2 transformed(const Mesh2& mesh, double angle_rad, const Vec2& shift);

}  // namespace griffith
