#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "griffith/mesh.hpp"

namespace griffith {

// Node/element text format: a count line, then "index x y" (nodes) or
// "index v1 v2 v3" (elements), 0-based, whitespace separated, '#' comments.
// Coordinates are written with 17 significant digits so a write/read cycle
// reproduces them exactly.
void write_nodes(std::ostream& os, std::span<const Point2> vertices);
void write_elements(std::ostream& os, std::span<const Triangle> triangles);
std::vector<Point2> read_nodes(std::istream& is);
std::vector<Triangle> read_elements(std::istream& is);

void write_mesh(const Mesh2& mesh, const std::filesystem::path& node_file,
                const std::filesystem::path& ele_file);
// Throws Error(Io) for unreadable, malformed or truncated files.
Mesh2 read_mesh(const std::filesystem::path& node_file, const std::filesystem::path& ele_file);

struct VtkFields {
  std::optional<std::vector<Point2>> displacement;  // per vertex
  std::optional<std::vector<double>> damage;        // per triangle
  std::optional<std::vector<double>> energy_density;  // per triangle
};

// Legacy ASCII VTK, UNSTRUCTURED_GRID with triangle cells (type 5).
void write_vtk(std::ostream& os, const Mesh2& mesh, const VtkFields& fields = {},
               const std::string& title = "griffith mesh");
void write_vtk(const std::filesystem::path& file, const Mesh2& mesh,
               const VtkFields& fields = {}, const std::string& title = "griffith mesh");

}  // namespace griffith
