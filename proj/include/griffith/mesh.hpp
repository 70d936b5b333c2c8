#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "griffith/point.hpp"

namespace griffith {

using VertexId = std::int32_t;
using TriangleId = std::int32_t;
using EdgeId = std::int32_t;

struct Triangle {
  std::array<VertexId, 3> v;
  friend bool operator==(const Triangle&, const Triangle&) = default;
};

// Undirected edge a < b with up to two incident triangles (t1 = -1 on the
// mesh boundary).
struct Edge {
  VertexId a, b;
  TriangleId t0, t1;
};

struct TriangleMetrics {
  double area;
  std::array<double, 3> edge_lengths;  // edge i joins corner i and i+1
  std::array<double, 3> angles_deg;    // interior angle at corner i
  double min_height;

  double min_angle_deg() const;
  double max_edge() const;
  double min_edge() const;
  double perimeter() const;
};

// Immutable triangle mesh. Triangles are reoriented counterclockwise on
// construction; adjacency is derived once.
class Mesh2 {
 public:
  Mesh2() = default;
  // Throws Error(InvalidArgument) on out-of-range or repeated indices.
  Mesh2(std::vector<Point2> vertices, std::vector<Triangle> triangles);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }

  const Point2& vertex(VertexId i) const { return vertices_[static_cast<std::size_t>(i)]; }
  const Triangle& triangle(TriangleId t) const { return triangles_[static_cast<std::size_t>(t)]; }
  std::array<Point2, 3> corners(TriangleId t) const;

  // Edge ids of triangle t, edge i joining corners i and i+1.
  const std::array<EdgeId, 3>& triangle_edges(TriangleId t) const {
    return tri_edges_[static_cast<std::size_t>(t)];
  }
  // Triangles incident to vertex v.
  std::span<const TriangleId> star(VertexId v) const;
  // -1 when absent.
  EdgeId find_edge(VertexId a, VertexId b) const;
  bool on_boundary(VertexId v) const { return boundary_vertex_[static_cast<std::size_t>(v)]; }

  // Copy with one vertex moved / triangle list replaced.
  Mesh2 with_vertex(VertexId v, const Point2& p) const;
  Mesh2 with_triangles(std::vector<Triangle> triangles) const;

  friend bool operator==(const Mesh2& a, const Mesh2& b) {
    return a.vertices_ == b.vertices_ && a.triangles_ == b.triangles_;
  }

 private:
  void build_adjacency();

  std::vector<Point2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<EdgeId, 3>> tri_edges_;
  std::vector<std::int32_t> star_offsets_;
  std::vector<TriangleId> star_data_;
  std::vector<bool> boundary_vertex_;
  std::vector<std::pair<std::uint64_t, EdgeId>> edge_lookup_;  // sorted
};

// Throws Error(DegenerateTriangle) for zero-area triangles.
TriangleMetrics triangle_metrics(const std::array<Point2, 3>& corners);
TriangleMetrics triangle_metrics(const Mesh2& mesh, TriangleId t);

}  // namespace griffith
