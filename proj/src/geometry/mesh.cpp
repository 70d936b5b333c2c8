#include "griffith/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "griffith/error.hpp"

namespace griffith {

namespace {

std::uint64_t edge_key(VertexId a, VertexId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

}  // namespace

double TriangleMetrics::min_angle_deg() const {
  return std::min({angles_deg[0], angles_deg[1], angles_deg[2]});
}
double TriangleMetrics::max_edge() const {
  return std::max({edge_lengths[0], edge_lengths[1], edge_lengths[2]});
}
double TriangleMetrics::min_edge() const {
  return std::min({edge_lengths[0], edge_lengths[1], edge_lengths[2]});
}
double TriangleMetrics::perimeter() const {
  return edge_lengths[0] + edge_lengths[1] + edge_lengths[2];
}

TriangleMetrics triangle_metrics(const std::array<Point2, 3>& c) {
  TriangleMetrics m{};
  const double twice = orient2(c[0], c[1], c[2]);
  m.area = 0.5 * std::abs(twice);
  for (int i = 0; i < 3; ++i) m.edge_lengths[i] = dist(c[i], c[(i + 1) % 3]);
  const double scale = m.max_edge();
  if (!(m.area > 1e-14 * scale * scale) || !std::isfinite(m.area))
    throw Error(ErrorKind::DegenerateTriangle, "degenerate (zero-area) triangle");
  for (int i = 0; i < 3; ++i) {
    const Vec2 u = c[(i + 1) % 3] - c[i];
    const Vec2 w = c[(i + 2) % 3] - c[i];
    // atan2 of |cross| and dot is accurate for small and obtuse angles alike.
    m.angles_deg[i] = rad2deg(std::atan2(std::abs(cross(u, w)), dot(u, w)));
  }
  m.min_height = 2.0 * m.area / scale;
  return m;
}

TriangleMetrics triangle_metrics(const Mesh2& mesh, TriangleId t) {
  if (t < 0 || static_cast<std::size_t>(t) >= mesh.num_triangles())
    throw Error(ErrorKind::InvalidArgument, "triangle index out of range");
  return triangle_metrics(mesh.corners(t));
}

Mesh2::Mesh2(std::vector<Point2> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  const auto nv = static_cast<VertexId>(vertices_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    auto& tri = triangles_[t];
    for (VertexId id : tri.v)
      if (id < 0 || id >= nv)
        throw Error(ErrorKind::InvalidArgument,
                    "triangle " + std::to_string(t) + " references missing vertex");
    if (tri.v[0] == tri.v[1] || tri.v[1] == tri.v[2] || tri.v[0] == tri.v[2])
      throw Error(ErrorKind::InvalidArgument,
                  "triangle " + std::to_string(t) + " repeats a vertex");
    if (orient2(vertex(tri.v[0]), vertex(tri.v[1]), vertex(tri.v[2])) < 0.0)
      std::swap(tri.v[1], tri.v[2]);
  }
  build_adjacency();
}

void Mesh2::build_adjacency() {
  const std::size_t nt = triangles_.size();
  const std::size_t nv = vertices_.size();
  std::vector<std::pair<std::uint64_t, TriangleId>> half;
  half.reserve(3 * nt);
  for (std::size_t t = 0; t < nt; ++t)
    for (int i = 0; i < 3; ++i)
      half.emplace_back(edge_key(triangles_[t].v[i], triangles_[t].v[(i + 1) % 3]),
                        static_cast<TriangleId>(t));
  std::sort(half.begin(), half.end());

  edges_.clear();
  edge_lookup_.clear();
  for (std::size_t i = 0; i < half.size();) {
    std::size_t j = i;
    while (j < half.size() && half[j].first == half[i].first) ++j;
    const auto key = half[i].first;
    Edge e{static_cast<VertexId>(key >> 32), static_cast<VertexId>(key & 0xffffffffu),
           half[i].second, j - i > 1 ? half[i + 1].second : -1};
    edge_lookup_.emplace_back(key, static_cast<EdgeId>(edges_.size()));
    edges_.push_back(e);
    i = j;
  }

  tri_edges_.assign(nt, {-1, -1, -1});
  for (std::size_t t = 0; t < nt; ++t)
    for (int i = 0; i < 3; ++i)
      tri_edges_[t][i] = find_edge(triangles_[t].v[i], triangles_[t].v[(i + 1) % 3]);

  star_offsets_.assign(nv + 1, 0);
  for (const auto& tri : triangles_)
    for (VertexId id : tri.v) ++star_offsets_[static_cast<std::size_t>(id) + 1];
  for (std::size_t i = 0; i < nv; ++i) star_offsets_[i + 1] += star_offsets_[i];
  star_data_.assign(3 * nt, 0);
  std::vector<std::int32_t> fill(star_offsets_.begin(), star_offsets_.end() - 1);
  for (std::size_t t = 0; t < nt; ++t)
    for (VertexId id : triangles_[t].v)
      star_data_[static_cast<std::size_t>(fill[static_cast<std::size_t>(id)]++)] =
          static_cast<TriangleId>(t);

  boundary_vertex_.assign(nv, false);
  for (const auto& e : edges_) {
    if (e.t1 < 0) {
      boundary_vertex_[static_cast<std::size_t>(e.a)] = true;
      boundary_vertex_[static_cast<std::size_t>(e.b)] = true;
    }
  }
}

std::array<Point2, 3> Mesh2::corners(TriangleId t) const {
  const auto& tri = triangle(t);
  return {vertex(tri.v[0]), vertex(tri.v[1]), vertex(tri.v[2])};
}

std::span<const TriangleId> Mesh2::star(VertexId v) const {
  const auto i = static_cast<std::size_t>(v);
  return {star_data_.data() + star_offsets_[i],
          static_cast<std::size_t>(star_offsets_[i + 1] - star_offsets_[i])};
}

EdgeId Mesh2::find_edge(VertexId a, VertexId b) const {
  const auto key = edge_key(a, b);
  auto it = std::lower_bound(edge_lookup_.begin(), edge_lookup_.end(),
                             std::make_pair(key, EdgeId{-1}));
  if (it != edge_lookup_.end() && it->first == key) return it->second;
  return -1;
}

Mesh2 Mesh2::with_vertex(VertexId v, const Point2& p) const {
  Mesh2 copy = *this;
  copy.vertices_[static_cast<std::size_t>(v)] = p;
  return copy;
}

Mesh2 Mesh2::with_triangles(std::vector<Triangle> triangles) const {
  return Mesh2(vertices_, std::move(triangles));
}

}  // namespace griffith
