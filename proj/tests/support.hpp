#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "griffith/mesh.hpp"
#include "griffith/mesh_builders.hpp"
#include "griffith/point.hpp"

namespace testing_support {

using namespace griffith;

// Uniform reals from a fixed-seed engine.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

// Random triangle whose angles are all >= min_angle_deg and whose shortest
// edge is `shortest`, by rejection on random angle triples.
std::array<Point2, 3> random_triangle(Rng& rng, double min_angle_deg, double shortest);

// Square grid with each interior vertex displaced uniformly within
// `jitter`·h in both coordinates.
Mesh2 jittered_grid(Rng& rng, double x0, double y0, double h, int nx, int ny, double jitter);

}  // namespace testing_support
