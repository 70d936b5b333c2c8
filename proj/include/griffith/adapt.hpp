#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "griffith/solver.hpp"

namespace griffith {

enum class MoveKind { VertexRelocate, EdgeFlip };

struct MoveProposal {
  MoveKind kind = MoveKind::VertexRelocate;
  VertexId vertex = -1;  // relocate
  Point2 target{};       // relocate
  VertexId edge_a = -1;  // flip: the edge (a, b) to replace
  VertexId edge_b = -1;
  bool admissible = false;
  double energy_delta = std::numeric_limits<double>::quiet_NaN();
};

// n_candidates targets drawn uniformly in the disk of radius step·eps around
// the vertex, each flagged by whether its star stays admissible (and inside
// closure(Ω), so the pinned layer is unchanged). Boundary vertices get no
// admissible proposals. Throws Error(InvalidArgument) for pinned vertices.
std::vector<MoveProposal> propose_vertex_moves(const Mesh2& mesh, const AdmissibilityParams& params,
                                               const DirichletSetup& setup, VertexId vertex,
                                               std::uint64_t seed, int n_candidates,
                                               double step = 0.25);

// Flip of the interior edge (a, b); admissible when the quad is strictly
// convex, both triangles are unpinned and the new pair is admissible.
MoveProposal propose_edge_flip(const Mesh2& mesh, const AdmissibilityParams& params,
                               const DirichletSetup& setup, VertexId a, VertexId b);

// Change of Σ |T∩Ω| ((κ/ε) ∧ A e(u):e(u)) over the triangles the move
// touches, with vertex values kept.
double frozen_energy_delta(const Mesh2& mesh, const DisplacementField& u,
                           const MoveProposal& proposal, const DomainPolygon& domain,
                           const HookeTensor& a, double kappa, double eps);

struct AppliedMove {
  Mesh2 mesh;
  DisplacementField u;
};

// Throws Error(Inadmissible) when the proposal was not admissible.
AppliedMove apply_move(const Mesh2& mesh, const DisplacementField& u,
                       const MoveProposal& proposal);

// Dirichlet setup recomputed for a mesh with moved vertices or flipped edges.
DirichletSetup rebuild_setup(const Mesh2& mesh, const DirichletSetup& old);

struct AdaptOptions {
  int sweeps = 5;
  int n_candidates = 8;
  double step = 0.25;
  std::uint64_t seed = 1;
  bool flips = true;
  bool validate_each = false;  // validate every intermediate mesh
  SolveOptions solve;
};

struct AdaptTraceRow {
  int sweep;
  std::size_t accepted_moves;
  double energy;

  static std::string csv_header() { return "sweep,accepted_moves,energy"; }
  std::string csv_row() const;
};

struct AdaptResult {
  Mesh2 mesh;
  DirichletSetup setup;
  DisplacementField u;
  DamageMask chi;
  EnergyBreakdown energy;
  std::vector<AdaptTraceRow> trace;
  double initial_energy = 0.0;  // alternate_minimize on the input mesh
  std::size_t validated_meshes = 0;
  std::size_t invalid_meshes = 0;
  bool converged = true;  // every inner alternate_minimize converged
};

// Greedy randomized local search. Each sweep visits the free interior
// vertices in seeded random order, accepts the best strictly decreasing
// relocation under the frozen field, then tries edge flips, then re-solves
// with alternate_minimize (warm mask) and keeps the re-solve when it does not
// raise the energy.
AdaptResult optimize_mesh(const Mesh2& mesh, const DirichletSetup& setup,
                          const AdmissibilityParams& params, const HookeTensor& a, double kappa,
                          const AdaptOptions& options);

}  // namespace griffith
