#pragma once

#include "solver/assembly.hpp"

namespace lamlab::solver {

struct TimeGrid {
  double t_begin = -1.0;
  double t_end = 0.0;
  int steps = 0;
};

struct SolveStats {
  int cg_iterations = 0;          // total over steps
  double cg_rel_residual = 0.0;   // worst step
  double weak_residual = 0.0;     // worst step, recomputed
  int clamped_cells = 0;
  std::vector<int> step_iterations;
};

struct FieldSolution {
  mesh::StripMesh mesh;
  std::vector<double> times;                              // {0} in elliptic mode
  std::vector<std::vector<double>> nodal;                 // per time slab
  std::vector<std::vector<std::array<double, 2>>> grads;  // per slab, per element
  SolveStats stats;

  int slabs() const { return static_cast<int>(times.size()); }
  // P1 interpolant at (x, y); throws outside the mesh
  double value(int slab, Point2 p) const;
  const std::array<double, 2>& element_gradient(int slab, int e) const {
    return grads[static_cast<std::size_t>(slab)][static_cast<std::size_t>(e)];
  }
  // index of the slab at time t (exact grid match within 1e-12)
  int slab_at(double t) const;
};

FieldSolution solve_elliptic(const geom::InterfaceStack& stack, const CoefficientModel& coeff,
                             const ForcingModel& forcing, const mesh::MeshParams& params,
                             mesh::BoundaryKind boundary = mesh::BoundaryKind::TopBottom,
                             double rel_tol = 1e-12);

// Backward Euler with a lumped mass matrix; every step certified like the
// elliptic solve.
FieldSolution solve_parabolic(const geom::InterfaceStack& stack, const CoefficientModel& coeff,
                              const ForcingModel& forcing, const TimeGrid& grid,
                              const mesh::MeshParams& params,
                              mesh::BoundaryKind boundary = mesh::BoundaryKind::TopBottom,
                              double rel_tol = 1e-12);

}  // namespace lamlab::solver
