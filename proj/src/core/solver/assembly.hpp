#pragma once

#include "mesh/strip_mesh.hpp"
#include "solver/models.hpp"
#include "solver/sparse.hpp"

namespace lamlab::solver {

// Full stiffness/load pair plus the Dirichlet partition. Positive
// definiteness on the free block is certified by CG convergence.
struct LinearSystemSPD {
  CsrMatrix matrix;
  std::vector<double> rhs;
  std::vector<char> constrained;
  std::vector<double> constrained_value;
};

std::vector<std::vector<int>> mesh_adjacency(const mesh::StripMesh& mesh);

// P1 stiffness with the 3-point edge-midpoint rule (degree 2), load
// int f . grad(phi). Checks the declared ellipticity bounds at every
// quadrature point and rejects non-finite data.
LinearSystemSPD assemble_system(const mesh::StripMesh& mesh, const CoefficientModel& coeff,
                                const ForcingModel& forcing, double t);

// Row-sum lumped P1 mass diagonal.
std::vector<double> lumped_mass(const mesh::StripMesh& mesh);

struct ReducedSolve {
  CgResult cg;
  double weak_residual = 0.0;  // recomputed ||(b - K u)|_free|| / ||b_free||
};

// Eliminates constrained unknowns, runs preconditioned CG on the free
// block, writes the full solution (constrained values included) to `u`.
ReducedSolve solve_constrained(const LinearSystemSPD& sys, std::vector<double>& u,
                               double rel_tol, int max_iter = 0);

}  // namespace lamlab::solver
