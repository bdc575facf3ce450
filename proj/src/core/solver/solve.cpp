#include "solver/solve.hpp"

#include <cmath>

namespace lamlab::solver {

namespace {

int vertex_region(const mesh::StripMesh& mesh, int v) {
  // structured layout: row index determines the strip (interface rows
  // belong to the lower strip; the value is only used to evaluate
  // continuous boundary data, so the choice is immaterial)
  const int rows = mesh.rows() + 1;
  const int row = v % rows;
  const int ny = mesh.params.ny;
  const int strip = std::min(row == 0 ? 0 : (row - 1) / ny, mesh.m);
  return strip + 1;
}

void apply_dirichlet(const mesh::StripMesh& mesh, const ForcingModel& forcing, double t,
                     LinearSystemSPD& sys) {
  for (int v : mesh.dirichlet) {
    const Point2 p = mesh.vertices[static_cast<std::size_t>(v)];
    sys.constrained_value[static_cast<std::size_t>(v)] =
        forcing.dirichlet(t, p, vertex_region(mesh, v));
  }
}

std::vector<std::array<double, 2>> element_gradients(const mesh::StripMesh& mesh,
                                                     const std::vector<double>& nodal) {
  std::vector<std::array<double, 2>> g(mesh.triangles.size());
  for (std::size_t e = 0; e < mesh.triangles.size(); ++e)
    g[e] = mesh.p1_gradient(static_cast<int>(e), nodal);
  return g;
}

}  // namespace

double FieldSolution::value(int slab, Point2 p) const {
  const int e = mesh.locate(p.x, p.y);
  if (e < 0) throw NumericError("FieldSolution::value: point outside mesh");
  const auto& t = mesh.triangles[static_cast<std::size_t>(e)];
  const Point2 a = mesh.vertices[static_cast<std::size_t>(t.v[0])];
  const Point2 b = mesh.vertices[static_cast<std::size_t>(t.v[1])];
  const Point2 c = mesh.vertices[static_cast<std::size_t>(t.v[2])];
  const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  const double l1 = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
  const double l2 = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
  const auto& u = nodal[static_cast<std::size_t>(slab)];
  return (1.0 - l1 - l2) * u[static_cast<std::size_t>(t.v[0])] +
         l1 * u[static_cast<std::size_t>(t.v[1])] + l2 * u[static_cast<std::size_t>(t.v[2])];
}

int FieldSolution::slab_at(double t) const {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - t) < 1e-12) return static_cast<int>(i);
  throw NumericError("FieldSolution: no time slab at t = " + std::to_string(t));
}

FieldSolution solve_elliptic(const geom::InterfaceStack& stack, const CoefficientModel& coeff,
                             const ForcingModel& forcing, const mesh::MeshParams& params,
                             mesh::BoundaryKind boundary, double rel_tol) {
  if (coeff.region_count() != stack.count() + 1)
    throw ValidationError("solve_elliptic: coefficient regions must match the stack");
  FieldSolution sol;
  sol.mesh = mesh::build_strip_mesh(stack, params, boundary);
  sol.stats.clamped_cells = sol.mesh.clamped_cells;

  LinearSystemSPD sys = assemble_system(sol.mesh, coeff, forcing, 0.0);
  apply_dirichlet(sol.mesh, forcing, 0.0, sys);
  std::vector<double> u;
  const ReducedSolve rs = solve_constrained(sys, u, rel_tol);
  sol.stats.cg_iterations = rs.cg.iterations;
  sol.stats.cg_rel_residual = rs.cg.rel_residual;
  sol.stats.weak_residual = rs.weak_residual;
  sol.stats.step_iterations = {rs.cg.iterations};

  sol.times = {0.0};
  sol.grads.push_back(element_gradients(sol.mesh, u));
  sol.nodal.push_back(std::move(u));
  return sol;
}

FieldSolution solve_parabolic(const geom::InterfaceStack& stack, const CoefficientModel& coeff,
                              const ForcingModel& forcing, const TimeGrid& grid,
                              const mesh::MeshParams& params, mesh::BoundaryKind boundary,
                              double rel_tol) {
  if (coeff.region_count() != stack.count() + 1)
    throw ValidationError("solve_parabolic: coefficient regions must match the stack");
  if (grid.steps <= 0) throw ValidationError("solve_parabolic: steps must be positive");
  const double dt = (grid.t_end - grid.t_begin) / grid.steps;
  if (!(dt > 0.0)) throw ValidationError("solve_parabolic: time step must be positive");

  FieldSolution sol;
  sol.mesh = mesh::build_strip_mesh(stack, params, boundary);
  sol.stats.clamped_cells = sol.mesh.clamped_cells;
  const std::vector<double> mass = lumped_mass(sol.mesh);

  // initial slab
  std::vector<double> u(sol.mesh.vertices.size(), 0.0);
  for (std::size_t v = 0; v < sol.mesh.vertices.size(); ++v)
    u[v] = forcing.initial(sol.mesh.vertices[v], vertex_region(sol.mesh, static_cast<int>(v)),
                           grid.t_begin);
  sol.times.push_back(grid.t_begin);
  sol.grads.push_back(element_gradients(sol.mesh, u));
  sol.nodal.push_back(u);

  for (int n = 1; n <= grid.steps; ++n) {
    const double t = grid.t_begin + n * dt;
    // the load is time-dependent in general; reassemble per step
    LinearSystemSPD sys = assemble_system(sol.mesh, coeff, forcing, t);
    for (std::size_t v = 0; v < mass.size(); ++v)
      sys.matrix.coeff(static_cast<int>(v), static_cast<int>(v)) += mass[v] / dt;
    for (std::size_t v = 0; v < mass.size(); ++v)
      sys.rhs[v] += mass[v] * u[v] / dt;
    apply_dirichlet(sol.mesh, forcing, t, sys);

    std::vector<double> next;
    const ReducedSolve rs = solve_constrained(sys, next, rel_tol);
    sol.stats.cg_iterations += rs.cg.iterations;
    sol.stats.cg_rel_residual = std::max(sol.stats.cg_rel_residual, rs.cg.rel_residual);
    sol.stats.weak_residual = std::max(sol.stats.weak_residual, rs.weak_residual);
    sol.stats.step_iterations.push_back(rs.cg.iterations);

    u = next;
    sol.times.push_back(t);
    sol.grads.push_back(element_gradients(sol.mesh, u));
    sol.nodal.push_back(std::move(next));
  }
  return sol;
}

}  // namespace lamlab::solver
