#include "solver/assembly.hpp"

#include <cmath>

namespace lamlab::solver {

std::vector<std::vector<int>> mesh_adjacency(const mesh::StripMesh& mesh) {
  std::vector<std::vector<int>> adj(mesh.vertices.size());
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
    adj[v].push_back(static_cast<int>(v));
  for (const auto& t : mesh.triangles)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) adj[static_cast<std::size_t>(t.v[i])].push_back(t.v[j]);
  return adj;
}

LinearSystemSPD assemble_system(const mesh::StripMesh& mesh, const CoefficientModel& coeff,
                                const ForcingModel& forcing, double t) {
  CsrBuilder builder(mesh_adjacency(mesh));
  std::vector<double> load(mesh.vertices.size(), 0.0);
  const double nu = coeff.nu();

  for (std::size_t e = 0; e < mesh.triangles.size(); ++e) {
    const auto& tri = mesh.triangles[e];
    const Point2 a = mesh.vertices[static_cast<std::size_t>(tri.v[0])];
    const Point2 b = mesh.vertices[static_cast<std::size_t>(tri.v[1])];
    const Point2 c = mesh.vertices[static_cast<std::size_t>(tri.v[2])];
    const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    const double area = 0.5 * det;
    if (!(area > 0.0))
      throw NumericError("assemble_system: degenerate element " + std::to_string(e));

    // constant P1 gradients
    const std::array<std::array<double, 2>, 3> grad{{
        {(b.y - c.y) / det, (c.x - b.x) / det},
        {(c.y - a.y) / det, (a.x - c.x) / det},
        {(a.y - b.y) / det, (b.x - a.x) / det},
    }};

    const std::array<Point2, 3> quad{{{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)},
                                      {0.5 * (b.x + c.x), 0.5 * (b.y + c.y)},
                                      {0.5 * (c.x + a.x), 0.5 * (c.y + a.y)}}};
    const double w = area / 3.0;

    double k_local[3][3] = {};
    double f_local[3] = {};
    for (const Point2& q : quad) {
      const Sym2 aq = coeff.eval(tri.region, t, q);
      for (double entry : aq)
        if (!std::isfinite(entry))
          throw NumericError("assemble_system: non-finite coefficient in element " +
                             std::to_string(e));
      const double lo = eig_min(aq), hi = eig_max(aq);
      if (lo < nu * (1.0 - 1e-12) || hi > (1.0 / nu) * (1.0 + 1e-12))
        throw NumericError("assemble_system: ellipticity violation in element " +
                           std::to_string(e) + " at (" + std::to_string(q.x) + "," +
                           std::to_string(q.y) + ")");
      const auto fq = forcing.value(tri.region, t, q);
      if (!std::isfinite(fq[0]) || !std::isfinite(fq[1]))
        throw NumericError("assemble_system: non-finite forcing in element " +
                           std::to_string(e));
      for (int i = 0; i < 3; ++i) {
        const auto agj = apply_sym(aq, grad[static_cast<std::size_t>(i)]);
        for (int j = 0; j < 3; ++j)
          k_local[j][i] += w * (agj[0] * grad[static_cast<std::size_t>(j)][0] +
                                agj[1] * grad[static_cast<std::size_t>(j)][1]);
        f_local[i] += w * (fq[0] * grad[static_cast<std::size_t>(i)][0] +
                           fq[1] * grad[static_cast<std::size_t>(i)][1]);
      }
    }
    for (int i = 0; i < 3; ++i) {
      load[static_cast<std::size_t>(tri.v[i])] += f_local[i];
      for (int j = 0; j < 3; ++j) builder.add(tri.v[i], tri.v[j], k_local[i][j]);
    }
  }

  LinearSystemSPD sys;
  sys.matrix = builder.take();
  sys.rhs = std::move(load);
  sys.constrained.assign(mesh.vertices.size(), 0);
  sys.constrained_value.assign(mesh.vertices.size(), 0.0);
  for (int v : mesh.dirichlet) sys.constrained[static_cast<std::size_t>(v)] = 1;
  return sys;
}

std::vector<double> lumped_mass(const mesh::StripMesh& mesh) {
  std::vector<double> mass(mesh.vertices.size(), 0.0);
  for (std::size_t e = 0; e < mesh.triangles.size(); ++e) {
    const double area = mesh.signed_area(static_cast<int>(e));
    for (int i = 0; i < 3; ++i)
      mass[static_cast<std::size_t>(mesh.triangles[e].v[i])] += area / 3.0;
  }
  return mass;
}

ReducedSolve solve_constrained(const LinearSystemSPD& sys, std::vector<double>& u,
                               double rel_tol, int max_iter) {
  const int n = sys.matrix.n;
  std::vector<int> to_free(static_cast<std::size_t>(n), -1);
  std::vector<int> free_nodes;
  for (int i = 0; i < n; ++i)
    if (!sys.constrained[static_cast<std::size_t>(i)]) {
      to_free[static_cast<std::size_t>(i)] = static_cast<int>(free_nodes.size());
      free_nodes.push_back(i);
    }
  const int nf = static_cast<int>(free_nodes.size());
  if (nf == 0) {
    u = sys.constrained_value;
    return {};
  }

  // reduced sparsity + rhs with constrained values lifted
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(nf));
  for (int fi = 0; fi < nf; ++fi) {
    const int r = free_nodes[static_cast<std::size_t>(fi)];
    for (int k = sys.matrix.row_ptr[static_cast<std::size_t>(r)];
         k < sys.matrix.row_ptr[static_cast<std::size_t>(r + 1)]; ++k) {
      const int c = sys.matrix.col[static_cast<std::size_t>(k)];
      if (to_free[static_cast<std::size_t>(c)] >= 0)
        adj[static_cast<std::size_t>(fi)].push_back(to_free[static_cast<std::size_t>(c)]);
    }
  }
  CsrBuilder builder(std::move(adj));
  std::vector<double> rhs(static_cast<std::size_t>(nf), 0.0);
  for (int fi = 0; fi < nf; ++fi) {
    const int r = free_nodes[static_cast<std::size_t>(fi)];
    rhs[static_cast<std::size_t>(fi)] = sys.rhs[static_cast<std::size_t>(r)];
    for (int k = sys.matrix.row_ptr[static_cast<std::size_t>(r)];
         k < sys.matrix.row_ptr[static_cast<std::size_t>(r + 1)]; ++k) {
      const int c = sys.matrix.col[static_cast<std::size_t>(k)];
      const double v = sys.matrix.val[static_cast<std::size_t>(k)];
      if (to_free[static_cast<std::size_t>(c)] >= 0)
        builder.add(fi, to_free[static_cast<std::size_t>(c)], v);
      else
        rhs[static_cast<std::size_t>(fi)] -= v * sys.constrained_value[static_cast<std::size_t>(c)];
    }
  }
  const CsrMatrix reduced = builder.take();

  std::vector<double> uf;
  ReducedSolve out;
  out.cg = pcg(reduced, rhs, uf, rel_tol, max_iter);

  u = sys.constrained_value;
  for (int fi = 0; fi < nf; ++fi)
    u[static_cast<std::size_t>(free_nodes[static_cast<std::size_t>(fi)])] =
        uf[static_cast<std::size_t>(fi)];

  // independent residual of the reduced weak form
  std::vector<double> ku;
  reduced.multiply(uf, ku);
  double rn = 0.0, bn = 0.0;
  for (int i = 0; i < nf; ++i) {
    const double ri = rhs[static_cast<std::size_t>(i)] - ku[static_cast<std::size_t>(i)];
    rn += ri * ri;
    bn += rhs[static_cast<std::size_t>(i)] * rhs[static_cast<std::size_t>(i)];
  }
  out.weak_residual = (bn > 0.0) ? std::sqrt(rn / bn) : std::sqrt(rn);
  return out;
}

}  // namespace lamlab::solver
