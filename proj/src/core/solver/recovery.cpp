#include "solver/recovery.hpp"

#include <algorithm>
#include <cmath>

namespace lamlab::solver {

DerivativeRecovery::DerivativeRecovery(const FieldSolution& sol) : sol_(sol) {
  vertex_mask_.assign(sol.mesh.vertices.size(), 0u);
  for (const auto& t : sol.mesh.triangles)
    for (int i = 0; i < 3; ++i)
      vertex_mask_[static_cast<std::size_t>(t.v[i])] |= 1u << (t.region - 1);
}

RecoveredDerivs DerivativeRecovery::at(int region, int slab, Point2 p,
                                       double radius_cells) const {
  const auto& mesh = sol_.mesh;
  const int nx = mesh.params.nx;
  const int ny = mesh.params.ny;
  const int rows = mesh.rows();
  const double hx = 2.0 / nx;

  int col = std::clamp(static_cast<int>(std::floor((p.x + 1.0) / hx)), 0, nx - 1);
  // local vertical cell size of the region's strip at this column
  const int strip = region - 1;
  const double strip_lo = mesh.vertices[static_cast<std::size_t>(mesh.vid(col, strip * ny))].y;
  const double strip_hi =
      mesh.vertices[static_cast<std::size_t>(mesh.vid(col, (strip + 1) * ny))].y;
  const double hy = std::max((strip_hi - strip_lo) / ny, mesh.params.eta_min);

  const auto& u = sol_.nodal[static_cast<std::size_t>(slab)];

  double rho = radius_cells;
  for (int attempt = 0; attempt < 4; ++attempt, rho *= 2.0) {
    // gather same-region vertices within the scaled radius
    const int wx = static_cast<int>(std::ceil(rho)) + 1;
    const int wy = static_cast<int>(std::ceil(rho)) + 1;
    std::vector<int> stencil;
    std::vector<double> sx, sy, wgt;
    const int row_center = strip * ny +
        std::clamp(static_cast<int>(std::floor((p.y - strip_lo) / hy)), 0, ny - 1);
    for (int c = std::max(0, col - wx); c <= std::min(nx, col + wx + 1); ++c)
      for (int r = std::max(0, row_center - wy); r <= std::min(rows, row_center + wy + 1);
           ++r) {
        const int v = mesh.vid(c, r);
        if (!vertex_in_region(v, region)) continue;
        const Point2 q = mesh.vertices[static_cast<std::size_t>(v)];
        const double dx = (q.x - p.x) / (hx * rho);
        const double dy = (q.y - p.y) / (hy * rho);
        const double d2 = dx * dx + dy * dy;
        if (d2 > 1.0) continue;
        stencil.push_back(v);
        sx.push_back((q.x - p.x) / hx);
        sy.push_back((q.y - p.y) / hy);
        wgt.push_back((1.0 - d2) * (1.0 - d2));
      }
    if (stencil.size() < 6) continue;

    // weighted quadratic fit in scaled coordinates
    double ata[6][6] = {};
    double atb[6] = {};
    for (std::size_t s = 0; s < stencil.size(); ++s) {
      const double basis[6] = {1.0, sx[s], sy[s], sx[s] * sx[s], sx[s] * sy[s], sy[s] * sy[s]};
      const double b = u[static_cast<std::size_t>(stencil[s])];
      for (int i = 0; i < 6; ++i) {
        atb[i] += wgt[s] * basis[i] * b;
        for (int j = 0; j < 6; ++j) ata[i][j] += wgt[s] * basis[i] * basis[j];
      }
    }
    // Cholesky; a singular system falls through to a larger radius
    double chol[6][6] = {};
    bool ok = true;
    for (int i = 0; i < 6 && ok; ++i) {
      for (int j = 0; j <= i; ++j) {
        double sum = ata[i][j];
        for (int k = 0; k < j; ++k) sum -= chol[i][k] * chol[j][k];
        if (i == j) {
          if (sum <= 1e-14) {
            ok = false;
            break;
          }
          chol[i][i] = std::sqrt(sum);
        } else {
          chol[i][j] = sum / chol[j][j];
        }
      }
    }
    if (!ok) continue;
    double z[6], coef[6];
    for (int i = 0; i < 6; ++i) {
      double sum = atb[i];
      for (int k = 0; k < i; ++k) sum -= chol[i][k] * z[k];
      z[i] = sum / chol[i][i];
    }
    for (int i = 5; i >= 0; --i) {
      double sum = z[i];
      for (int k = i + 1; k < 6; ++k) sum -= chol[k][i] * coef[k];
      coef[i] = sum / chol[i][i];
    }

    RecoveredDerivs out;
    out.grad = {coef[1] / hx, coef[2] / hy};
    out.hess = {2.0 * coef[3] / (hx * hx), coef[4] / (hx * hy), 2.0 * coef[5] / (hy * hy)};
    return out;
  }
  throw NumericError("recover_derivatives: insufficient stencil near (" +
                     std::to_string(p.x) + "," + std::to_string(p.y) + ") in region " +
                     std::to_string(region));
}

FluxJumpReport interface_flux_jump(const FieldSolution& sol, const CoefficientModel& coeff,
                                   const ForcingModel& forcing, double t, int slab) {
  FluxJumpReport report;
  const auto& mesh = sol.mesh;
  for (std::size_t i = 0; i < mesh.interface_edges.size(); ++i) {
    const auto& e = mesh.interface_edges[i];
    const Point2 a = mesh.vertices[static_cast<std::size_t>(e.v0)];
    const Point2 b = mesh.vertices[static_cast<std::size_t>(e.v1)];
    FluxJumpRecord rec;
    rec.edge_index = static_cast<int>(i);
    rec.midpoint = {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    const double len = dist(a, b);
    const std::array<double, 2> n{-(b.y - a.y) / len, (b.x - a.x) / len};  // points upward

    auto conormal = [&](int elem, int region) {
      const auto& grad = sol.element_gradient(slab, elem);
      const auto aq = coeff.eval(region, t, rec.midpoint);
      const auto ag = apply_sym(aq, grad);
      const auto f = forcing.value(region, t, rec.midpoint);
      return n[0] * (ag[0] - f[0]) + n[1] * (ag[1] - f[1]);
    };
    rec.lower = conormal(e.elem_lo, e.iface);
    rec.upper = conormal(e.elem_hi, e.iface + 1);
    rec.jump = rec.upper - rec.lower;
    report.sup_abs_jump = std::max(report.sup_abs_jump, std::abs(rec.jump));
    report.edges.push_back(rec);
  }
  return report;
}

}  // namespace lamlab::solver
