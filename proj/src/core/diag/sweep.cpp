#include "diag/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "geometry/selftest.hpp"
#include "solver/solve.hpp"

namespace lamlab::diag {

namespace {

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]);
    const double ly = std::log(std::max(ys[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

SweepResult gap_sweep(const SweepOptions& opt) {
  SweepResult result;
  std::vector<double> ok_eps, ok_du, ok_d2u;

  for (double eps : opt.eps_list) {
    SweepRow row;
    row.eps = eps;
    row.a0 = opt.a0;
    try {
      const geom::InterfaceStack stack = geom::make_neck_stack(eps);
      stack.validate(256);
      auto coeff = solver::CoefficientModel::constants({1.0, opt.a0, 1.0});
      auto forcing = solver::ForcingModel::per_region({{}, {}, {}}, solver::Poly3::var_x(),
                                                      solver::Poly3());
      auto sol = solver::solve_elliptic(stack, coeff, forcing, opt.mesh,
                                        mesh::BoundaryKind::All);
      row.cg_iterations = sol.stats.cg_iterations;
      row.weak_residual = sol.stats.weak_residual;

      const double window = opt.window_factor * std::sqrt(eps);

      // sup |Du| over elements whose centroid lies in the column window
      for (std::size_t e = 0; e < sol.mesh.triangles.size(); ++e) {
        const Point2 c = sol.mesh.centroid(static_cast<int>(e));
        if (std::abs(c.x) > window) continue;
        const auto& g = sol.element_gradient(0, static_cast<int>(e));
        row.sup_du = std::max(row.sup_du, std::hypot(g[0], g[1]));
      }

      DerivedFields fields(sol, stack, coeff, forcing);

      // per-region recovered second derivatives and Lipschitz seminorms
      // of the gradient, probed strictly inside each strip
      const int cols = 16;
      for (int region = 1; region <= 3; ++region) {
        double sup_d2 = 0.0;
        for (int c = 0; c < cols; ++c) {
          const double x = -window + 2.0 * window * (c + 0.5) / cols;
          double xq = std::clamp(x, -1.0 + 1e-12, 1.0 - 1e-12);
          const double lo = stack.height(region - 1, &xq);
          const double hi = stack.height(region, &xq);
          for (double lam : {0.3, 0.5, 0.7}) {
            const Point2 p{x, lo + lam * (hi - lo)};
            if (std::abs(p.y) >= 0.95) continue;
            const auto d = fields.recovery().at(region, 0, p);
            sup_d2 = std::max({sup_d2, std::abs(d.hess[0]), std::abs(d.hess[1]),
                               std::abs(d.hess[2])});
          }
        }
        row.sup_d2u_region.push_back(sup_d2);

        FieldSampler grad;
        grad.dim = 2;
        grad.eval = [&fields, region](double t, Point2 p) {
          const auto g = fields.recovered_gradient(region, t, p);
          return std::array<double, 3>{g[0], g[1], 0.0};
        };
        SeminormRequest req;
        req.field = grad;
        req.stack = &stack;
        req.region = region;
        req.margin = 0.05 * eps;
        req.gamma = 1.0;
        req.metric = SeminormMetric::Spatial;
        req.lo = {-window, -0.95};
        req.hi = {window, 0.95};
        req.budget = opt.budget;
        req.seed = opt.seed;
        row.seminorm_du_region.push_back(holder_seminorm(req));
      }

      // Campanato decay of (D_l u, U) at the neck center; a field pair
      // without oscillation (homogeneous medium) yields zero records and
      // no exponent
      std::vector<PhiRecord> recs;
      for (double r : opt.phi_radii) {
        const double phi = campanato_phi(
            [&fields](double t, Point2 p) { return fields.pair(t, p); }, 0.0, Point2{0.0, 0.0},
            r, opt.budget, false, {}, opt.seed);
        recs.push_back({r, phi});
      }
      try {
        row.phi_exponent = decay_fit(recs).slope;
      } catch (const ValidationError&) {
        row.phi_exponent = 0.0;
      }

      ok_eps.push_back(eps);
      ok_du.push_back(row.sup_du);
      ok_d2u.push_back(*std::max_element(row.sup_d2u_region.begin(),
                                         row.sup_d2u_region.end()));
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    result.rows.push_back(std::move(row));
  }

  if (ok_eps.size() >= 2) {
    result.p1 = fit_slope(ok_eps, ok_du);
    result.p2 = fit_slope(ok_eps, ok_d2u);
  }
  return result;
}

}  // namespace lamlab::diag
