#include "diag/fields.hpp"

#include <algorithm>
#include <cmath>

namespace lamlab::diag {

using geom::InterfaceStack;

DerivedFields::DerivedFields(const solver::FieldSolution& sol, const InterfaceStack& stack,
                             const solver::CoefficientModel& coeff,
                             const solver::ForcingModel& forcing)
    : sol_(sol), stack_(stack), coeff_(coeff), forcing_(forcing), recovery_(sol) {}

int DerivedFields::region_at(Point2 p) const {
  const auto inc = geom::classify_point(stack_, VecD{2, {p.x, p.y, 0.0}});
  if (inc.kind == geom::IncidenceKind::OnInterface) return inc.region;  // lower side
  return inc.region;
}

std::array<double, 2> DerivedFields::recovered_gradient(int region, double t, Point2 p) const {
  const int slab = sol_.slabs() == 1 ? 0 : sol_.slab_at(t);
  return recovery_.at(region, slab, p).grad;
}

double DerivedFields::dlu(int k, double t, Point2 p) const {
  const int region = region_at(p);
  const auto frame = geom::orthonormal_frame(stack_, VecD{2, {p.x, p.y, 0.0}});
  const auto grad = recovered_gradient(region, t, p);
  return frame.tangents[static_cast<std::size_t>(k - 1)][0] * grad[0] +
         frame.tangents[static_cast<std::size_t>(k - 1)][1] * grad[1];
}

double DerivedFields::conormal(double t, Point2 p) const {
  const int region = region_at(p);
  const auto frame = geom::orthonormal_frame(stack_, VecD{2, {p.x, p.y, 0.0}});
  const auto grad = recovered_gradient(region, t, p);
  const auto a = coeff_.eval(region, t, p);
  const auto ag = solver::apply_sym(a, grad);
  const auto f = forcing_.value(region, t, p);
  return frame.normal[0] * (ag[0] - f[0]) + frame.normal[1] * (ag[1] - f[1]);
}

std::array<double, 2> DerivedFields::pair(double t, Point2 p) const {
  return {dlu(1, t, p), conormal(t, p)};
}

std::array<double, 2> DerivedFields::pair_jump(int j, double t, double xprime,
                                               double offset) const {
  const double h = stack_.height(j, &xprime);
  const auto n = geom::interface_normal(stack_, j, &xprime);
  const Point2 above{xprime + offset * n[0], h + offset * n[1]};
  const Point2 below{xprime - offset * n[0], h - offset * n[1]};
  const auto pa = pair(t, above);
  const auto pb = pair(t, below);
  return {pa[0] - pb[0], pa[1] - pb[1]};
}

std::array<double, 2> CorrectedFluxData::f1(double t, Point2 p) const {
  const auto& F = *fields;
  const int region = F.region_at(p);
  const auto& stack = F.stack();
  const VecD xv{2, {p.x, p.y, 0.0}};
  const auto frame = geom::orthonormal_frame(stack, xv);
  const auto& l = frame.tangents[0];
  const auto grad_u = F.recovered_gradient(region, t, p);

  // forcing and coefficient derivative data are analytic
  const auto& coeff = F.coeff();
  const auto& forcing = F.forcing();
  const auto jf = forcing.jacobian(region, t, p);  // dfx/dx, dfx/dy, dfy/dx, dfy/dy
  const auto dl = geom::tangent_jacobian(stack, 1, xv);
  const auto a = coeff.eval(region, t, p);
  const auto ax = coeff.eval_dx(region, t, p);
  const auto ay = coeff.eval_dy(region, t, p);

  std::array<double, 2> out{};
  for (int alpha = 0; alpha < 2; ++alpha) {
    // D_l f^alpha
    const double dlf = l[0] * jf[static_cast<std::size_t>(2 * alpha)] +
                       l[1] * jf[static_cast<std::size_t>(2 * alpha + 1)];
    // A^{alpha beta} D_beta l_i D_i u
    double a_dl = 0.0;
    for (int beta = 0; beta < 2; ++beta) {
      const double a_ab = (alpha == beta) ? (alpha == 0 ? a[0] : a[2]) : a[1];
      double dbl_du = 0.0;
      for (int i = 0; i < 2; ++i)
        dbl_du += dl.m[static_cast<std::size_t>(i)][static_cast<std::size_t>(beta)] *
                  grad_u[static_cast<std::size_t>(i)];
      a_dl += a_ab * dbl_du;
    }
    // D_l A^{alpha beta} D_beta u
    double dla_du = 0.0;
    for (int beta = 0; beta < 2; ++beta) {
      const double dax = (alpha == beta) ? (alpha == 0 ? ax[0] : ax[2]) : ax[1];
      const double day = (alpha == beta) ? (alpha == 0 ? ay[0] : ay[2]) : ay[1];
      dla_du += (l[0] * dax + l[1] * day) * grad_u[static_cast<std::size_t>(beta)];
    }
    out[static_cast<std::size_t>(alpha)] = dlf + a_dl - dla_du;
  }
  return out;
}

double CorrectedFluxData::htilde(int j, double t, double xprime) const {
  const auto& F = *fields;
  const auto& stack = F.stack();
  const auto& coeff = F.coeff();
  const auto& forcing = F.forcing();
  const double h = stack.height(j, &xprime);
  const Point2 on{xprime, h};

  // D_l n_j: the interface normal depends on x' alone
  const geom::InterfaceJet jet = stack.jet(j, &xprime, 2);
  const double s = jet.grad[0];
  const double hpp = jet.hess[0][0];
  const double w3 = std::pow(1.0 + s * s, -1.5);
  const std::array<double, 2> dn_dxp{-hpp * w3, -hpp * w3 * s};
  const auto frame = geom::orthonormal_frame(stack, VecD{2, {on.x, on.y, 0.0}});
  const double l1 = frame.tangents[0][0];
  const std::array<double, 2> dln{l1 * dn_dxp[0], l1 * dn_dxp[1]};

  auto side_value = [&](int region, Point2 probe) {
    const auto grad = F.recovered_gradient(region, t, probe);
    const auto a = coeff.eval(region, t, on);
    const auto ag = solver::apply_sym(a, grad);
    const auto f = forcing.value(region, t, on);
    return dln[0] * (-ag[0] + f[0]) + dln[1] * (-ag[1] + f[1]);
  };
  const auto n = geom::interface_normal(stack, j, &xprime);
  const Point2 above{on.x + trace_offset * n[0], on.y + trace_offset * n[1]};
  const Point2 below{on.x - trace_offset * n[0], on.y - trace_offset * n[1]};
  return side_value(j + 1, above) - side_value(j, below);
}

std::array<double, 2> CorrectedFluxData::f3(double t, Point2 p) const {
  const auto& F = *fields;
  const auto& stack = F.stack();
  const auto& coeff = F.coeff();
  const int region = F.region_at(p);
  auto out = f1(t, p);

  // subtract A sum_j D(ltilde_{,j}) Du(t0, P_j x0)
  const auto a = coeff.eval(region, t, p);
  const VecD xv{2, {p.x, p.y, 0.0}};
  for (int j = 1; j <= stack.count() + 1; ++j) {
    const auto dlj = geom::extended_tangent_jacobian(stack, j, 1, xv);
    const auto& du0 = du_anchor[static_cast<std::size_t>(j - 1)];
    for (int alpha = 0; alpha < 2; ++alpha) {
      double acc = 0.0;
      for (int beta = 0; beta < 2; ++beta) {
        const double a_ab = (alpha == beta) ? (alpha == 0 ? a[0] : a[2]) : a[1];
        double dbl_du = 0.0;
        for (int i = 0; i < 2; ++i)
          dbl_du += dlj.m[static_cast<std::size_t>(i)][static_cast<std::size_t>(beta)] *
                    du0[static_cast<std::size_t>(i)];
        acc += a_ab * dbl_du;
      }
      out[static_cast<std::size_t>(alpha)] -= acc;
    }
  }

  // indicator correction: alpha = d picks up sum_j 1_{x_d > h_j} htilde_j / n_j^d
  for (int j = 1; j <= stack.count(); ++j) {
    double xq = std::clamp(p.x, -1.0 + 1e-12, 1.0 - 1e-12);
    if (p.y > stack.height(j, &xq)) {
      const auto nj = geom::interface_normal(stack, j, &xq);
      out[1] += htilde(j, t, xq) / nj[1];
    }
  }
  return out;
}

CorrectedFluxData corrected_flux_data(const DerivedFields& fields, double t0, Point2 x0) {
  CorrectedFluxData data;
  data.fields = &fields;
  data.t0 = t0;
  data.x0 = x0;
  data.j0 = fields.region_at(x0);
  const auto& stack = fields.stack();
  data.anchors = geom::anchor_points(stack, VecD{2, {x0.x, x0.y, 0.0}}, data.j0);
  for (int j = 1; j <= stack.count() + 1; ++j) {
    const VecD& pj = data.anchors[static_cast<std::size_t>(j - 1)];
    // recover the gradient from the region-j side (P_j x0 lies in its closure)
    Point2 probe{pj[0], pj[1]};
    data.du_anchor.push_back(fields.recovered_gradient(j, t0, probe));
  }
  return data;
}

std::vector<RegionNorms> piecewise_norm_table(const DerivedFields& fields,
                                              const NormTableOptions& opt) {
  const auto& stack = fields.stack();
  const auto& sol = fields.solution();
  const bool parabolic = sol.slabs() > 1;
  const int m = stack.count();
  std::vector<RegionNorms> table;

  for (int region = 1; region <= m + 1; ++region) {
    RegionNorms row;
    row.region = region;

    // sup |u| from nodal values of the region's elements
    const int last = sol.slabs() - 1;
    for (const auto& tri : sol.mesh.triangles) {
      if (tri.region != region) continue;
      for (int i = 0; i < 3; ++i)
        row.sup_u = std::max(
            row.sup_u,
            std::abs(sol.nodal[static_cast<std::size_t>(last)][static_cast<std::size_t>(
                tri.v[i])]));
    }

    // probe grid strictly inside the region
    std::vector<Point2> probes;
    const int cols = 24;
    for (int c = 0; c < cols; ++c) {
      const double x = opt.lo.x + (opt.hi.x - opt.lo.x) * (c + 0.5) / cols;
      double xq = std::clamp(x, -1.0 + 1e-12, 1.0 - 1e-12);
      const double lo = stack.height(region - 1, &xq);
      const double hi = stack.height(region, &xq);
      if (hi - lo < 4.0 * opt.margin) continue;
      for (double lam : {0.25, 0.5, 0.75}) {
        const double y = lo + opt.margin + lam * (hi - lo - 2.0 * opt.margin);
        if (y > opt.lo.y && y < opt.hi.y) probes.push_back({x, y});
      }
    }

    const double tlast = sol.times.back();
    FieldSampler grad_sampler;
    grad_sampler.dim = 2;
    grad_sampler.eval = [&fields, region](double t, Point2 p) {
      const auto g = fields.recovered_gradient(region, t, p);
      return std::array<double, 3>{g[0], g[1], 0.0};
    };

    SeminormRequest req;
    req.field = grad_sampler;
    req.stack = &stack;
    req.region = region;
    req.margin = opt.margin;
    req.gamma = opt.mu_prime;
    req.metric = parabolic ? SeminormMetric::Parabolic : SeminormMetric::Spatial;
    req.lo = opt.lo;
    req.hi = opt.hi;
    req.times = parabolic ? std::vector<double>(sol.times.begin() + sol.slabs() / 2,
                                                sol.times.end())
                          : std::vector<double>{tlast};
    req.budget = opt.budget;
    req.seed = opt.seed;
    row.seminorm_du = holder_seminorm(req);

    if (opt.s_level >= 1) {
      for (const Point2& p : probes) {
        const auto d = fields.recovery().at(region, sol.slabs() - 1, p);
        row.sup_d2u = std::max({row.sup_d2u, std::abs(d.hess[0]), std::abs(d.hess[1]),
                                std::abs(d.hess[2])});
      }
    }

    if (parabolic && sol.slabs() >= 3) {
      const double dt = sol.times[1] - sol.times[0];
      const double gamma = 0.5 * (1.0 + opt.delta);
      const double h = dt * std::max(1, (sol.slabs() - 1) / 4);
      row.seminorm_du_time = time_quotient_sup(grad_sampler, gamma, h, tlast, probes);
    }
    table.push_back(row);
  }
  return table;
}

}  // namespace lamlab::diag
