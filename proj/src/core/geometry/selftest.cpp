#include "geometry/selftest.hpp"

#include <algorithm>
#include <cmath>

namespace lamlab::geom {

namespace {

double frob(const Jacobian& j) {
  double s = 0.0;
  for (int r = 0; r < j.d; ++r)
    for (int c = 0; c < j.d; ++c) s += j.m[r][c] * j.m[r][c];
  return std::sqrt(s);
}

double frame_ortho_residual(const Frame& f) {
  double worst = 0.0;
  const int d = f.d;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double acc = 0.0;
      for (int k = 0; k < d; ++k) acc += f.lambda[i][k] * f.lambda[j][k];
      worst = std::max(worst, std::abs(acc - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

// Clamp a vertical coordinate strictly inside the domain.
double clamp_xd(double xd) { return std::clamp(xd, -0.999, 0.999); }

}  // namespace

SelftestMetrics selftest_stack(const InterfaceStack& stack, int budget, std::uint64_t seed) {
  if (budget < 1000) throw ValidationError("geometry_selftest: budget must be >= 1000");
  const int d = stack.dimension();
  const int m = stack.count();
  Rng rng(seed);
  SelftestMetrics out;

  auto sample_xp = [&](double* xp, double t01a, double t01b) {
    xp[0] = -0.99 + 1.98 * t01a;
    xp[1] = 0.0;
    if (d == 3) {
      xp[0] *= 0.7;
      xp[1] = (-0.99 + 1.98 * t01b) * 0.7;
    }
  };

  // --- volume samples: stratified grid + per-strip relative rows + random
  std::vector<VecD> points;
  points.reserve(static_cast<std::size_t>(budget));
  {
    const int grid_n = std::max(4, static_cast<int>(std::sqrt(budget / 2.0)));
    for (int i = 0; i < grid_n; ++i)
      for (int l = 0; l < grid_n; ++l) {
        VecD p{d, {}};
        double xp[2];
        sample_xp(xp, (i + 0.5) / grid_n, 0.37);
        p[0] = xp[0];
        if (d == 3) p[1] = xp[1];
        p[d - 1] = clamp_xd(-0.99 + 1.98 * (l + 0.5) / grid_n);
        points.push_back(p);
      }
    // relative rows resolve arbitrarily thin strips
    const int cols = std::max(16, budget / (8 * (m + 1) * 5));
    for (int j = 1; j <= m + 1; ++j)
      for (int c = 0; c < cols; ++c) {
        double xp[2];
        sample_xp(xp, (c + 0.5) / cols, 0.61);
        const double lo = stack.height(j - 1, xp);
        const double hi = stack.height(j, xp);
        if (hi - lo <= 1e-14) continue;
        for (double lam : {0.1, 0.3, 0.5, 0.7, 0.9}) {
          VecD p{d, {}};
          p[0] = xp[0];
          if (d == 3) p[1] = xp[1];
          p[d - 1] = clamp_xd(lo + lam * (hi - lo));
          points.push_back(p);
        }
      }
    while (static_cast<int>(points.size()) < budget) {
      VecD p{d, {}};
      double xp[2];
      sample_xp(xp, rng.next_double(), rng.next_double());
      p[0] = xp[0];
      if (d == 3) p[1] = xp[1];
      p[d - 1] = clamp_xd(rng.uniform(-1.0, 1.0));
      points.push_back(p);
    }
  }

  // --- orthonormality and derivative bounds over the volume samples
  for (const auto& p : points) {
    const Frame f = orthonormal_frame(stack, p);
    out.ortho_residual = std::max(out.ortho_residual, frame_ortho_residual(f));
    const double gap = local_strip_gap(stack, p);
    for (int k = 1; k <= d - 1; ++k) {
      const double dn = frob(tangent_jacobian(stack, k, p));
      const double dr = frob(raw_tangent_jacobian(stack, k, p));
      out.sup_dl = std::max(out.sup_dl, dn);
      out.sup_dl_raw = std::max(out.sup_dl_raw, dr);
      out.sup_dl_sqrt_gap = std::max(out.sup_dl_sqrt_gap, dn * std::sqrt(gap));
      out.sup_dl_raw_sqrt_gap = std::max(out.sup_dl_raw_sqrt_gap, dr * std::sqrt(gap));
    }
  }

  // --- per-interface metrics
  const int cols = std::max(64, budget / 32);
  const std::array<double, 3> offsets{1e-2, 1e-3, 1e-4};
  for (int j = 1; j <= m; ++j) {
    for (int c = 0; c < cols; ++c) {
      double xp[2];
      sample_xp(xp, (c + 0.5) / cols, (c % 7 + 0.5) / 7.0);
      VecD on{d, {}};
      on[0] = xp[0];
      if (d == 3) on[1] = xp[1];
      on[d - 1] = stack.height(j, xp);
      if (std::abs(on[d - 1]) >= 0.999) continue;

      const VecD nj = interface_normal(stack, j, xp);
      const Frame f = orthonormal_frame(stack, on);
      for (int k = 0; k < d - 1; ++k)
        out.tangency_residual = std::max(out.tangency_residual, std::abs(dot(f.tangents[k], nj)));
      for (int i = 0; i < d; ++i)
        out.tangency_residual = std::max(out.tangency_residual, std::abs(f.normal[i] - nj[i]));

      // one-sided limits of D_l l^k
      for (std::size_t oi = 0; oi < offsets.size(); ++oi) {
        const double del = offsets[oi];
        VecD above = on, below = on;
        above[d - 1] = clamp_xd(on[d - 1] + del);
        below[d - 1] = clamp_xd(on[d - 1] - del);
        for (int k = 1; k <= d - 1; ++k) {
          const Frame fa = orthonormal_frame(stack, above);
          const Frame fb = orthonormal_frame(stack, below);
          const FrameDirDeriv da =
              frame_directional_derivative(stack, above, fa.tangents[k - 1]);
          const FrameDirDeriv db =
              frame_directional_derivative(stack, below, fb.tangents[k - 1]);
          double jump = 0.0;
          for (int i = 0; i < d; ++i)
            jump = std::max(jump,
                            std::abs(da.dtangents[k - 1][i] - db.dtangents[k - 1][i]));
          out.dll_jump[oi] = std::max(out.dll_jump[oi], jump);
        }
      }

      // slope-difference bound between adjacent interior interfaces
      if (j >= 2) {
        const InterfaceJet hi = stack.jet(j, xp, 1);
        const InterfaceJet lo = stack.jet(j - 1, xp, 1);
        const double gap = hi.value - lo.value;
        if (gap > 1e-14) {
          double dn = 0.0;
          for (int a = 0; a < d - 1; ++a)
            dn = std::max(dn, std::abs(hi.grad[a] - lo.grad[a]));
          out.slope_ratio = std::max(out.slope_ratio, dn / std::sqrt(gap));
        }
      }
    }
  }

  // --- sampled Hoelder-1/2 constant
  auto holder_pair = [&](const VecD& a, const VecD& b) {
    const double dist = norm(sub(a, b));
    if (dist < 1e-14) return;
    for (int k = 1; k <= d - 1; ++k) {
      const Frame fa = orthonormal_frame(stack, a);
      const Frame fb = orthonormal_frame(stack, b);
      const double diff = norm(sub(fa.tangents[k - 1], fb.tangents[k - 1]));
      out.holder_half = std::max(out.holder_half, diff / std::sqrt(dist));
    }
  };
  for (int j = 1; j <= m; ++j) {
    for (int c = 0; c < cols; ++c) {
      double xp[2];
      sample_xp(xp, (c + 0.5) / cols, 0.29);
      const double hj = stack.height(j, xp);
      const double glo = hj - stack.height(j - 1, xp);
      const double ghi = stack.height(j + 1, xp) - hj;
      VecD base{d, {}};
      base[0] = xp[0];
      if (d == 3) base[1] = xp[1];
      // pairs straddling the interface at gap-proportional separations
      for (double t : {0.25, 0.5, 1.0}) {
        VecD a = base, b = base;
        a[d - 1] = clamp_xd(hj - t * std::max(glo, 1e-12));
        b[d - 1] = clamp_xd(hj + t * std::max(ghi, 1e-12));
        holder_pair(a, b);
      }
      // pairs inside the lower strip
      if (glo > 1e-12) {
        VecD a = base, b = base;
        a[d - 1] = clamp_xd(hj - 0.75 * glo);
        b[d - 1] = clamp_xd(hj - 0.25 * glo);
        holder_pair(a, b);
      }
    }
  }
  const int rand_pairs = budget / 2;
  for (int i = 0; i < rand_pairs; ++i) {
    VecD a{d, {}}, b{d, {}};
    double xpa[2], xpb[2];
    sample_xp(xpa, rng.next_double(), rng.next_double());
    sample_xp(xpb, rng.next_double(), rng.next_double());
    a[0] = xpa[0];
    b[0] = xpb[0];
    if (d == 3) {
      a[1] = xpa[1];
      b[1] = xpb[1];
    }
    a[d - 1] = clamp_xd(rng.uniform(-1.0, 1.0));
    b[d - 1] = clamp_xd(rng.uniform(-1.0, 1.0));
    holder_pair(a, b);
  }

  for (double v : {out.ortho_residual, out.tangency_residual, out.holder_half, out.sup_dl,
                   out.sup_dl_sqrt_gap, out.sup_dl_raw, out.sup_dl_raw_sqrt_gap,
                   out.dll_jump[0], out.dll_jump[1], out.dll_jump[2], out.slope_ratio})
    if (!std::isfinite(v)) throw NumericError("geometry_selftest: non-finite metric");
  return out;
}

SelftestReport geometry_selftest(const std::function<InterfaceStack(double)>& family,
                                 const std::vector<double>& eps_list, int budget,
                                 std::uint64_t seed) {
  if (budget < 1000) throw ValidationError("geometry_selftest: budget must be >= 1000");
  SelftestReport report;
  for (double eps : eps_list) {
    const InterfaceStack stack = family(eps);
    stack.validate();
    SelftestMetrics met = selftest_stack(stack, budget, seed);
    met.eps = eps;
    report.per_eps.push_back(met);
  }
  return report;
}

InterfaceStack make_neck_stack(double eps) {
  std::vector<InterfacePtr> ifaces;
  ifaces.push_back(make_poly1({-eps / 2.0, 0.0, -0.5}));
  ifaces.push_back(make_poly1({eps / 2.0, 0.0, 0.5}));
  return InterfaceStack(2, std::move(ifaces));
}

}  // namespace lamlab::geom
