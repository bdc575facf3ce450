#include "geometry/frame.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace lamlab::geom {

namespace {

constexpr double kTouchTol = 1e-14;

// First-order dual number; seeds a directional derivative through the
// Gram-Schmidt algebra so that frame derivatives stay exact.
struct Dual {
  double a = 0.0;  // value
  double b = 0.0;  // derivative
};
inline Dual operator+(Dual x, Dual y) { return {x.a + y.a, x.b + y.b}; }
inline Dual operator-(Dual x, Dual y) { return {x.a - y.a, x.b - y.b}; }
inline Dual operator*(Dual x, Dual y) { return {x.a * y.a, x.a * y.b + x.b * y.a}; }
inline Dual operator/(Dual x, Dual y) {
  return {x.a / y.a, (x.b * y.a - x.a * y.b) / (y.a * y.a)};
}
inline Dual dual_const(double c) { return {c, 0.0}; }
inline Dual dsqrt(Dual x) {
  const double r = std::sqrt(x.a);
  return {r, 0.5 * x.b / r};
}
inline double dsqrt(double x) { return std::sqrt(x); }
inline double dual_const_like(double c, double) { return c; }
inline Dual dual_const_like(double c, Dual) { return dual_const(c); }

// Which formula of the interpolation field applies at x:
//   strip j in 1..m  -> affine blend of D_k h_{j-1} and D_k h_j (h_0 = -1),
//   above h_m        -> constant slope of h_m.
struct StripLoc {
  bool top = false;  // x^d >= h_m (or m == 0)
  int strip = 1;     // valid when !top
  double lo = -1.0, hi = 1.0, gap = 2.0;
};

StripLoc locate_strip(const InterfaceStack& stack, const VecD& x) {
  StripLoc loc;
  const int m = stack.count();
  const double* xp = x.v.data();
  const double xd = x[x.d - 1];
  if (m == 0) {
    loc.top = true;
    return loc;
  }
  const double hm = stack.height(m, xp);
  if (xd >= hm) {
    loc.top = true;
    loc.lo = hm;
    loc.hi = 1.0;
    loc.gap = 1.0 - hm;
    return loc;
  }
  int j = m;
  for (int i = 1; i <= m; ++i) {
    if (xd < stack.height(i, xp)) {
      j = i;
      break;
    }
  }
  loc.strip = j;
  loc.lo = stack.height(j - 1, xp);
  loc.hi = stack.height(j, xp);
  loc.gap = loc.hi - loc.lo;
  return loc;
}

// Generic Gram-Schmidt + normal construction from the d-th components of
// the raw tangents. T is double or Dual.
template <class T>
void orthonormal_from_raw(int d, const T* s, T tang[2][3], T nrm[3]) {
  T raw[2][3];
  for (int k = 0; k < d - 1; ++k)
    for (int i = 0; i < d; ++i)
      raw[k][i] = (i == k) ? dual_const_like(1.0, s[0])
                           : (i == d - 1 ? s[k] : dual_const_like(0.0, s[0]));

  auto dotv = [d](const T* a, const T* b) {
    T acc = dual_const_like(0.0, a[0]);
    for (int i = 0; i < d; ++i) acc = acc + a[i] * b[i];
    return acc;
  };

  for (int k = 0; k < d - 1; ++k) {
    T work[3];
    for (int i = 0; i < d; ++i) work[i] = raw[k][i];
    for (int p = 0; p < k; ++p) {
      T c = dotv(tang[p], raw[k]);
      for (int i = 0; i < d; ++i) work[i] = work[i] - c * tang[p][i];
    }
    T len = dsqrt(dotv(work, work));
    for (int i = 0; i < d; ++i) tang[k][i] = work[i] / len;
  }

  T q = dual_const_like(1.0, s[0]);
  for (int k = 0; k < d - 1; ++k) q = q + s[k] * s[k];
  T invn = dual_const_like(1.0, s[0]) / dsqrt(q);
  for (int k = 0; k < d - 1; ++k) nrm[k] = (dual_const_like(0.0, s[0]) - s[k]) * invn;
  nrm[d - 1] = invn;
}

// Value of the interpolated d-component for tangent k at x, and optionally
// its gradient (grad != nullptr). Throws on a vanishing gap when the
// gradient is requested; returns the common slope for the value alone.
double raw_slope(const InterfaceStack& stack, int k, const VecD& x, double* grad) {
  const int d = stack.dimension();
  const int m = stack.count();
  const double* xp = x.v.data();
  const double xd = x[d - 1];
  if (grad) std::fill(grad, grad + 3, 0.0);
  if (m == 0) return 0.0;

  const StripLoc loc = locate_strip(stack, x);
  if (loc.top) {
    const InterfaceJet jm = stack.jet(m, xp, grad ? 2 : 1);
    if (grad)
      for (int a = 0; a < d - 1; ++a) grad[a] = jm.hess[k][a];
    return jm.grad[k];
  }

  const int j = loc.strip;
  const InterfaceJet hi = stack.jet(j, xp, grad ? 2 : 1);
  const InterfaceJet lo = stack.jet(j - 1, xp, grad ? 2 : 1);
  const double gap = hi.value - lo.value;
  if (gap <= kTouchTol) {
    if (grad)
      throw NumericError("raw_tangent_jacobian: vanishing gap in strip " + std::to_string(j));
    return hi.grad[k];  // common slope at a touching column
  }
  const double lam = (xd - lo.value) / gap;
  const double value = lam * hi.grad[k] + (1.0 - lam) * lo.grad[k];
  if (grad) {
    // D_a lambda = (-D_a h_{j-1} - lam * D_a(h_j - h_{j-1})) / gap
    for (int a = 0; a < d - 1; ++a) {
      const double dgap = hi.grad[a] - lo.grad[a];
      const double dlam = (-lo.grad[a] - lam * dgap) / gap;
      grad[a] = dlam * (hi.grad[k] - lo.grad[k]) + lam * hi.hess[k][a] +
                (1.0 - lam) * lo.hess[k][a];
    }
    grad[d - 1] = (hi.grad[k] - lo.grad[k]) / gap;
  }
  return value;
}

}  // namespace

VecD interface_normal(const InterfaceStack& stack, int j, const double* xp) {
  const int d = stack.dimension();
  const InterfaceJet jet = stack.jet(j, xp, 1);
  double q = 1.0;
  for (int a = 0; a < d - 1; ++a) q += jet.grad[a] * jet.grad[a];
  const double s = 1.0 / std::sqrt(q);
  VecD n{d, {}};
  for (int a = 0; a < d - 1; ++a) n[a] = -jet.grad[a] * s;
  n[d - 1] = s;
  return n;
}

VecD raw_tangent(const InterfaceStack& stack, int k, const VecD& x) {
  const int d = stack.dimension();
  if (k < 1 || k > d - 1) throw ValidationError("raw_tangent: k out of range");
  VecD out{d, {}};
  out[k - 1] = 1.0;
  out[d - 1] = raw_slope(stack, k - 1, x, nullptr);
  return out;
}

Jacobian raw_tangent_jacobian(const InterfaceStack& stack, int k, const VecD& x) {
  const int d = stack.dimension();
  if (k < 1 || k > d - 1) throw ValidationError("raw_tangent_jacobian: k out of range");
  double grad[3];
  (void)raw_slope(stack, k - 1, x, grad);
  Jacobian jac;
  jac.d = d;
  for (int a = 0; a < d; ++a) jac.m[d - 1][a] = grad[a];
  return jac;
}

double local_strip_gap(const InterfaceStack& stack, const VecD& x) {
  return locate_strip(stack, x).gap;
}

Frame orthonormal_frame(const InterfaceStack& stack, const VecD& x) {
  const int d = stack.dimension();
  Frame f;
  f.d = d;
  const RegionIncidence inc = classify_point(stack, x);
  f.region = inc.region;

  double s[2] = {0.0, 0.0};
  for (int k = 0; k < d - 1; ++k) s[k] = raw_slope(stack, k, x, nullptr);
  double tang[2][3] = {};
  double nrm[3] = {};
  orthonormal_from_raw(d, s, tang, nrm);
  for (int k = 0; k < d - 1; ++k) {
    f.tangents[k].d = d;
    for (int i = 0; i < d; ++i) f.tangents[k][i] = tang[k][i];
  }
  f.normal.d = d;
  for (int i = 0; i < d; ++i) f.normal[i] = nrm[i];
  for (int k = 0; k < d - 1; ++k)
    for (int i = 0; i < d; ++i) f.lambda[k][i] = tang[k][i];
  for (int i = 0; i < d; ++i) f.lambda[d - 1][i] = nrm[i];
  return f;
}

FrameDirDeriv frame_directional_derivative(const InterfaceStack& stack, const VecD& x,
                                           const VecD& v) {
  const int d = stack.dimension();
  Dual s[2];
  for (int k = 0; k < d - 1; ++k) {
    double grad[3];
    const double val = raw_slope(stack, k, x, grad);
    double dir = 0.0;
    for (int a = 0; a < d; ++a) dir += grad[a] * v[a];
    s[k] = {val, dir};
  }
  Dual tang[2][3];
  Dual nrm[3];
  orthonormal_from_raw(d, s, tang, nrm);
  FrameDirDeriv out;
  for (int k = 0; k < d - 1; ++k) {
    out.dtangents[k].d = d;
    for (int i = 0; i < d; ++i) out.dtangents[k][i] = tang[k][i].b;
  }
  out.dnormal.d = d;
  for (int i = 0; i < d; ++i) out.dnormal[i] = nrm[i].b;
  return out;
}

Jacobian tangent_jacobian(const InterfaceStack& stack, int k, const VecD& x) {
  const int d = stack.dimension();
  if (k < 1 || k > d - 1) throw ValidationError("tangent_jacobian: k out of range");
  Jacobian jac;
  jac.d = d;
  for (int a = 0; a < d; ++a) {
    VecD e{d, {}};
    e[a] = 1.0;
    const FrameDirDeriv dd = frame_directional_derivative(stack, x, e);
    for (int i = 0; i < d; ++i) jac.m[i][a] = dd.dtangents[k - 1][i];
  }
  return jac;
}

namespace {

// Golden-section minimization on [a, b]; f assumed unimodal there.
template <class F>
double golden_min(F&& f, double a, double b, double tol) {
  const double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

Projection nearest_projection(const InterfaceStack& stack, int j, const VecD& x,
                              double bracket_halfwidth) {
  const int d = stack.dimension();
  if (j < 0 || j > stack.count() + 1)
    throw ValidationError("nearest_projection: interface index out of range");

  auto dist2_at = [&](const double* sp) {
    const double h = stack.height(j, sp);
    double acc = (x[d - 1] - h) * (x[d - 1] - h);
    for (int a = 0; a < d - 1; ++a) acc += (x[a] - sp[a]) * (x[a] - sp[a]);
    return acc;
  };

  // Newton polish on the stationarity equation; golden-section alone
  // bottoms out near sqrt(machine epsilon) in the argument.
  auto newton_polish = [&](double* sp) {
    for (int it = 0; it < 12; ++it) {
      const InterfaceJet jet = stack.jet(j, sp, 2);
      const double dh = jet.value - x[d - 1];
      double g[2], H[2][2];
      for (int a = 0; a < d - 1; ++a) {
        g[a] = 2.0 * (sp[a] - x[a]) + 2.0 * dh * jet.grad[a];
        for (int b = 0; b < d - 1; ++b)
          H[a][b] = 2.0 * (a == b ? 1.0 : 0.0) + 2.0 * jet.grad[a] * jet.grad[b] +
                    2.0 * dh * jet.hess[a][b];
      }
      double step[2] = {0.0, 0.0};
      if (d == 2) {
        if (std::abs(H[0][0]) < 1e-12) break;
        step[0] = g[0] / H[0][0];
      } else {
        const double det = H[0][0] * H[1][1] - H[0][1] * H[1][0];
        if (std::abs(det) < 1e-12) break;
        step[0] = (g[0] * H[1][1] - g[1] * H[0][1]) / det;
        step[1] = (g[1] * H[0][0] - g[0] * H[1][0]) / det;
      }
      const double move = std::max(std::abs(step[0]), std::abs(step[1]));
      if (move > bracket_halfwidth * 0.25) break;
      double cand[2] = {sp[0] - step[0], sp[1] - step[1]};
      if (dist2_at(cand) > dist2_at(sp) + 1e-30) break;
      sp[0] = cand[0];
      sp[1] = cand[1];
      if (move < 1e-15) break;
    }
  };

  double s[2] = {x[0], d == 3 ? x[1] : 0.0};
  const double hw = bracket_halfwidth;

  if (d == 2) {
    // coarse scan, then golden-section within the best cell
    const int n = 64;
    int best = 0;
    double bestv = 1e300;
    for (int i = 0; i <= n; ++i) {
      const double sp = x[0] - hw + 2.0 * hw * i / n;
      const double v = dist2_at(&sp);
      if (v < bestv) {
        bestv = v;
        best = i;
      }
    }
    const double a = x[0] - hw + 2.0 * hw * std::max(0, best - 1) / n;
    const double b = x[0] - hw + 2.0 * hw * std::min(n, best + 1) / n;
    s[0] = golden_min([&](double sp) { return dist2_at(&sp); }, a, b, 1e-12);
    newton_polish(s);
    if (std::abs(s[0] - (x[0] - hw)) < 1e-9 || std::abs(s[0] - (x[0] + hw)) < 1e-9)
      throw NumericError("nearest_projection: minimum on bracket edge; widen the bracket");
  } else {
    // cyclic coordinate descent with golden-section line searches
    const int n = 16;
    double bestv = 1e300;
    double bests[2] = {s[0], s[1]};
    for (int i = 0; i <= n; ++i)
      for (int l = 0; l <= n; ++l) {
        double sp[2] = {x[0] - hw + 2.0 * hw * i / n, x[1] - hw + 2.0 * hw * l / n};
        const double v = dist2_at(sp);
        if (v < bestv) {
          bestv = v;
          bests[0] = sp[0];
          bests[1] = sp[1];
        }
      }
    s[0] = bests[0];
    s[1] = bests[1];
    for (int sweep = 0; sweep < 60; ++sweep) {
      double moved = 0.0;
      for (int c = 0; c < 2; ++c) {
        const double lo = x[c] - hw, hi = x[c] + hw;
        const double prev = s[c];
        s[c] = golden_min(
            [&](double t) {
              double sp[2] = {s[0], s[1]};
              sp[c] = t;
              return dist2_at(sp);
            },
            lo, hi, 1e-13);
        moved = std::max(moved, std::abs(s[c] - prev));
      }
      if (moved < 1e-12) break;
    }
    newton_polish(s);
    for (int c = 0; c < 2; ++c)
      if (std::abs(s[c] - (x[c] - hw)) < 1e-9 || std::abs(s[c] - (x[c] + hw)) < 1e-9)
        throw NumericError("nearest_projection: minimum on bracket edge; widen the bracket");
  }

  Projection out;
  out.sprime = {s[0], s[1]};
  out.point.d = d;
  for (int a = 0; a < d - 1; ++a) out.point[a] = s[a];
  out.point[d - 1] = stack.height(j, s);
  out.distance = std::sqrt(dist2_at(s));
  return out;
}

Frame frame_at_anchor(const InterfaceStack& stack, const VecD& x0) {
  const int d = stack.dimension();
  const RegionIncidence inc = classify_point(stack, x0);
  const int j0 = inc.region;

  // Candidate bounding graphs of D_{j0}: prefer interior interfaces over
  // sentinels, the upper one on ties.
  struct Cand {
    int j;
    Projection proj;
  };
  std::vector<Cand> cands;
  for (int j : {j0, j0 - 1}) {
    if (j < 0 || j > stack.count() + 1) continue;
    cands.push_back({j, nearest_projection(stack, j, x0)});
  }
  if (cands.empty()) throw NumericError("frame_at_anchor: no bounding interface");
  const Cand* best = &cands[0];
  for (const auto& c : cands) {
    const bool c_interior = c.j >= 1 && c.j <= stack.count();
    const bool b_interior = best->j >= 1 && best->j <= stack.count();
    if (c.proj.distance < best->proj.distance - 1e-14 ||
        (std::abs(c.proj.distance - best->proj.distance) <= 1e-14 && c_interior && !b_interior))
      best = &c;
  }

  Frame f = orthonormal_frame(stack, best->proj.point);
  f.region = j0;
  // On Gamma_j the frame normal equals the interface normal; recompute it
  // from the graph formula to anchor exactly on n_{y0}.
  if (best->j >= 1 && best->j <= stack.count()) {
    const VecD nj = interface_normal(stack, best->j, best->proj.sprime.data());
    f.normal = nj;
    for (int i = 0; i < d; ++i) f.lambda[d - 1][i] = nj[i];
  }
  return f;
}

std::vector<VecD> anchor_points(const InterfaceStack& stack, const VecD& x0, int j0) {
  const int d = stack.dimension();
  const int m = stack.count();
  if (j0 < 1 || j0 > m + 1) throw ValidationError("anchor_points: region index out of range");
  std::vector<VecD> out;
  out.reserve(static_cast<std::size_t>(m + 1));
  for (int j = 1; j <= m + 1; ++j) {
    if (j == j0) {
      out.push_back(x0);
      continue;
    }
    VecD p = x0;
    const int iface = (j < j0) ? j : j - 1;
    p[d - 1] = stack.height(iface, x0.v.data());
    out.push_back(p);
  }
  return out;
}

namespace {

// Interpolation slope of the donor strip without its case restriction.
double extended_slope(const InterfaceStack& stack, int donor, int k, const VecD& x,
                      double* grad) {
  const int d = stack.dimension();
  const int m = stack.count();
  const double* xp = x.v.data();
  if (donor < 1 || donor > m + 1)
    throw ValidationError("extended_tangent: donor region out of range");
  if (grad) std::fill(grad, grad + 3, 0.0);
  if (m == 0) return 0.0;

  if (donor == m + 1) {
    const InterfaceJet jm = stack.jet(m, xp, grad ? 2 : 1);
    if (grad)
      for (int a = 0; a < d - 1; ++a) grad[a] = jm.hess[k][a];
    return jm.grad[k];
  }

  const InterfaceJet hi = stack.jet(donor, xp, grad ? 2 : 1);
  const InterfaceJet lo = stack.jet(donor - 1, xp, grad ? 2 : 1);
  const double gap = hi.value - lo.value;
  if (gap <= kTouchTol)
    throw NumericError("extended_tangent: donor strip " + std::to_string(donor) +
                       " has vanishing gap at the query column");
  const double lam = (x[d - 1] - lo.value) / gap;
  const double value = lam * hi.grad[k] + (1.0 - lam) * lo.grad[k];
  if (grad) {
    for (int a = 0; a < d - 1; ++a) {
      const double dgap = hi.grad[a] - lo.grad[a];
      const double dlam = (-lo.grad[a] - lam * dgap) / gap;
      grad[a] = dlam * (hi.grad[k] - lo.grad[k]) + lam * hi.hess[k][a] +
                (1.0 - lam) * lo.hess[k][a];
    }
    grad[d - 1] = (hi.grad[k] - lo.grad[k]) / gap;
  }
  return value;
}

}  // namespace

VecD extended_raw_tangent(const InterfaceStack& stack, int donor, int k, const VecD& x) {
  const int d = stack.dimension();
  if (k < 1 || k > d - 1) throw ValidationError("extended_tangent: k out of range");
  VecD out{d, {}};
  out[k - 1] = 1.0;
  out[d - 1] = extended_slope(stack, donor, k - 1, x, nullptr);
  return out;
}

VecD extended_tangent(const InterfaceStack& stack, int donor, int k, const VecD& x) {
  const int d = stack.dimension();
  if (k < 1 || k > d - 1) throw ValidationError("extended_tangent: k out of range");
  double s[2] = {0.0, 0.0};
  for (int kk = 0; kk < d - 1; ++kk) s[kk] = extended_slope(stack, donor, kk, x, nullptr);
  double tang[2][3] = {};
  double nrm[3] = {};
  orthonormal_from_raw(d, s, tang, nrm);
  VecD out{d, {}};
  for (int i = 0; i < d; ++i) out[i] = tang[k - 1][i];
  return out;
}

Jacobian extended_tangent_jacobian(const InterfaceStack& stack, int donor, int k,
                                   const VecD& x) {
  const int d = stack.dimension();
  if (k < 1 || k > d - 1) throw ValidationError("extended_tangent_jacobian: k out of range");
  Jacobian jac;
  jac.d = d;
  for (int a = 0; a < d; ++a) {
    VecD e{d, {}};
    e[a] = 1.0;
    Dual s[2];
    for (int kk = 0; kk < d - 1; ++kk) {
      double grad[3];
      const double val = extended_slope(stack, donor, kk, x, grad);
      double dir = 0.0;
      for (int b = 0; b < d; ++b) dir += grad[b] * e[b];
      s[kk] = {val, dir};
    }
    Dual tang[2][3];
    Dual nrm[3];
    orthonormal_from_raw(d, s, tang, nrm);
    for (int i = 0; i < d; ++i) jac.m[i][a] = tang[k - 1][i].b;
  }
  return jac;
}

}  // namespace lamlab::geom
