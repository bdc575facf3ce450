#pragma once

#include <vector>

#include "geometry/interface.hpp"

namespace lamlab::geom {

// Orthonormal frame at a point: d-1 unit tangents, unit normal, and the
// orthogonal matrix Lambda whose rows are (l^1, ..., l^{d-1}, n).
struct Frame {
  int d = 2;
  int region = 1;
  std::array<VecD, 2> tangents{};
  VecD normal{};
  std::array<std::array<double, 3>, 3> lambda{};
};

struct Jacobian {
  int d = 2;
  // m[i][j] = d(component i)/d(x_j)
  std::array<std::array<double, 3>, 3> m{};
};

// Unit normal of the single interface Gamma_j, last component positive.
VecD interface_normal(const InterfaceStack& stack, int j, const double* xp);

// The piecewise-affine tangential field l^{k,0}: component k is 1, slot d
// interpolates the interface slopes strip by strip (constant above h_m).
// At a column where the strip gap vanishes the common slope is returned.
VecD raw_tangent(const InterfaceStack& stack, int k, const VecD& x);

// Exact spatial Jacobian of l^{k,0}. Fails on a vanishing strip gap.
Jacobian raw_tangent_jacobian(const InterfaceStack& stack, int k, const VecD& x);

// Gap of the strip containing x (sentinels included).
double local_strip_gap(const InterfaceStack& stack, const VecD& x);

Frame orthonormal_frame(const InterfaceStack& stack, const VecD& x);

// Directional derivatives along v of the normalized tangents and normal,
// propagated exactly through the Gram-Schmidt algebra.
struct FrameDirDeriv {
  std::array<VecD, 2> dtangents{};
  VecD dnormal{};
};
FrameDirDeriv frame_directional_derivative(const InterfaceStack& stack, const VecD& x,
                                           const VecD& v);

// Full Jacobian of the normalized tangent l^k.
Jacobian tangent_jacobian(const InterfaceStack& stack, int k, const VecD& x);

struct Projection {
  VecD point{};      // (y0', h_j(y0'))
  double distance = 0.0;
  std::array<double, 2> sprime{};  // y0'
};

// Closest point on Gamma_j within a bracket of the given half-width around
// x'. Golden-section search (d=2) or cyclic coordinate descent (d=3) to
// argument tolerance 1e-12; errors out if the minimum sits on the bracket
// edge.
Projection nearest_projection(const InterfaceStack& stack, int j, const VecD& x,
                              double bracket_halfwidth = 0.5);

// Frame of the coordinate system associated with x0: tangents tau_k =
// l^k(y0) and normal at the nearest boundary point y0 of the region of x0.
Frame frame_at_anchor(const InterfaceStack& stack, const VecD& x0);

// P_1 x0, ..., P_{m+1} x0 (index j0 slot holds x0 itself).
std::vector<VecD> anchor_points(const InterfaceStack& stack, const VecD& x0, int j0);

// Smooth extension of l^k|_{D_donor}: the donor strip's interpolation
// formula evaluated without its case restriction, re-orthonormalized.
VecD extended_raw_tangent(const InterfaceStack& stack, int donor, int k, const VecD& x);
VecD extended_tangent(const InterfaceStack& stack, int donor, int k, const VecD& x);
Jacobian extended_tangent_jacobian(const InterfaceStack& stack, int donor, int k,
                                   const VecD& x);

}  // namespace lamlab::geom
