#pragma once

#include <functional>
#include <vector>

#include "geometry/frame.hpp"

namespace lamlab::geom {

// Sampled frame-field regularity metrics for one stack.
struct SelftestMetrics {
  double eps = 0.0;  // gap parameter the stack was instantiated with
  double ortho_residual = 0.0;     // sup |<l_i,l_j>-delta_ij|, |<l_k,n>|, |Lambda Lambda^T - I|
  double tangency_residual = 0.0;  // sup on-interface |<l^k, n_j>| and |n - n_j|
  double holder_half = 0.0;        // sampled sup |l(x1)-l(x2)| / |x1-x2|^{1/2}
  double sup_dl = 0.0;             // sup |D l^k| (normalized field)
  double sup_dl_sqrt_gap = 0.0;    // sup |D l^k| * gap^{1/2}
  double sup_dl_raw = 0.0;
  double sup_dl_raw_sqrt_gap = 0.0;
  std::array<double, 3> dll_jump{0.0, 0.0, 0.0};  // |[D_l l^k]| at offsets 1e-2,1e-3,1e-4
  double slope_ratio = 0.0;        // sup |Dh_j - Dh_{j-1}| / gap^{1/2}, interior pairs
};

struct SelftestReport {
  std::vector<SelftestMetrics> per_eps;
  std::array<double, 3> probe_offsets{1e-2, 1e-3, 1e-4};
};

SelftestMetrics selftest_stack(const InterfaceStack& stack, int budget,
                               std::uint64_t seed = kDefaultSeed);

// Re-instantiates the stack for each gap parameter and reports metrics.
// Requires budget >= 1000.
SelftestReport geometry_selftest(const std::function<InterfaceStack(double)>& family,
                                 const std::vector<double>& eps_list, int budget,
                                 std::uint64_t seed = kDefaultSeed);

// The canonical nearly-touching family: h1 = -eps/2 - x'^2/2,
// h2 = eps/2 + x'^2/2 (gap eps + x'^2).
InterfaceStack make_neck_stack(double eps);

}  // namespace lamlab::geom
