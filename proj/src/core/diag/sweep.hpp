#pragma once

#include <string>

#include "diag/fields.hpp"

namespace lamlab::diag {

// One gap-sweep row: the nearly-touching stack re-instantiated at eps,
// solved, and probed in the neck window |x'| <= window_factor * sqrt(eps).
struct SweepRow {
  double eps = 0.0;
  double a0 = 1.0;
  double sup_du = 0.0;                   // neck-window sup |Du| (element gradients)
  std::vector<double> sup_d2u_region;    // per region, recovered in the window
  std::vector<double> seminorm_du_region;  // [Du]_{1/2,1} per region in the window
  double phi_exponent = 0.0;             // Campanato decay at the neck center
  int cg_iterations = 0;
  double weak_residual = 0.0;
  std::string error;                     // per-eps failure, sweep continues
};

struct SweepOptions {
  std::vector<double> eps_list{0.1, 0.05, 0.025, 0.0125};
  double a0 = 2.0;           // coefficient of the neck region, inclusions at 1
  mesh::MeshParams mesh{128, 8, 1e-12};
  double window_factor = 2.0;
  std::vector<double> phi_radii{0.2, 0.1, 0.05};
  int budget = 2000;
  std::uint64_t seed = kDefaultSeed;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double p1 = 0.0;  // fitted exponent of sup|Du| vs eps
  double p2 = 0.0;  // fitted exponent of max-region sup|D2u| vs eps
};

// Horizontal background drive u = x on the whole boundary across the
// parabola-neck family; identical mesh policy for every eps.
SweepResult gap_sweep(const SweepOptions& opt);

}  // namespace lamlab::diag
