#pragma once

#include <functional>

#include "diag/sampling.hpp"
#include "geometry/frame.hpp"

namespace lamlab::diag {

// min over q of avg_i |v_i - q|^{1/2}, ternary search on [min v, max v]
// to argument tolerance 1e-10 (restarted from the median on a tied
// bracket). Returns the attained objective value.
double half_power_min(const std::vector<double>& values);

// Campanato oscillation functional of a field pair from point samples:
//   Phi = ( min_q avg |g1-q|^{1/2} + min_Q avg |g2-Q|^{1/2} )^2.
double phi_from_samples(const std::vector<std::array<double, 2>>& samples);

// Phi over Q_r^-(z0) with the given pair sampler. Elliptic mode samples
// the spatial ball only.
double campanato_phi(
    const std::function<std::array<double, 2>(double, Point2)>& pair_sampler, double t0,
    Point2 x0, double r, int budget, bool parabolic,
    const std::vector<double>& slab_times, std::uint64_t seed = kDefaultSeed);

struct PhiRecord {
  double r = 0.0;
  double phi = 0.0;
};

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  int used = 0;
  bool dropped_zero = false;
};

// Least-squares slope of log(phi) against log(r); zero records are
// dropped with a flag. Requires >= 3 usable records.
DecayFit decay_fit(const std::vector<PhiRecord>& records);

struct StripProjection {
  std::vector<double> strip_means;   // indexed by strip (1..m+1), NaN if empty
  std::vector<int> strip_counts;
  std::vector<char> strip_skipped;   // no intersection with the window
  double l1_deviation = 0.0;         // avg |f - fbar| over the cylinder
};

// Piecewise-constant projection of a field onto the anchor strips of z0:
// per-strip means over Q_r^- intersected with the half-space slabs normal
// to the anchor frame.
StripProjection piecewise_const_project(
    const std::function<double(double, Point2)>& field, const geom::InterfaceStack& stack,
    double t0, Point2 x0, double r, int budget, bool parabolic,
    const std::vector<double>& slab_times, std::uint64_t seed = kDefaultSeed);

}  // namespace lamlab::diag
