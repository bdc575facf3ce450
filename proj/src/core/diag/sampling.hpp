#pragma once

#include <vector>

#include "common.hpp"

namespace lamlab::diag {

struct SpaceTimeSample {
  double t = 0.0;
  Point2 x{};
};

// Deterministic ball filling: golden-angle spiral for the first half of
// the budget, seeded uniform for the rest.
std::vector<Point2> sample_ball(Point2 center, double r, int budget, Rng& rng);

// Q_r^-(t0, x0) sampling; in elliptic mode the time stays at t0. When
// slab_times is nonempty, sampled times snap to the nearest grid time in
// (t0 - r^2, t0].
std::vector<SpaceTimeSample> sample_cylinder(double t0, Point2 x0, double r, int budget,
                                             bool parabolic,
                                             const std::vector<double>& slab_times, Rng& rng);

}  // namespace lamlab::diag
