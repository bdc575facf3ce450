#include "diag/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace lamlab::diag {

std::vector<Point2> sample_ball(Point2 center, double r, int budget, Rng& rng) {
  std::vector<Point2> out;
  out.reserve(static_cast<std::size_t>(budget));
  const int spiral = budget / 2;
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < spiral; ++i) {
    const double rho = r * std::sqrt((i + 0.5) / spiral);
    const double th = golden * i;
    out.push_back({center.x + rho * std::cos(th), center.y + rho * std::sin(th)});
  }
  while (static_cast<int>(out.size()) < budget) {
    const double a = rng.uniform(0.0, 2.0 * M_PI);
    const double rho = r * std::sqrt(rng.next_double());
    out.push_back({center.x + rho * std::cos(a), center.y + rho * std::sin(a)});
  }
  return out;
}

std::vector<SpaceTimeSample> sample_cylinder(double t0, Point2 x0, double r, int budget,
                                             bool parabolic,
                                             const std::vector<double>& slab_times, Rng& rng) {
  std::vector<SpaceTimeSample> out;
  if (!parabolic) {
    for (const Point2& p : sample_ball(x0, r, budget, rng)) out.push_back({t0, p});
    return out;
  }
  const double t_lo = t0 - r * r;
  std::vector<double> times;
  if (!slab_times.empty()) {
    for (double t : slab_times)
      if (t > t_lo - 1e-14 && t <= t0 + 1e-14) times.push_back(t);
  }
  if (times.empty()) {
    const int nt = std::max(2, static_cast<int>(std::round(std::cbrt(budget))));
    for (int i = 0; i < nt; ++i) times.push_back(t_lo + (i + 0.5) * (t0 - t_lo) / nt);
  }
  const int per_time = std::max(4, budget / static_cast<int>(times.size()));
  for (double t : times)
    for (const Point2& p : sample_ball(x0, r, per_time, rng)) out.push_back({t, p});
  return out;
}

}  // namespace lamlab::diag
