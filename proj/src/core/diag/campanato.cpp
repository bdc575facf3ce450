#include "diag/campanato.hpp"

#include <algorithm>
#include <cmath>

namespace lamlab::diag {

namespace {

double half_power_objective(const std::vector<double>& values, double q) {
  double acc = 0.0;
  for (double v : values) acc += std::sqrt(std::abs(v - q));
  return acc / static_cast<double>(values.size());
}

// Range-relative tolerance keeps the search scale-equivariant, so the
// degree-1 homogeneity of Phi holds down to rounding.
double ternary_min(const std::vector<double>& values, double lo, double hi) {
  const double tol = 1e-10 * (hi - lo);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (half_power_objective(values, m1) <= half_power_objective(values, m2))
      hi = m2;
    else
      lo = m1;
  }
  return half_power_objective(values, 0.5 * (lo + hi));
}

}  // namespace

double half_power_min(const std::vector<double>& values) {
  if (values.empty()) throw ValidationError("half_power_min: empty sample set");
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  double lo = *mn, hi = *mx;
  if (hi - lo < 1e-15) return 0.0;
  double best = ternary_min(values, lo, hi);
  const double flo = half_power_objective(values, lo);
  const double fhi = half_power_objective(values, hi);
  if (std::abs(flo - fhi) < 1e-14 * (flo + fhi)) {
    // tied bracket endpoints: restart around the median
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const double med = sorted[sorted.size() / 2];
    const double w = 0.25 * (hi - lo);
    best = std::min(best, ternary_min(values, med - w, med + w));
  }
  return best;
}

double phi_from_samples(const std::vector<std::array<double, 2>>& samples) {
  if (samples.empty()) throw ValidationError("phi_from_samples: empty sample set");
  std::vector<double> g1, g2;
  g1.reserve(samples.size());
  g2.reserve(samples.size());
  for (const auto& s : samples) {
    g1.push_back(s[0]);
    g2.push_back(s[1]);
  }
  const double t = half_power_min(g1) + half_power_min(g2);
  return t * t;
}

double campanato_phi(
    const std::function<std::array<double, 2>(double, Point2)>& pair_sampler, double t0,
    Point2 x0, double r, int budget, bool parabolic, const std::vector<double>& slab_times,
    std::uint64_t seed) {
  Rng rng(seed);
  const auto pts = sample_cylinder(t0, x0, r, budget, parabolic, slab_times, rng);
  std::vector<std::array<double, 2>> samples;
  samples.reserve(pts.size());
  for (const auto& z : pts) samples.push_back(pair_sampler(z.t, z.x));
  return phi_from_samples(samples);
}

DecayFit decay_fit(const std::vector<PhiRecord>& records) {
  DecayFit fit;
  std::vector<PhiRecord> usable;
  for (const auto& rec : records) {
    if (rec.phi > 0.0)
      usable.push_back(rec);
    else
      fit.dropped_zero = true;
  }
  if (usable.size() < 3)
    throw ValidationError("decay_fit: need at least 3 records with positive phi");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& rec : usable) {
    const double lx = std::log(rec.r);
    const double ly = std::log(rec.phi);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(usable.size());
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.used = static_cast<int>(usable.size());
  return fit;
}

StripProjection piecewise_const_project(
    const std::function<double(double, Point2)>& field, const geom::InterfaceStack& stack,
    double t0, Point2 x0, double r, int budget, bool parabolic,
    const std::vector<double>& slab_times, std::uint64_t seed) {
  const geom::Frame frame = geom::frame_at_anchor(stack, VecD{2, {x0.x, x0.y, 0.0}});
  const double nx = frame.normal[0], ny = frame.normal[1];

  // signed offsets along the anchor normal where the line through x0
  // crosses each interface; the strip of a point is decided by its own
  // normal offset relative to these.
  const int m = stack.count();
  std::vector<double> offsets;        // crossing offsets, ascending
  std::vector<int> offset_iface;      // which interface
  for (int j = 1; j <= m; ++j) {
    // scan for a sign change of x_d(s) - h_j(x'(s)) near the anchor
    auto g = [&](double s) {
      const double px = x0.x + s * nx;
      const double py = x0.y + s * ny;
      double xq = std::clamp(px, -1.0 + 1e-12, 1.0 - 1e-12);
      return py - stack.height(j, &xq);
    };
    const int n = 400;
    bool found = false;
    double best = 0.0, bestabs = 1e300;
    for (int i = 0; i < n; ++i) {
      double a = -1.5 + 3.0 * i / n;
      double b = a + 3.0 / n;
      if (g(a) == 0.0 || g(a) * g(b) < 0.0) {
        for (int it = 0; it < 100; ++it) {
          const double mid = 0.5 * (a + b);
          if (g(a) * g(mid) <= 0.0)
            b = mid;
          else
            a = mid;
        }
        const double s = 0.5 * (a + b);
        if (std::abs(s) < bestabs) {
          bestabs = std::abs(s);
          best = s;
          found = true;
        }
      }
    }
    if (found) {
      offsets.push_back(best);
      offset_iface.push_back(j);
    }
  }

  auto strip_of = [&](Point2 p) {
    const double s = (p.x - x0.x) * nx + (p.y - x0.y) * ny;
    int strip = 1;
    for (std::size_t k = 0; k < offsets.size(); ++k)
      if (s > offsets[k]) strip = offset_iface[k] + 1;
    return strip;
  };

  Rng rng(seed);
  const auto pts = sample_cylinder(t0, x0, r, budget, parabolic, slab_times, rng);
  StripProjection out;
  out.strip_means.assign(static_cast<std::size_t>(m + 2), 0.0);
  out.strip_counts.assign(static_cast<std::size_t>(m + 2), 0);
  out.strip_skipped.assign(static_cast<std::size_t>(m + 2), 0);

  std::vector<int> strip_id(pts.size());
  std::vector<double> vals(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    strip_id[i] = strip_of(pts[i].x);
    vals[i] = field(pts[i].t, pts[i].x);
    out.strip_means[static_cast<std::size_t>(strip_id[i])] += vals[i];
    out.strip_counts[static_cast<std::size_t>(strip_id[i])] += 1;
  }
  for (int j = 1; j <= m + 1; ++j) {
    if (out.strip_counts[static_cast<std::size_t>(j)] == 0) {
      out.strip_skipped[static_cast<std::size_t>(j)] = 1;
      out.strip_means[static_cast<std::size_t>(j)] = 0.0;
    } else {
      out.strip_means[static_cast<std::size_t>(j)] /=
          out.strip_counts[static_cast<std::size_t>(j)];
    }
  }
  double dev = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    dev += std::abs(vals[i] - out.strip_means[static_cast<std::size_t>(strip_id[i])]);
  out.l1_deviation = dev / static_cast<double>(pts.size());
  return out;
}

}  // namespace lamlab::diag
