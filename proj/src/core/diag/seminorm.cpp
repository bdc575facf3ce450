#include "diag/seminorm.hpp"

#include <algorithm>
#include <cmath>

namespace lamlab::diag {

double parabolic_distance(const SpaceTimeSample& a, const SpaceTimeSample& b) {
  const double dt = std::sqrt(std::abs(a.t - b.t));
  const double dx = std::hypot(a.x.x - b.x.x, a.x.y - b.x.y);
  return std::max(dt, dx);
}

namespace {

bool admissible(const SeminormRequest& req, Point2 p) {
  if (p.x < req.lo.x || p.x > req.hi.x || p.y < req.lo.y || p.y > req.hi.y) return false;
  if (req.region > 0 && req.stack) {
    const auto inc = geom::classify_point(*req.stack, VecD{2, {p.x, p.y, 0.0}});
    if (inc.kind != geom::IncidenceKind::Interior || inc.region != req.region) return false;
    if (inc.iface_distance < req.margin) return false;
  }
  return true;
}

}  // namespace

double holder_seminorm(const SeminormRequest& req) {
  if (req.gamma <= 0.0 || req.gamma > 1.0)
    throw ValidationError("holder_seminorm: gamma must lie in (0, 1]");
  if (req.budget < 2) throw ValidationError("holder_seminorm: budget must be >= 2");

  // A fixed endpoint-inclusive grid followed by a low-discrepancy stream;
  // larger budgets extend the point and pair sequences without
  // reshuffling, so growing the budget can only raise the sampled sup.
  std::vector<SpaceTimeSample> pts;
  constexpr int kGrid = 13;
  for (double t : req.times)
    for (int i = 0; i < kGrid; ++i)
      for (int j = 0; j < kGrid; ++j) {
        const Point2 p{req.lo.x + (req.hi.x - req.lo.x) * i / (kGrid - 1),
                       req.lo.y + (req.hi.y - req.lo.y) * j / (kGrid - 1)};
        if (admissible(req, p)) pts.push_back({t, p});
      }
  const std::size_t grid_count = pts.size();

  constexpr double kA1 = 0.7548776662466927;  // R2 sequence constants
  constexpr double kA2 = 0.5698402909980532;
  std::size_t candidate = 0;
  auto pump_point = [&]() {
    for (int guard = 0; guard < 10000; ++guard) {
      const double u = std::fmod(0.5 + kA1 * static_cast<double>(candidate + 1), 1.0);
      const double v = std::fmod(0.5 + kA2 * static_cast<double>(candidate + 1), 1.0);
      const double t = req.times[candidate % req.times.size()];
      ++candidate;
      const Point2 p{req.lo.x + (req.hi.x - req.lo.x) * u,
                     req.lo.y + (req.hi.y - req.lo.y) * v};
      if (admissible(req, p)) {
        pts.push_back({t, p});
        return true;
      }
    }
    return false;
  };
  while (pts.size() < 2)
    if (!pump_point()) throw ValidationError("holder_seminorm: empty sample set");

  auto denom = [&](const SpaceTimeSample& a, const SpaceTimeSample& b) {
    const double dx = std::hypot(a.x.x - b.x.x, a.x.y - b.x.y);
    if (req.metric == SeminormMetric::Spatial) return std::pow(dx, req.gamma);
    return std::pow(std::abs(a.t - b.t), req.gamma / 2.0) + std::pow(dx, req.gamma);
  };
  auto ratio = [&](const SpaceTimeSample& a, const SpaceTimeSample& b) {
    const double den = denom(a, b);
    if (den < 1e-15) return 0.0;
    const auto va = req.field.eval(a.t, a.x);
    const auto vb = req.field.eval(b.t, b.x);
    double num = 0.0;
    for (int c = 0; c < req.field.dim; ++c)
      num += (va[static_cast<std::size_t>(c)] - vb[static_cast<std::size_t>(c)]) *
             (va[static_cast<std::size_t>(c)] - vb[static_cast<std::size_t>(c)]);
    return std::sqrt(num) / den;
  };

  double sup = 0.0;
  Rng pair_rng(req.seed);
  for (int t = 0; t < req.budget; ++t) {
    const std::size_t target = grid_count + static_cast<std::size_t>(t) / 2 + 1;
    while (pts.size() < target)
      if (!pump_point()) break;
    const std::size_t avail = std::min(pts.size(), target);
    const std::size_t i = pair_rng.next_below(avail);
    const std::size_t j = pair_rng.next_below(avail);
    if (i != j) sup = std::max(sup, ratio(pts[i], pts[j]));
  }
  // nearest-neighbour pairs along the sequence (short separations)
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    sup = std::max(sup, ratio(pts[i], pts[i + 1]));
  if (!std::isfinite(sup)) throw NumericError("holder_seminorm: non-finite value");
  return sup;
}

double time_quotient(const std::function<double(double, Point2)>& field, double gamma,
                     double h, double t, Point2 x) {
  if (h <= 0.0) throw ValidationError("time_quotient: h must be positive");
  return (field(t, x) - field(t - h, x)) / std::pow(h, gamma);
}

double time_quotient_sup(const FieldSampler& field, double gamma, double h, double t,
                         const std::vector<Point2>& grid) {
  if (h <= 0.0) throw ValidationError("time_quotient: h must be positive");
  double sup = 0.0;
  const double hg = std::pow(h, gamma);
  for (const Point2& p : grid) {
    const auto a = field.eval(t, p);
    const auto b = field.eval(t - h, p);
    double num = 0.0;
    for (int c = 0; c < field.dim; ++c)
      num += (a[static_cast<std::size_t>(c)] - b[static_cast<std::size_t>(c)]) *
             (a[static_cast<std::size_t>(c)] - b[static_cast<std::size_t>(c)]);
    sup = std::max(sup, std::sqrt(num) / hg);
  }
  return sup;
}

}  // namespace lamlab::diag
