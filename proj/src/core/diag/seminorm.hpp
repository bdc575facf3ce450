#pragma once

#include <functional>

#include "diag/sampling.hpp"
#include "geometry/interface.hpp"

namespace lamlab::diag {

// max{ |t1-t2|^{1/2}, |x1-x2| }
double parabolic_distance(const SpaceTimeSample& a, const SpaceTimeSample& b);

enum class SeminormMetric { Spatial, Parabolic };

// Field sampler: up to 3 components (scalar fields use dim = 1).
struct FieldSampler {
  int dim = 1;
  std::function<std::array<double, 3>(double t, Point2 x)> eval;
};

struct SeminormRequest {
  FieldSampler field;
  const geom::InterfaceStack* stack = nullptr;  // region restriction (optional)
  int region = 0;                               // 0 = unrestricted
  double margin = 0.0;                          // keep-away from interfaces
  double gamma = 1.0;                           // exponent in (0, 1]
  SeminormMetric metric = SeminormMetric::Spatial;
  // sampling window
  Point2 lo{-0.95, -0.95};
  Point2 hi{0.95, 0.95};
  std::vector<double> times{0.0};  // admissible time levels
  int budget = 2000;
  std::uint64_t seed = kDefaultSeed;
};

// Sampled lower bound of the Hoelder seminorm
//   sup |u(z1)-u(z2)| / (|t1-t2|^{gamma/2} + |x1-x2|^gamma)
// (spatial metric drops the time term). Stratified grid pairs plus seeded
// random pairs; deterministic given the seed.
double holder_seminorm(const SeminormRequest& req);

// delta_h^gamma f(t, x) = (f(t,x) - f(t-h,x)) / h^gamma
double time_quotient(const std::function<double(double, Point2)>& field, double gamma,
                     double h, double t, Point2 x);

// sup over a sample grid of |delta_h^gamma| applied to a vector field
double time_quotient_sup(const FieldSampler& field, double gamma, double h, double t,
                         const std::vector<Point2>& grid);

}  // namespace lamlab::diag
