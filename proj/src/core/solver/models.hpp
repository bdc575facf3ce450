#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "geometry/interface.hpp"
#include "solver/poly.hpp"

namespace lamlab::solver {

// Symmetric 2x2 matrix stored as {a11, a12, a22}.
using Sym2 = std::array<double, 3>;

inline std::array<double, 2> apply_sym(const Sym2& a, const std::array<double, 2>& v) {
  return {a[0] * v[0] + a[1] * v[1], a[1] * v[0] + a[2] * v[1]};
}

inline double eig_min(const Sym2& a) {
  const double mid = 0.5 * (a[0] + a[2]);
  const double rad = std::hypot(0.5 * (a[0] - a[2]), a[1]);
  return mid - rad;
}

inline double eig_max(const Sym2& a) {
  const double mid = 0.5 * (a[0] + a[2]);
  const double rad = std::hypot(0.5 * (a[0] - a[2]), a[1]);
  return mid + rad;
}

// Per-region symmetric coefficient A_j(t, x) with analytic derivatives.
class CoefficientModel {
 public:
  struct RegionEntries {
    Poly3 a11 = Poly3::constant(1.0);
    Poly3 a12;
    Poly3 a22 = Poly3::constant(1.0);
  };

  CoefficientModel() = default;
  CoefficientModel(std::vector<RegionEntries> regions, double declared_nu);

  // isotropic constants a_j * I
  static CoefficientModel constants(const std::vector<double>& a);

  int region_count() const { return static_cast<int>(regions_.size()); }
  Sym2 eval(int region, double t, Point2 p) const;
  Sym2 eval_dx(int region, double t, Point2 p) const;
  Sym2 eval_dy(int region, double t, Point2 p) const;
  Sym2 eval_dt(int region, double t, Point2 p) const;
  double nu() const { return nu_; }
  bool time_dependent() const;
  std::string describe() const;

 private:
  std::vector<RegionEntries> regions_;
  double nu_ = 1.0;
};

// Per-region forcing vector f_j(t, x), Dirichlet trace, initial datum.
// Three shapes: identically zero, per-region polynomial components, or a
// manufactured pair (u*, f = A grad u* [- time correction]).
class ForcingModel {
 public:
  struct RegionVec {
    Poly3 fx;
    Poly3 fy;
  };

  static ForcingModel zero();
  static ForcingModel per_region(std::vector<RegionVec> f, Poly3 dirichlet, Poly3 initial);

  // u* is continuous and piecewise smooth: region i carries
  //   base + sum_{j<i} slope_j(t) * (y - h_j(x)),
  // the interface graphs h_j given as polynomials in x. f = A grad u*;
  // in parabolic mode f additionally subtracts (0, int_{-1}^y u*_t ds) so
  // that u* solves the parabolic system exactly.
  static ForcingModel manufactured(const CoefficientModel& coeff,
                                   std::vector<Poly3> iface_polys, Poly3 base,
                                   std::vector<Poly3> slopes_t, bool parabolic);

  std::array<double, 2> value(int region, double t, Point2 p) const;
  // spatial jacobian {dfx/dx, dfx/dy, dfy/dx, dfy/dy}; only when available
  bool has_spatial_derivatives() const { return has_jacobian_; }
  std::array<double, 4> jacobian(int region, double t, Point2 p) const;
  std::array<double, 2> dt(int region, double t, Point2 p) const;

  double dirichlet(double t, Point2 p, int region) const;
  double initial(Point2 p, int region, double t_begin) const;

  bool is_manufactured() const { return manufactured_; }
  // exact solution value/gradient/time-derivative (manufactured only)
  double exact(int region, double t, Point2 p) const;
  std::array<double, 2> exact_gradient(int region, double t, Point2 p) const;

  std::string describe() const;

 private:
  bool manufactured_ = false;
  bool parabolic_correction_ = false;
  bool has_jacobian_ = true;
  std::vector<RegionVec> region_f_;   // compiled per region
  std::vector<Poly3> exact_;          // per region u* (manufactured)
  std::vector<Poly3> iface_polys_;    // h_j(x) for the time correction
  std::shared_ptr<const CoefficientModel> coeff_;  // manufactured mode only
  Poly3 dirichlet_;
  Poly3 initial_;
  bool dirichlet_from_exact_ = false;

  double time_correction(double t, Point2 p) const;
};

}  // namespace lamlab::solver
