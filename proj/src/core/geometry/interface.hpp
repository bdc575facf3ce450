#pragma once

#include <memory>
#include <string>
#include <vector>

#include "common.hpp"

namespace lamlab::geom {

// Value and x'-derivatives of a graph function h(x') up to order 3.
// x' has dimension d-1 (1 or 2); unused slots stay zero.
struct InterfaceJet {
  double value = 0.0;
  std::array<double, 2> grad{0.0, 0.0};
  std::array<std::array<double, 2>, 2> hess{{{0.0, 0.0}, {0.0, 0.0}}};
  std::array<std::array<std::array<double, 2>, 2>, 2> third{};
  int order = 0;
};

// Analytic graph x^d = h(x'). Implementations differentiate exactly; no
// numerical differentiation is used anywhere in the geometry module.
class InterfaceFn {
 public:
  virtual ~InterfaceFn() = default;
  virtual int xdim() const = 0;  // d-1
  virtual InterfaceJet jet(const double* xp, int order) const = 0;
  // Canonical description entering the scenario content digest.
  virtual std::string describe() const = 0;

  double value(const double* xp) const { return jet(xp, 0).value; }
};

using InterfacePtr = std::shared_ptr<const InterfaceFn>;

// Univariate polynomial sum_i coeffs[i] * x'^i  (d = 2).
InterfacePtr make_poly1(std::vector<double> coeffs);
// amplitude * cos(omega * x' + phase) + offset  (d = 2).
InterfacePtr make_cosine1(double amplitude, double omega, double phase, double offset = 0.0);
// Constant interface, any dimension.
InterfacePtr make_flat(double c, int xdim);
// Bivariate polynomial with monomials c * x1^i * x2^j  (d = 3).
struct Monomial2 {
  int i = 0;
  int j = 0;
  double c = 0.0;
};
InterfacePtr make_poly2(std::vector<Monomial2> monomials);

// Ordered interfaces h_1 <= ... <= h_m strictly inside (-1, 1), with the
// implicit sentinels h_0 = -1 and h_{m+1} = +1. Indices run 0..m+1.
class InterfaceStack {
 public:
  InterfaceStack(int dimension, std::vector<InterfacePtr> interfaces);

  int dimension() const { return d_; }
  int count() const { return m_; }  // number of interior interfaces

  // j in [0, m+1]; sentinels included.
  InterfaceJet jet(int j, const double* xp, int order) const;
  double height(int j, const double* xp) const { return jet(j, xp, 0).value; }

  // Checked variant for callers: j must address an interior interface
  // and |x'| < 1. Returns derivatives up to `order` (0..3).
  InterfaceJet eval_interface(int j, const double* xp, int order) const;

  // Verifies ordering and range on a sampled grid. Equal heights are
  // tolerated at isolated sample columns only.
  void validate(int samples_per_axis = 512) const;

  std::string describe() const;

 private:
  int d_;
  int m_;
  std::vector<InterfacePtr> interfaces_;  // interior only, size m_
};

enum class IncidenceKind { Interior, OnInterface, OnOuterBoundary };

struct RegionIncidence {
  IncidenceKind kind = IncidenceKind::Interior;
  int region = 1;           // strip index j in 1..m+1 (for OnInterface: interface index)
  double iface_distance = 0.0;  // vertical distance to the nearest interior interface
};

constexpr double kTolIface = 1e-13;

// Classify a point of the closed domain into a strip, onto an interface,
// or onto the outer boundary x^d = +-1.
RegionIncidence classify_point(const InterfaceStack& stack, const VecD& x,
                               double tol_iface = kTolIface);

}  // namespace lamlab::geom
