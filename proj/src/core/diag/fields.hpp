#pragma once

#include "diag/campanato.hpp"
#include "diag/seminorm.hpp"
#include "solver/recovery.hpp"

namespace lamlab::diag {

// Region-aware samplers of the frame-directional derivative
// D_{l^k} u = l^k . grad u_h and the conormal flux U = n . (A grad u_h - f),
// built on one-sided moving-least-squares gradients.
class DerivedFields {
 public:
  DerivedFields(const solver::FieldSolution& sol, const geom::InterfaceStack& stack,
                const solver::CoefficientModel& coeff, const solver::ForcingModel& forcing);

  int region_at(Point2 p) const;  // interface points resolve to the lower region
  std::array<double, 2> recovered_gradient(int region, double t, Point2 p) const;

  double dlu(int k, double t, Point2 p) const;
  double conormal(double t, Point2 p) const;
  // both fields at once (the Campanato pair)
  std::array<double, 2> pair(double t, Point2 p) const;

  // discrete jump of the pair across interface j at (t, x'), probing at
  // +-offset along the interface normal
  std::array<double, 2> pair_jump(int j, double t, double xprime, double offset) const;

  const solver::DerivativeRecovery& recovery() const { return recovery_; }
  const geom::InterfaceStack& stack() const { return stack_; }
  const solver::FieldSolution& solution() const { return sol_; }
  const solver::CoefficientModel& coeff() const { return coeff_; }
  const solver::ForcingModel& forcing() const { return forcing_; }

 private:
  const solver::FieldSolution& sol_;
  const geom::InterfaceStack& stack_;
  const solver::CoefficientModel& coeff_;
  const solver::ForcingModel& forcing_;
  solver::DerivativeRecovery recovery_;
};

// Corrected data of the differentiated transmission problem at anchor z0:
//   f1 = D_l f + A D(l)_i D_i u - D_l A D u        (first-order data)
//   htilde_j = [D_l n_j . (-A D u + f)]            (interface bracket)
//   f3 = f1 - A sum_j D(ltilde_j) D u(t0, P_j x0) + e_d sum_j 1_{x_d > h_j} htilde_j / n_j^d
struct CorrectedFluxData {
  std::array<double, 2> f1(double t, Point2 p) const;
  double htilde(int j, double t, double xprime) const;
  std::array<double, 2> f3(double t, Point2 p) const;

  const DerivedFields* fields = nullptr;
  double t0 = 0.0;
  Point2 x0{};
  int j0 = 1;
  std::vector<VecD> anchors;                     // P_j x0
  std::vector<std::array<double, 2>> du_anchor;  // D u(t0, P_j x0), region side j
  double trace_offset = 1e-6;                    // one-sided probing distance
};

CorrectedFluxData corrected_flux_data(const DerivedFields& fields, double t0, Point2 x0);

struct RegionNorms {
  int region = 1;
  double sup_u = 0.0;
  double seminorm_du = 0.0;        // [Du]_{mu'/2, mu'}
  double sup_d2u = 0.0;            // max |D^2 u| entry over probes
  double seminorm_du_time = 0.0;   // [Du]_{t,(1+delta)/2} (parabolic only)
};

struct NormTableOptions {
  int s_level = 1;       // 0: skip second derivatives
  double mu_prime = 0.5;
  double delta = 0.75;
  double margin = 0.02;  // interior keep-away from interfaces
  Point2 lo{-0.9, -0.9};
  Point2 hi{0.9, 0.9};
  int budget = 2000;
  std::uint64_t seed = kDefaultSeed;
};

std::vector<RegionNorms> piecewise_norm_table(const DerivedFields& fields,
                                              const NormTableOptions& opt);

}  // namespace lamlab::diag
