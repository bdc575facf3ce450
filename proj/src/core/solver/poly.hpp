#pragma once

#include <string>
#include <vector>

#include "common.hpp"

namespace lamlab::solver {

// Sparse trivariate polynomial in (t, x, y) with exact differentiation.
// Coefficient entries, forcing data and manufactured solutions are all
// built from these, so no data is ever differentiated numerically.
class Poly3 {
 public:
  struct Term {
    int it = 0, ix = 0, iy = 0;
    double c = 0.0;
  };

  Poly3() = default;
  explicit Poly3(std::vector<Term> terms) : terms_(std::move(terms)) { normalize(); }

  static Poly3 constant(double c);
  static Poly3 var_t();
  static Poly3 var_x();
  static Poly3 var_y();

  double eval(double t, double x, double y) const;
  Poly3 dt() const;
  Poly3 dx() const;
  Poly3 dy() const;

  Poly3 operator+(const Poly3& o) const;
  Poly3 operator-(const Poly3& o) const;
  Poly3 operator*(const Poly3& o) const;
  Poly3 scaled(double s) const;

  // antiderivative in y with zero constant
  Poly3 integral_y() const;

  bool is_zero() const { return terms_.empty(); }
  bool depends_on_t() const;
  int degree_y() const;
  const std::vector<Term>& terms() const { return terms_; }

  std::string describe() const;

 private:
  void normalize();
  std::vector<Term> terms_;
};

}  // namespace lamlab::solver
