#pragma once

#include <vector>

#include "common.hpp"

namespace lamlab::solver {

struct CsrMatrix {
  int n = 0;
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<double> val;

  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
  double& coeff(int r, int c);          // existing entry only
  double coeff_or_zero(int r, int c) const;
};

// Fixed-sparsity builder: sparsity from vertex adjacency, entries
// accumulated in element order so assembly is bit-stable.
class CsrBuilder {
 public:
  explicit CsrBuilder(std::vector<std::vector<int>> adjacency);
  void add(int r, int c, double v);
  void clear_values();
  const CsrMatrix& matrix() const { return mat_; }
  CsrMatrix take() { return std::move(mat_); }

 private:
  CsrMatrix mat_;
};

struct CgResult {
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
};

// Jacobi-preconditioned conjugate gradients.
CgResult pcg(const CsrMatrix& a, const std::vector<double>& b, std::vector<double>& x,
             double rel_tol = 1e-12, int max_iter = 0);

}  // namespace lamlab::solver
