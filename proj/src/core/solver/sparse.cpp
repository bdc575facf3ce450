#include "solver/sparse.hpp"

#include <algorithm>
#include <cmath>

namespace lamlab::solver {

void CsrMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  y.assign(static_cast<std::size_t>(n), 0.0);
  for (int r = 0; r < n; ++r) {
    double acc = 0.0;
    for (int k = row_ptr[static_cast<std::size_t>(r)];
         k < row_ptr[static_cast<std::size_t>(r + 1)]; ++k)
      acc += val[static_cast<std::size_t>(k)] *
             x[static_cast<std::size_t>(col[static_cast<std::size_t>(k)])];
    y[static_cast<std::size_t>(r)] = acc;
  }
}

double& CsrMatrix::coeff(int r, int c) {
  const int lo = row_ptr[static_cast<std::size_t>(r)];
  const int hi = row_ptr[static_cast<std::size_t>(r + 1)];
  auto it = std::lower_bound(col.begin() + lo, col.begin() + hi, c);
  if (it == col.begin() + hi || *it != c)
    throw NumericError("CsrMatrix: entry outside sparsity pattern");
  return val[static_cast<std::size_t>(it - col.begin())];
}

double CsrMatrix::coeff_or_zero(int r, int c) const {
  const int lo = row_ptr[static_cast<std::size_t>(r)];
  const int hi = row_ptr[static_cast<std::size_t>(r + 1)];
  auto it = std::lower_bound(col.begin() + lo, col.begin() + hi, c);
  if (it == col.begin() + hi || *it != c) return 0.0;
  return val[static_cast<std::size_t>(it - col.begin())];
}

CsrBuilder::CsrBuilder(std::vector<std::vector<int>> adjacency) {
  mat_.n = static_cast<int>(adjacency.size());
  mat_.row_ptr.resize(static_cast<std::size_t>(mat_.n + 1), 0);
  for (int r = 0; r < mat_.n; ++r) {
    auto& nb = adjacency[static_cast<std::size_t>(r)];
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    mat_.row_ptr[static_cast<std::size_t>(r + 1)] =
        mat_.row_ptr[static_cast<std::size_t>(r)] + static_cast<int>(nb.size());
  }
  mat_.col.reserve(static_cast<std::size_t>(mat_.row_ptr.back()));
  for (const auto& nb : adjacency) mat_.col.insert(mat_.col.end(), nb.begin(), nb.end());
  mat_.val.assign(mat_.col.size(), 0.0);
}

void CsrBuilder::add(int r, int c, double v) { mat_.coeff(r, c) += v; }

void CsrBuilder::clear_values() { std::fill(mat_.val.begin(), mat_.val.end(), 0.0); }

CgResult pcg(const CsrMatrix& a, const std::vector<double>& b, std::vector<double>& x,
             double rel_tol, int max_iter) {
  const int n = a.n;
  if (max_iter <= 0) max_iter = std::max(1000, 20 * n);
  x.assign(static_cast<std::size_t>(n), 0.0);

  std::vector<double> diag(static_cast<std::size_t>(n), 1.0);
  for (int r = 0; r < n; ++r) {
    const double d = a.coeff_or_zero(r, r);
    if (d <= 0.0) throw NumericError("pcg: nonpositive diagonal at row " + std::to_string(r));
    diag[static_cast<std::size_t>(r)] = d;
  }

  double bnorm = 0.0;
  for (double v : b) bnorm += v * v;
  bnorm = std::sqrt(bnorm);
  CgResult res;
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }

  std::vector<double> r = b, z(static_cast<std::size_t>(n)), p(static_cast<std::size_t>(n)),
                      q(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    z[static_cast<std::size_t>(i)] =
        r[static_cast<std::size_t>(i)] / diag[static_cast<std::size_t>(i)];
  p = z;
  double rz = 0.0;
  for (int i = 0; i < n; ++i)
    rz += r[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];

  for (int it = 0; it < max_iter; ++it) {
    a.multiply(p, q);
    double pq = 0.0;
    for (int i = 0; i < n; ++i)
      pq += p[static_cast<std::size_t>(i)] * q[static_cast<std::size_t>(i)];
    if (pq <= 0.0) throw NumericError("pcg: matrix not positive definite (p'Ap <= 0)");
    const double alpha = rz / pq;
    double rnorm = 0.0;
    for (int i = 0; i < n; ++i) {
      x[static_cast<std::size_t>(i)] += alpha * p[static_cast<std::size_t>(i)];
      r[static_cast<std::size_t>(i)] -= alpha * q[static_cast<std::size_t>(i)];
      rnorm += r[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)];
    }
    rnorm = std::sqrt(rnorm);
    res.iterations = it + 1;
    res.rel_residual = rnorm / bnorm;
    if (res.rel_residual <= rel_tol) {
      res.converged = true;
      return res;
    }
    double rz_next = 0.0;
    for (int i = 0; i < n; ++i) {
      z[static_cast<std::size_t>(i)] =
          r[static_cast<std::size_t>(i)] / diag[static_cast<std::size_t>(i)];
      rz_next += r[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
    }
    const double beta = rz_next / rz;
    rz = rz_next;
    for (int i = 0; i < n; ++i)
      p[static_cast<std::size_t>(i)] =
          z[static_cast<std::size_t>(i)] + beta * p[static_cast<std::size_t>(i)];
  }
  throw NumericError("pcg: no convergence after " + std::to_string(max_iter) +
                     " iterations, residual " + std::to_string(res.rel_residual));
}

}  // namespace lamlab::solver
