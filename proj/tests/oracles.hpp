#pragma once

// Independent test oracles. These deliberately avoid the library's own
// computation paths (Eigen SVD, the IPM) wherever they are used to check
// them: power iteration for spectral norms, Gram-Schmidt rank, dense grids
// for optimizers.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "opforge/matrix.hpp"
#include "opforge/rng.hpp"

namespace oracles {

using opforge::Matrix;
using opforge::complexd;

// sigma_max via power iteration on A*A.
inline double power_iteration_norm(const Matrix& a, int iters = 2000,
                                   std::uint64_t seed = 7) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  opforge::Rng rng(seed);
  Eigen::VectorXcd v = rng.ginibre(a.cols(), 1);
  v.normalize();
  double lam = 0.0;
  for (int i = 0; i < iters; ++i) {
    Eigen::VectorXcd w = a.adjoint() * (a * v);
    const double n = w.norm();
    if (n < 1e-300) return 0.0;
    v = w / n;
    lam = n;
  }
  return std::sqrt(lam);
}

// rank by modified Gram-Schmidt with threshold rel. to largest column.
inline int gram_schmidt_rank(Eigen::MatrixXcd m, double tol = 1e-10) {
  double scale = 0.0;
  for (int j = 0; j < m.cols(); ++j) scale = std::max(scale, m.col(j).norm());
  if (scale == 0.0) return 0;
  int rank = 0;
  std::vector<Eigen::VectorXcd> q;
  for (int j = 0; j < m.cols(); ++j) {
    Eigen::VectorXcd v = m.col(j);
    for (const auto& u : q) v -= u.dot(v) * u;
    for (const auto& u : q) v -= u.dot(v) * u;  // re-orthogonalize
    if (v.norm() > tol * scale) {
      q.push_back(v.normalized());
      ++rank;
    }
  }
  return rank;
}

// Solve A x = b by hand-rolled partial-pivot LU.
inline Eigen::VectorXcd lu_solve(Eigen::MatrixXcd a, Eigen::VectorXcd b) {
  const int n = static_cast<int>(a.rows());
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    a.row(k).swap(a.row(piv));
    std::swap(b(k), b(piv));
    for (int i = k + 1; i < n; ++i) {
      const complexd f = a(i, k) / a(k, k);
      a.row(i).tail(n - k) -= f * a.row(k).tail(n - k);
      b(i) -= f * b(k);
    }
  }
  Eigen::VectorXcd x(n);
  for (int i = n - 1; i >= 0; --i) {
    complexd s = b(i);
    for (int j = i + 1; j < n; ++j) s -= a(i, j) * x(j);
    x(i) = s / a(i, i);
  }
  return x;
}

// Dense grid minimizer of f over the box [lo, hi]^dim, with shrinking
// refinement passes around the best point found.
template <class F>
double grid_min(F f, int dim, double lo, double hi, int pts,
                int refinements = 4) {
  std::vector<double> center(dim, 0.5 * (lo + hi));
  double half = 0.5 * (hi - lo);
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_t = center;
  for (int pass = 0; pass <= refinements; ++pass) {
    const int n = (pass == 0) ? pts : 9;
    std::vector<int> idx(dim, 0);
    std::vector<double> t(dim);
    while (true) {
      for (int d = 0; d < dim; ++d)
        t[d] = center[d] - half + (2.0 * half / (n - 1)) * idx[d];
      const double v = f(t);
      if (v < best) {
        best = v;
        best_t = t;
      }
      int d = 0;
      while (d < dim && ++idx[d] == n) idx[d++] = 0;
      if (d == dim) break;
    }
    center = best_t;
    half = (pass == 0) ? (2.0 * half / (pts - 1)) : (2.2 * half / (n - 1));
  }
  return best;
}

// Amplification oracle: (id_k (x) f) on vectorized coordinates via an
// explicit Kronecker matrix acting on stacked coefficient columns.
inline std::vector<Matrix> kron_amplify(const Eigen::MatrixXcd& f_coeff,
                                        const std::vector<Matrix>& coeff) {
  const int dout = static_cast<int>(f_coeff.rows());
  const int din = static_cast<int>(f_coeff.cols());
  const int k = coeff.empty() ? 0 : static_cast<int>(coeff[0].rows());
  std::vector<Matrix> out(dout, Matrix::Zero(k, k));
  for (int a = 0; a < dout; ++a)
    for (int i = 0; i < din; ++i) out[a] += f_coeff(a, i) * coeff[i];
  return out;
}

}  // namespace oracles
