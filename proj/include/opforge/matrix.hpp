#pragma once

#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "opforge/errors.hpp"

namespace opforge {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using complexd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;

// One matrix per ambient block.
using MatrixTuple = std::vector<Matrix>;

// Largest singular value. Documented relative accuracy 1e-12 (dense SVD).
double spectral_norm(const Matrix& m);

// Nuclear / trace norm (sum of singular values).
double trace_norm(const Matrix& m);

Matrix kron(const Matrix& a, const Matrix& b);

Eigen::VectorXcd vec(const Matrix& m);             // column-major stacking
Matrix unvec(const Eigen::VectorXcd& v, int rows, int cols);

Matrix matrix_unit(int n, int i, int j);

// Realification of a complex Hermitian form: H = A + iB maps to
// [[A, -B], [B, A]], symmetric, PSD iff H is.
RealMatrix realify_hermitian(const Matrix& h);

// Partial trace over the first factor of M_m (x) M_p.
Matrix partial_trace_first(const Matrix& c, int m, int p);

bool all_finite(const Matrix& m);

inline double spectral_norm(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

inline double trace_norm(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Eigen::VectorXcd vec(const Matrix& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

inline Matrix unvec(const Eigen::VectorXcd& v, int rows, int cols) {
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

inline Matrix matrix_unit(int n, int i, int j) {
  Matrix m = Matrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

inline RealMatrix realify_hermitian(const Matrix& h) {
  const int n = static_cast<int>(h.rows());
  RealMatrix out(2 * n, 2 * n);
  const RealMatrix a = h.real();
  const RealMatrix b = h.imag();
  out.topLeftCorner(n, n) = a;
  out.topRightCorner(n, n) = -b;
  out.bottomLeftCorner(n, n) = b;
  out.bottomRightCorner(n, n) = a;
  // symmetrize away roundoff
  out = 0.5 * (out + out.transpose()).eval();
  return out;
}

inline Matrix partial_trace_first(const Matrix& c, int m, int p) {
  if (c.rows() != m * p || c.cols() != m * p)
    fail(ErrorCode::DimensionMismatch, "partial_trace_first: bad shape");
  Matrix out = Matrix::Zero(p, p);
  for (int i = 0; i < m; ++i) out += c.block(i * p, i * p, p, p);
  return out;
}

inline bool all_finite(const Matrix& m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      const complexd z = m(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  return true;
}

}  // namespace opforge
