#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace opforge {

// Deterministic RNG used everywhere. Gaussians go through an explicit
// Box-Muller so streams do not depend on the standard library's
// distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  double uniform() {
    // 53-bit mantissa uniform in [0, 1)
    return (gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * M_PI * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
  }

  std::complex<double> cgaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re * M_SQRT1_2, im * M_SQRT1_2};
  }

  // Ginibre block: iid standard complex Gaussian entries.
  Eigen::MatrixXcd ginibre(int rows, int cols) {
    Eigen::MatrixXcd m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = cgaussian();
    return m;
  }

  // Haar-ish unitary via QR of a Ginibre matrix with phase fix.
  Eigen::MatrixXcd unitary(int n) {
    Eigen::MatrixXcd g = ginibre(n, n);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
      std::complex<double> d = r(j, j);
      const double a = std::abs(d);
      q.col(j) *= (a > 0) ? d / a : 1.0;
    }
    return q;
  }

  std::complex<double> phase() {
    const double th = 2.0 * M_PI * uniform();
    return {std::cos(th), std::sin(th)};
  }

  // Independent child stream; distinct tags give distinct streams.
  Rng fork(std::uint64_t tag) const {
    std::mt19937_64 g = gen_;
    const std::uint64_t mix = g() ^ (0x9e3779b97f4a7c15ULL * (tag + 1));
    return Rng(mix);
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace opforge
