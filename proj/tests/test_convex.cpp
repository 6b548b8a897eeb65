#include "doctest.h"

#include <cmath>

#include "opforge/convex.hpp"
#include "opforge/rng.hpp"
#include "oracles.hpp"

using namespace opforge;
using namespace opforge::convex;

namespace {

SpectralProgram random_program(int nvars, int blocks, int size, Rng& rng) {
  SpectralProgram p;
  p.nvars = nvars;
  for (int b = 0; b < blocks; ++b) {
    AffineNormBlock blk;
    blk.constant = rng.ginibre(size, size);
    for (int i = 0; i < nvars; ++i) blk.coeff.push_back(rng.ginibre(size, size));
    p.blocks.push_back(std::move(blk));
  }
  return p;
}

// The grid is the independent optimizer-oracle; plain SVD inside is fine
// (power iteration is the norm-oracle, exercised in test_core).
double oracle_value(const SpectralProgram& p, const std::vector<double>& t) {
  double v = 0;
  for (const auto& b : p.blocks) {
    Matrix m = b.constant;
    for (int i = 0; i < p.nvars; ++i) m += t[i] * b.coeff[i];
    v = std::max(v, spectral_norm(m));
  }
  return v;
}

}  // namespace

TEST_CASE("no-variable program returns the plain norm") {
  Rng rng(3);
  SpectralProgram p;
  p.nvars = 0;
  AffineNormBlock b;
  b.constant = rng.ginibre(4, 4);
  p.blocks.push_back(b);
  auto r = solve_spectral_min(p);
  CHECK(r.status == SolveStatus::Optimal);
  CHECK(r.value == doctest::Approx(spectral_norm(p.blocks[0].constant)).epsilon(1e-12));
}

TEST_CASE("scalar-max program: min over t of ||diag(1-t, t)|| is 1/2") {
  SpectralProgram p;
  p.nvars = 1;
  {
    AffineNormBlock b;
    b.constant = Matrix::Identity(1, 1);
    b.coeff = {-Matrix::Identity(1, 1)};
    p.blocks.push_back(b);  // |1 - t|
  }
  {
    AffineNormBlock b;
    b.constant = Matrix::Zero(1, 1);
    b.coeff = {Matrix::Identity(1, 1)};
    p.blocks.push_back(b);  // |t|
  }
  auto r = solve_spectral_min(p);
  CHECK(r.status == SolveStatus::Optimal);
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(r.t(0) == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(r.gap <= 1e-7);
}

TEST_CASE("random affine family matches dense grid oracle") {
  Rng rng(11);
  for (int inst = 0; inst < 5; ++inst) {
    SpectralProgram p = random_program(3, 2, 4, rng);
    auto r = solve_spectral_min(p);
    REQUIRE(r.status == SolveStatus::Optimal);
    // documented box: the optimizer of these well-conditioned instances lies
    // well inside [-3, 3]^3 (the t = 0 value bounds the optimum and the
    // coefficient families are O(1) Ginibre)
    const double g = oracles::grid_min(
        [&](const std::vector<double>& t) { return oracle_value(p, t); }, 3,
        -3.0, 3.0, 31);
    CHECK(r.value <= g + 1e-7);
    CHECK(std::abs(r.value - g) <= 5e-3 * (1.0 + g));
    CHECK(r.gap <= 1e-8 * (1.0 + std::abs(r.value)) + 1e-9);
  }
}

TEST_CASE("duality gap small and value reproducible on random programs") {
  Rng rng(121);
  for (int inst = 0; inst < 20; ++inst) {
    const int nv = rng.uniform_int(1, 4);
    SpectralProgram p = random_program(nv, rng.uniform_int(1, 3), rng.uniform_int(2, 5), rng);
    auto r = solve_spectral_min(p);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.gap <= 1e-8 * (1.0 + std::abs(r.value)) + 1e-9);

    // restart from the returned primal: value reproduces
    IpmOptions w;
    w.x0 = r.t;
    auto r2 = solve_spectral_min(p, w);
    CHECK(std::abs(r2.value - r.value) <= 1e-9 * (1.0 + std::abs(r.value)));
  }
}

TEST_CASE("unitary conjugation invariance of the minimum") {
  Rng rng(77);
  SpectralProgram p = random_program(2, 1, 4, rng);
  auto r1 = solve_spectral_min(p);
  const Matrix u = rng.unitary(4);
  const Matrix v = rng.unitary(4);
  SpectralProgram q = p;
  q.blocks[0].constant = u * p.blocks[0].constant * v;
  for (auto& cmat : q.blocks[0].coeff) cmat = u * cmat * v;
  auto r2 = solve_spectral_min(q);
  CHECK(std::abs(r1.value - r2.value) <= 1e-7 * (1 + r1.value));
}

TEST_CASE("solve_affine eliminates consistent equality constraints") {
  Eigen::MatrixXd a(2, 4);
  a << 1, 0, 1, 0, 0, 1, 0, 1;
  Eigen::VectorXd b(2);
  b << 2, 3;
  auto param = solve_affine(a, b);
  CHECK((a * param.x0 - b).norm() <= 1e-12);
  CHECK(param.basis.cols() == 2);
  CHECK((a * param.basis).norm() <= 1e-12);
}
