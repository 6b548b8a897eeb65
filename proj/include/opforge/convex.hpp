#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "opforge/matrix.hpp"

namespace opforge::convex {

// minimize c.x  subject to  F0_b + sum_i x_i F_{b,i} >= 0  per block b.
// Blocks store only the variables they touch.
struct BlockTerm {
  int var;
  RealMatrix mat;  // symmetric
};

struct SdpBlock {
  RealMatrix F0;
  std::vector<BlockTerm> terms;
};

struct SdpProblem {
  int nvars = 0;
  Eigen::VectorXd c;
  std::vector<SdpBlock> blocks;
};

enum class SolveStatus { Optimal, Infeasible, Failure };

struct IpmOptions {
  int max_iters = 200;
  double tol = 1e-10;        // complementarity and residual target (relative)
  double step_frac = 0.98;
  Eigen::VectorXd x0;        // optional warm start
  bool quiet = true;
};

struct SdpResult {
  SolveStatus status = SolveStatus::Failure;
  Eigen::VectorXd x;
  double primal_value = 0.0;     // c.x at the returned point
  double dual_value = 0.0;       // -<F0, Z>, lower bound modulo dual residual
  double gap = kInf;             // primal_value - dual_value + residual slack
  double min_eig = 0.0;          // min eigenvalue of F(x) over blocks
  double dual_residual = 0.0;    // sum_i |<F_i, Z> - c_i|
  double primal_residual = 0.0;  // IPM internal ||F(x) - S||
  int iters = 0;
};

SdpResult solve_sdp(const SdpProblem& p, const IpmOptions& opts = {});

// Solver tolerance override hook (env OPFORGE_SOLVER_TOL).
double default_solver_tol();

// --- affine reparametrization helpers -------------------------------------

// x = x0 + basis . xi, solving A x = b in least squares (residual must be
// below tol * scale, else throws).
struct AffineParam {
  Eigen::VectorXd x0;
  Eigen::MatrixXd basis;  // m x f, orthonormal columns spanning ker A
  double residual = 0.0;
};

AffineParam solve_affine(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                         double tol = 1e-9);

SdpProblem reparametrize(const SdpProblem& p, const AffineParam& param);

// --- spectral-norm programs ------------------------------------------------

// minimize  max_b || A0_b + sum_i t_i A_i_b ||  (+ linear.t)  over real t.
struct AffineNormBlock {
  Matrix constant;
  std::vector<Matrix> coeff;  // one per variable (may be empty matrices = zero)
};

struct SpectralProgram {
  int nvars = 0;
  std::vector<AffineNormBlock> blocks;
  Eigen::VectorXd linear;  // optional linear objective term (size nvars or 0)
};

struct SpectralResult {
  SolveStatus status = SolveStatus::Failure;
  double value = 0.0;            // certified upper: exact re-evaluation at t
  double dual_bound = 0.0;       // certified-ish lower from SDP duality
  double gap = kInf;
  Eigen::VectorXd t;
  int iters = 0;
};

SpectralResult solve_spectral_min(const SpectralProgram& p,
                                  const IpmOptions& opts = {});

// Largest real part of a linear functional over the unit ball of a concrete
// matrix-normed space: used for exact dual norms. Returns certified
// [lower, upper] = [achieved, dual-corrected].
struct BallMaxResult {
  SolveStatus status = SolveStatus::Failure;
  double lower = 0.0;   // objective at the returned feasible point
  double upper = kInf;  // weak-duality bound
  Eigen::VectorXcd xstar;
  int iters = 0;
};

}  // namespace opforge::convex
