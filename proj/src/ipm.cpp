#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>

#include "opforge/convex.hpp"
#include "opforge/errors.hpp"

namespace opforge::convex {

double default_solver_tol() {
  static double tol = [] {
    if (const char* s = std::getenv("OPFORGE_SOLVER_TOL")) {
      const double v = std::atof(s);
      if (v > 0) return v;
    }
    return 1e-10;
  }();
  return tol;
}

namespace {

using Eigen::VectorXd;

struct BlockState {
  RealMatrix S, Z;       // slack and dual, both PD
  RealMatrix W;          // NT scaling, W Z W = S
  RealMatrix Winv;
  RealMatrix R;          // residual workspace
};

RealMatrix eval_block(const SdpBlock& b, const VectorXd& x) {
  RealMatrix f = b.F0;
  for (const BlockTerm& t : b.terms) f += x(t.var) * t.mat;
  return f;
}

double min_eig_sym(const RealMatrix& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// largest alpha in (0, cap] with S + alpha dS > 0
double max_step(const RealMatrix& S, const RealMatrix& dS, double cap) {
  Eigen::LLT<RealMatrix> llt(S);
  if (llt.info() != Eigen::Success) return 0.0;
  const RealMatrix L = llt.matrixL();
  RealMatrix T = L.triangularView<Eigen::Lower>().solve(dS);
  T = L.triangularView<Eigen::Lower>().solve(T.transpose()).eval();
  const double lmin = min_eig_sym(0.5 * (T + T.transpose()));
  if (lmin >= 0) return cap;
  return std::min(cap, -1.0 / lmin);
}

RealMatrix sym_inv_sqrt_pair(const RealMatrix& S, const RealMatrix& Z,
                             RealMatrix* Winv) {
  // W = Ls (Ls^T Z Ls)^{-1/2} Ls^T with S = Ls Ls^T
  Eigen::LLT<RealMatrix> llt(S);
  RealMatrix Ls = llt.matrixL();
  RealMatrix M = Ls.transpose() * Z * Ls;
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (M + M.transpose()));
  const VectorXd ev = es.eigenvalues().cwiseMax(1e-300);
  RealMatrix Mih = es.eigenvectors() *
                   ev.cwiseSqrt().cwiseInverse().asDiagonal() *
                   es.eigenvectors().transpose();
  RealMatrix Mh = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
                  es.eigenvectors().transpose();
  RealMatrix W = Ls * Mih * Ls.transpose();
  if (Winv) {
    // W^{-1} = Ls^{-T} M^{1/2} Ls^{-1}
    RealMatrix Lsi = Ls.inverse();
    *Winv = Lsi.transpose() * Mh * Lsi;
  }
  return 0.5 * (W + W.transpose()).eval();
}

}  // namespace

SdpResult solve_sdp(const SdpProblem& p, const IpmOptions& opts) {
  SdpResult res;
  const int m = p.nvars;
  const int nb = static_cast<int>(p.blocks.size());
  if (p.c.size() != m) fail(ErrorCode::BadInput, "solve_sdp: c size mismatch");

  if (m == 0) {
    // feasibility-only; nothing to optimize
    res.x = VectorXd::Zero(0);
    res.primal_value = 0;
    res.dual_value = 0;
    res.gap = 0;
    double me = kInf;
    for (const SdpBlock& b : p.blocks) me = std::min(me, min_eig_sym(b.F0));
    res.min_eig = (nb == 0) ? 0.0 : me;
    res.status = (res.min_eig >= -1e-12) ? SolveStatus::Optimal
                                         : SolveStatus::Infeasible;
    return res;
  }

  // problem scale for relative tolerances
  double fscale = 1.0;
  for (const SdpBlock& b : p.blocks) {
    fscale = std::max(fscale, b.F0.cwiseAbs().maxCoeff());
    for (const BlockTerm& t : b.terms)
      fscale = std::max(fscale, t.mat.cwiseAbs().maxCoeff());
  }
  const double cscale = std::max(1.0, p.c.cwiseAbs().maxCoeff());

  VectorXd x = VectorXd::Zero(m);
  if (opts.x0.size() == m) x = opts.x0;

  int total_dim = 0;
  std::vector<BlockState> st(nb);
  for (int b = 0; b < nb; ++b) {
    const int s = static_cast<int>(p.blocks[b].F0.rows());
    total_dim += s;
    RealMatrix F = eval_block(p.blocks[b], x);
    const double shift = std::max(1.0, -2.0 * min_eig_sym(F));
    st[b].S = F + shift * RealMatrix::Identity(s, s);
    st[b].Z = RealMatrix::Identity(s, s);
  }

  const double tol = opts.tol;
  double best_gap = kInf;
  int stall = 0;

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    res.iters = iter + 1;
    // residuals
    double mu = 0;
    for (int b = 0; b < nb; ++b) mu += (st[b].S.array() * st[b].Z.array()).sum();
    mu /= std::max(1, total_dim);

    VectorXd dres = p.c;  // c_i - sum <F_i, Z>
    for (int b = 0; b < nb; ++b)
      for (const BlockTerm& t : p.blocks[b].terms)
        dres(t.var) -= (t.mat.array() * st[b].Z.array()).sum();

    double pres = 0;
    for (int b = 0; b < nb; ++b) {
      st[b].R = eval_block(p.blocks[b], x) - st[b].S;
      pres = std::max(pres, st[b].R.cwiseAbs().maxCoeff());
    }

    const double rel_gap = mu / (1.0 + cscale);
    const double rel_p = pres / (1.0 + fscale);
    const double rel_d = dres.cwiseAbs().maxCoeff() / (1.0 + cscale);
    if (rel_gap < tol && rel_p < tol && rel_d < tol) break;

    const double progress = rel_gap + rel_p + rel_d;
    if (progress < best_gap * 0.999) {
      best_gap = progress;
      stall = 0;
    } else if (++stall > 30) {
      break;
    }

    // NT scaling
    for (int b = 0; b < nb; ++b)
      st[b].W = sym_inv_sqrt_pair(st[b].S, st[b].Z, &st[b].Winv);

    // Schur complement  M_ij = sum_b <F_i, W^{-1} F_j W^{-1}>
    RealMatrix M = RealMatrix::Zero(m, m);
    for (int b = 0; b < nb; ++b) {
      const auto& terms = p.blocks[b].terms;
      std::vector<RealMatrix> G(terms.size());
      for (size_t j = 0; j < terms.size(); ++j)
        G[j] = st[b].Winv * terms[j].mat * st[b].Winv;
      for (size_t i = 0; i < terms.size(); ++i)
        for (size_t j = i; j < terms.size(); ++j) {
          const double v = (terms[i].mat.array() * G[j].array()).sum();
          M(terms[i].var, terms[j].var) += v;
          if (terms[i].var != terms[j].var)
            M(terms[j].var, terms[i].var) += v;
        }
    }
    const double ridge = 1e-14 * (1.0 + M.diagonal().cwiseAbs().maxCoeff());
    M.diagonal().array() += ridge;
    Eigen::LDLT<RealMatrix> Mfac(M);
    auto refined_solve = [&](const VectorXd& rhs) {
      VectorXd sol = Mfac.solve(rhs);
      for (int pass = 0; pass < 2; ++pass) {
        VectorXd resid = rhs - M * sol;
        sol += Mfac.solve(resid);
      }
      return sol;
    };

    auto solve_direction = [&](double sigma, VectorXd& dx,
                               std::vector<RealMatrix>& dS,
                               std::vector<RealMatrix>& dZ) {
      VectorXd rhs = -dres;  // note: equation is A(dZ) = dres
      for (int b = 0; b < nb; ++b) {
        const int s = static_cast<int>(st[b].S.rows());
        // R_c = sigma*mu*Z^{-1} - S - P
        RealMatrix Zi = st[b].Z.inverse();
        RealMatrix Rc = sigma * mu * Zi - st[b].S - st[b].R;
        RealMatrix T = st[b].Winv * Rc * st[b].Winv;
        for (const BlockTerm& t : p.blocks[b].terms)
          rhs(t.var) += (t.mat.array() * T.array()).sum();
        dZ[b] = T;  // partial: full dZ adds -sum dx_i Winv F_i Winv
        (void)s;
      }
      dx = refined_solve(rhs);
      for (int b = 0; b < nb; ++b) {
        RealMatrix corr = RealMatrix::Zero(st[b].S.rows(), st[b].S.cols());
        for (const BlockTerm& t : p.blocks[b].terms)
          corr += dx(t.var) * (st[b].Winv * t.mat * st[b].Winv);
        dZ[b] -= corr;
        dZ[b] = 0.5 * (dZ[b] + dZ[b].transpose()).eval();
        dS[b] = st[b].R;
        for (const BlockTerm& t : p.blocks[b].terms)
          dS[b] += dx(t.var) * t.mat;
        dS[b] = 0.5 * (dS[b] + dS[b].transpose()).eval();
      }
    };

    VectorXd dx(m);
    std::vector<RealMatrix> dS(nb), dZ(nb);

    // predictor (sigma = 0) to choose centering
    solve_direction(0.0, dx, dS, dZ);
    double ap = 1.0, ad = 1.0;
    for (int b = 0; b < nb; ++b) {
      ap = std::min(ap, max_step(st[b].S, dS[b], 1.0));
      ad = std::min(ad, max_step(st[b].Z, dZ[b], 1.0));
    }
    double gap_aff = 0;
    for (int b = 0; b < nb; ++b)
      gap_aff += ((st[b].S + ap * dS[b]).array() *
                  (st[b].Z + ad * dZ[b]).array())
                     .sum();
    gap_aff = std::max(gap_aff / std::max(1, total_dim), 0.0);
    double sigma = std::pow(gap_aff / std::max(mu, 1e-300), 3.0);
    sigma = std::clamp(sigma, 1e-6, 0.9);

    // corrector
    solve_direction(sigma, dx, dS, dZ);
    ap = ad = 1.0;
    for (int b = 0; b < nb; ++b) {
      ap = std::min(ap, max_step(st[b].S, dS[b], 1.0));
      ad = std::min(ad, max_step(st[b].Z, dZ[b], 1.0));
    }
    ap *= opts.step_frac;
    ad *= opts.step_frac;
    if (ap <= 1e-14 && ad <= 1e-14) break;

    x += ap * dx;
    for (int b = 0; b < nb; ++b) {
      st[b].S += ap * dS[b];
      st[b].Z += ad * dZ[b];
    }
    if (!opts.quiet)
      std::cerr << "ipm iter " << iter << " mu=" << mu << " pres=" << pres
                << " sigma=" << sigma << "\n";
  }

  // final report
  res.x = x;
  res.primal_value = p.c.dot(x);
  double dv = 0, me = kInf, dres1 = 0, presf = 0;
  VectorXd dres = p.c;
  for (int b = 0; b < nb; ++b) {
    // clip Z to PSD for an honest dual certificate
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(st[b].Z);
    RealMatrix Zc = es.eigenvectors() *
                    es.eigenvalues().cwiseMax(0.0).asDiagonal() *
                    es.eigenvectors().transpose();
    dv -= (p.blocks[b].F0.array() * Zc.array()).sum();
    for (const BlockTerm& t : p.blocks[b].terms)
      dres(t.var) -= (t.mat.array() * Zc.array()).sum();
    RealMatrix F = eval_block(p.blocks[b], x);
    me = std::min(me, min_eig_sym(F));
    presf = std::max(presf, (F - st[b].S).cwiseAbs().maxCoeff());
  }
  dres1 = dres.cwiseAbs().sum();
  res.dual_value = dv;
  res.dual_residual = dres1;
  res.primal_residual = presf;
  res.min_eig = (nb == 0) ? 0.0 : me;
  const double xinf = (m > 0) ? x.cwiseAbs().maxCoeff() : 0.0;
  res.gap = std::abs(res.primal_value - res.dual_value) +
            dres1 * (1.0 + xinf);
  res.status = SolveStatus::Optimal;
  if (!(res.gap < std::sqrt(opts.tol) * (1.0 + std::abs(res.primal_value))))
    res.status = SolveStatus::Failure;
  return res;
}

AffineParam solve_affine(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                         double tol) {
  AffineParam out;
  if (A.rows() == 0) {
    out.x0 = Eigen::VectorXd::Zero(A.cols());
    out.basis = Eigen::MatrixXd::Identity(A.cols(), A.cols());
    return out;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      A, Eigen::ComputeFullV | Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double thresh = std::max(1e-13, 1e-12 * smax);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > thresh) ++rank;
  Eigen::VectorXd y = svd.matrixU().transpose() * b;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(A.cols());
  for (int i = 0; i < rank; ++i)
    w += (y(i) / sv(i)) * svd.matrixV().col(i);
  out.x0 = w;
  out.residual = (A * w - b).norm();
  if (out.residual > tol * std::max(1.0, b.norm()))
    fail(ErrorCode::SolverFailure, "solve_affine: inconsistent constraints");
  const int f = static_cast<int>(A.cols()) - rank;
  out.basis = svd.matrixV().rightCols(f);
  return out;
}

SdpProblem reparametrize(const SdpProblem& p, const AffineParam& param) {
  SdpProblem out;
  const int f = static_cast<int>(param.basis.cols());
  out.nvars = f;
  out.c = param.basis.transpose() * p.c;
  out.blocks.reserve(p.blocks.size());
  for (const SdpBlock& b : p.blocks) {
    SdpBlock nb;
    nb.F0 = b.F0;
    for (const BlockTerm& t : b.terms) nb.F0 += param.x0(t.var) * t.mat;
    // group new terms; keep only variables with nonzero influence
    std::vector<RealMatrix> acc(f);
    std::vector<bool> used(f, false);
    for (const BlockTerm& t : b.terms)
      for (int j = 0; j < f; ++j) {
        const double w = param.basis(t.var, j);
        if (std::abs(w) < 1e-300) continue;
        if (!used[j]) {
          acc[j] = RealMatrix::Zero(b.F0.rows(), b.F0.cols());
          used[j] = true;
        }
        acc[j] += w * t.mat;
      }
    for (int j = 0; j < f; ++j)
      if (used[j] && acc[j].cwiseAbs().maxCoeff() > 1e-300)
        nb.terms.push_back({j, std::move(acc[j])});
    out.blocks.push_back(std::move(nb));
  }
  return out;
}

SpectralResult solve_spectral_min(const SpectralProgram& p,
                                  const IpmOptions& opts_in) {
  SpectralResult out;
  const bool has_linear = p.linear.size() == p.nvars && p.nvars > 0;

  auto eval_at = [&](const Eigen::VectorXd& t) {
    double v = 0;
    for (const AffineNormBlock& b : p.blocks) {
      Matrix M = b.constant;
      for (int i = 0; i < p.nvars; ++i)
        if (i < static_cast<int>(b.coeff.size()) && b.coeff[i].size() > 0)
          M += t(i) * b.coeff[i];
      v = std::max(v, spectral_norm(M));
    }
    if (has_linear) v += p.linear.dot(t);
    return v;
  };

  if (p.nvars == 0) {
    out.status = SolveStatus::Optimal;
    out.t = Eigen::VectorXd::Zero(0);
    out.value = eval_at(out.t);
    out.dual_bound = out.value;
    out.gap = 0;
    return out;
  }

  // variables: [t_1..t_n, s]; minimize s (+ linear.t)
  SdpProblem sdp;
  sdp.nvars = p.nvars + 1;
  sdp.c = Eigen::VectorXd::Zero(sdp.nvars);
  sdp.c(p.nvars) = 1.0;
  if (has_linear) sdp.c.head(p.nvars) = p.linear;
  for (const AffineNormBlock& b : p.blocks) {
    const int r = static_cast<int>(b.constant.rows());
    const int cdim = static_cast<int>(b.constant.cols());
    const int q = r + cdim;
    SdpBlock blk;
    Matrix H0 = Matrix::Zero(q, q);
    H0.topRightCorner(r, cdim) = b.constant;
    H0.bottomLeftCorner(cdim, r) = b.constant.adjoint();
    blk.F0 = realify_hermitian(H0);
    {
      Matrix Hs = Matrix::Identity(q, q);
      blk.terms.push_back({p.nvars, realify_hermitian(Hs)});
    }
    for (int i = 0; i < p.nvars; ++i) {
      if (i >= static_cast<int>(b.coeff.size()) || b.coeff[i].size() == 0)
        continue;
      Matrix Hi = Matrix::Zero(q, q);
      Hi.topRightCorner(r, cdim) = b.coeff[i];
      Hi.bottomLeftCorner(cdim, r) = b.coeff[i].adjoint();
      blk.terms.push_back({i, realify_hermitian(Hi)});
    }
    sdp.blocks.push_back(std::move(blk));
  }

  IpmOptions opts = opts_in;
  if (opts.x0.size() == p.nvars) {
    Eigen::VectorXd x0(sdp.nvars);
    x0.head(p.nvars) = opts.x0;
    Eigen::VectorXd tt = opts.x0;
    x0(p.nvars) = eval_at(tt) + 1.0;
    opts.x0 = x0;
  }
  SdpResult r = solve_sdp(sdp, opts);
  out.iters = r.iters;
  out.t = r.x.head(p.nvars);
  out.value = eval_at(out.t);  // exact re-evaluation: honest upper endpoint
  out.dual_bound = r.dual_value - r.dual_residual * (1.0 + r.x.cwiseAbs().maxCoeff());
  out.gap = std::max(0.0, out.value - out.dual_bound);
  out.status = r.status;
  if (r.status == SolveStatus::Failure && out.gap < 1e-6 * (1 + std::abs(out.value)))
    out.status = SolveStatus::Optimal;  // good enough certificates despite stall
  return out;
}

}  // namespace opforge::convex
