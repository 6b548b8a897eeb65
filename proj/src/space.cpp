#include "opforge/space.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

namespace opforge {

void AmbientSignature::validate() const {
  if (blocks.empty())
    fail(ErrorCode::BadInput, "ambient signature must be nonempty");
  for (int m : blocks)
    if (m < 1) fail(ErrorCode::BadInput, "ambient block sizes must be >= 1");
}

AmbientSignature concat(const AmbientSignature& a, const AmbientSignature& b) {
  AmbientSignature out = a;
  out.blocks.insert(out.blocks.end(), b.blocks.begin(), b.blocks.end());
  return out;
}

void SpaceElement::validate() const {
  if (!space) fail(ErrorCode::BadInput, "element without space");
  if (static_cast<int>(coeff.size()) != space->dim())
    fail(ErrorCode::DimensionMismatch, "coefficient count != dim(space)");
  for (const Matrix& a : coeff) {
    if (a.rows() != level || a.cols() != level)
      fail(ErrorCode::DimensionMismatch, "coefficient is not level x level");
    if (!all_finite(a)) fail(ErrorCode::BadInput, "non-finite coefficient");
  }
  if (level > space->level_cap())
    fail(ErrorCode::LevelExceeded, "level above the space's cap");
}

int ConcreteSpace::level_cap() const { return INT_MAX; }

static void check_tuple_conforms(const AmbientSignature& ambient,
                                 const MatrixTuple& t) {
  if (static_cast<int>(t.size()) != ambient.block_count())
    fail(ErrorCode::DimensionMismatch, "tuple block count != ambient");
  for (int j = 0; j < ambient.block_count(); ++j) {
    if (t[j].rows() != ambient.blocks[j] || t[j].cols() != ambient.blocks[j])
      fail(ErrorCode::DimensionMismatch, "tuple block has wrong shape");
    if (!all_finite(t[j])) fail(ErrorCode::BadInput, "non-finite tuple entry");
  }
}

std::shared_ptr<const ConcreteSpace> ConcreteSpace::create(
    AmbientSignature ambient, std::vector<MatrixTuple> basis, std::string label,
    bool allow_empty) {
  ambient.validate();
  if (basis.empty() && !allow_empty)
    fail(ErrorCode::BadInput, "basis must be nonempty");
  for (const MatrixTuple& t : basis) check_tuple_conforms(ambient, t);

  auto sp = std::make_shared<ConcreteSpace>();
  sp->ambient = std::move(ambient);
  sp->basis = std::move(basis);
  sp->label = std::move(label);

  const int d = sp->dim();
  const int total = sp->ambient.total_dim();
  sp->basis_flat_.resize(total, d);
  for (int i = 0; i < d; ++i) {
    int off = 0;
    for (int j = 0; j < sp->ambient.block_count(); ++j) {
      const int sz = sp->ambient.blocks[j] * sp->ambient.blocks[j];
      sp->basis_flat_.block(off, i, sz, 1) = vec(sp->basis[i][j]);
      off += sz;
    }
  }
  if (d > 0) {
    if (d > total)
      fail(ErrorCode::LinearlyDependentBasis,
           "more basis tuples than ambient dimension");
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sp->basis_flat_);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    sp->sigma_min_ = smin;
    if (smax <= 0.0 || smin <= 1e-10 * smax)
      fail(ErrorCode::LinearlyDependentBasis,
           "basis is linearly dependent at tolerance 1e-10");
  }
  return sp;
}

ConcretePtr make_space(const AmbientSignature& ambient,
                       std::vector<MatrixTuple> basis, std::string label) {
  return ConcreteSpace::create(ambient, std::move(basis), std::move(label));
}

Matrix ConcreteSpace::element_block(const std::vector<Matrix>& coeff, int level,
                                    int block) const {
  const int m = ambient.blocks[block];
  Matrix out = Matrix::Zero(level * m, level * m);
  for (int i = 0; i < dim(); ++i) out += kron(coeff[i], basis[i][block]);
  return out;
}

NormBound ConcreteSpace::norm_bounds(const std::vector<Matrix>& coeff,
                                     int level, const EvalBudget&) const {
  double v = 0.0;
  for (int j = 0; j < ambient.block_count(); ++j)
    v = std::max(v, spectral_norm(element_block(coeff, level, j)));
  return NormBound::exactly(v);
}

Eigen::VectorXcd ConcreteSpace::coordinates(const MatrixTuple& tuple,
                                            double tol) const {
  check_tuple_conforms(ambient, tuple);
  Eigen::VectorXcd rhs(ambient.total_dim());
  int off = 0;
  for (int j = 0; j < ambient.block_count(); ++j) {
    const int sz = ambient.blocks[j] * ambient.blocks[j];
    rhs.segment(off, sz) = vec(tuple[j]);
    off += sz;
  }
  Eigen::VectorXcd x =
      basis_flat_.colPivHouseholderQr().solve(rhs);
  const double resid = (basis_flat_ * x - rhs).norm();
  const double scale = std::max(1.0, rhs.norm());
  if (resid > tol * scale)
    fail(ErrorCode::BadInput, "tuple is not in the span of the basis");
  return x;
}

MatrixTuple ConcreteSpace::tuple_of(const Eigen::VectorXcd& coords) const {
  if (coords.size() != dim())
    fail(ErrorCode::DimensionMismatch, "coordinate length != dim");
  MatrixTuple out;
  out.reserve(ambient.block_count());
  for (int j = 0; j < ambient.block_count(); ++j) {
    const int m = ambient.blocks[j];
    Matrix b = Matrix::Zero(m, m);
    for (int i = 0; i < dim(); ++i) b += coords(i) * basis[i][j];
    out.push_back(std::move(b));
  }
  return out;
}

double level_norm(const SpaceElement& x) {
  x.validate();
  const ConcreteSpace* c = x.space->as_concrete();
  if (c) {
    double v = 0.0;
    for (int j = 0; j < c->ambient.block_count(); ++j)
      v = std::max(v, spectral_norm(c->element_block(x.coeff, x.level, j)));
    return v;
  }
  fail(ErrorCode::BadInput, "level_norm requires a concrete space");
}

ConcretePtr build_linfty(int k) {
  if (k < 1) fail(ErrorCode::BadInput, "build_linfty: k >= 1 required");
  AmbientSignature amb;
  amb.blocks.assign(k, 1);
  std::vector<MatrixTuple> basis(k);
  for (int i = 0; i < k; ++i) {
    basis[i].assign(k, Matrix::Zero(1, 1));
    basis[i][i](0, 0) = 1.0;
  }
  std::ostringstream name;
  name << "linf(" << k << ")";
  return make_space(amb, std::move(basis), name.str());
}

ConcretePtr build_full_algebra(int m) {
  if (m < 1) fail(ErrorCode::BadInput, "build_full_algebra: m >= 1 required");
  AmbientSignature amb;
  amb.blocks = {m};
  std::vector<MatrixTuple> basis;
  basis.reserve(m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) basis.push_back({matrix_unit(m, i, j)});
  std::ostringstream name;
  name << "M" << m;
  return make_space(amb, std::move(basis), name.str());
}

ConcretePtr random_space(const AmbientSignature& ambient, int dim,
                         std::uint64_t seed) {
  ambient.validate();
  if (dim < 1 || dim > ambient.total_dim())
    fail(ErrorCode::BadInput, "random_space: need 1 <= d <= total ambient dim");
  Rng rng(seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<MatrixTuple> basis(dim);
    for (int i = 0; i < dim; ++i)
      for (int m : ambient.blocks) basis[i].push_back(rng.ginibre(m, m));
    try {
      std::ostringstream name;
      name << "random(seed=" << seed << ")";
      return make_space(ambient, std::move(basis), name.str());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::LinearlyDependentBasis) throw;
    }
  }
  fail(ErrorCode::RandomnessExhausted,
       "random_space: 100 redraws without an independent basis");
}

SpaceElement random_element(const SpacePtr& space, int level, Rng& rng) {
  SpaceElement x;
  x.space = space;
  x.level = level;
  x.coeff.reserve(space->dim());
  for (int i = 0; i < space->dim(); ++i)
    x.coeff.push_back(rng.ginibre(level, level));
  return x;
}

SpaceElement element_from_coords(const SpacePtr& space,
                                 const Eigen::VectorXcd& coords) {
  if (coords.size() != space->dim())
    fail(ErrorCode::DimensionMismatch, "coords length != dim");
  SpaceElement x;
  x.space = space;
  x.level = 1;
  for (int i = 0; i < space->dim(); ++i) {
    Matrix a(1, 1);
    a(0, 0) = coords(i);
    x.coeff.push_back(a);
  }
  return x;
}

namespace {

double upper_of(const Space& s, const std::vector<Matrix>& coeff, int level,
                const EvalBudget& b) {
  return s.norm_bounds(coeff, level, b).upper;
}
double lower_of(const Space& s, const std::vector<Matrix>& coeff, int level,
                const EvalBudget& b) {
  return s.norm_bounds(coeff, level, b).lower;
}

}  // namespace

AxiomReport check_ruan(const Space& space, int sample_count, std::uint64_t seed,
                       double /*tol*/) {
  if (sample_count < 1) fail(ErrorCode::BadInput, "sample_count >= 1");
  Rng rng(seed);
  AxiomReport rep;
  rep.samples = sample_count;
  EvalBudget eb{64, seed};
  const int kmax = std::min(3, space.level_cap());
  const int d = space.dim();

  for (int s = 0; s < sample_count; ++s) {
    // Ruan inequality with rectangular alpha_i in M_{k,k_i}, beta_i in M_{k_i,k}
    const int terms = rng.uniform_int(1, 3);
    const int k = rng.uniform_int(1, kmax);
    Matrix lhs_a2 = Matrix::Zero(k, k);  // sum alpha alpha*
    Matrix lhs_b2 = Matrix::Zero(k, k);  // sum beta* beta
    std::vector<Matrix> sum_coeff(d, Matrix::Zero(k, k));
    double max_x = 0.0;
    for (int t = 0; t < terms; ++t) {
      const int ki = rng.uniform_int(1, kmax);
      const Matrix alpha = rng.ginibre(k, ki);
      const Matrix beta = rng.ginibre(ki, k);
      std::vector<Matrix> xc(d);
      for (int i = 0; i < d; ++i) xc[i] = rng.ginibre(ki, ki);
      max_x = std::max(max_x, upper_of(space, xc, ki, eb));
      for (int i = 0; i < d; ++i) sum_coeff[i] += alpha * xc[i] * beta;
      lhs_a2 += alpha * alpha.adjoint();
      lhs_b2 += beta.adjoint() * beta;
    }
    const double lhs = lower_of(space, sum_coeff, k, eb);
    const double rhs = std::sqrt(spectral_norm(lhs_a2)) * max_x *
                       std::sqrt(spectral_norm(lhs_b2));
    rep.max_ruan_violation = std::max(rep.max_ruan_violation, lhs - rhs);

    // L-infinity axiom on a direct-sum coefficient layout
    if (kmax >= 2) {
      const int k1 = rng.uniform_int(1, kmax - 1);
      const int k2 = rng.uniform_int(1, kmax - k1);
      std::vector<Matrix> xc(d), yc(d), dc(d);
      for (int i = 0; i < d; ++i) {
        xc[i] = rng.ginibre(k1, k1);
        yc[i] = rng.ginibre(k2, k2);
        Matrix q = Matrix::Zero(k1 + k2, k1 + k2);
        q.topLeftCorner(k1, k1) = xc[i];
        q.bottomRightCorner(k2, k2) = yc[i];
        dc[i] = q;
      }
      const NormBound nx = space.norm_bounds(xc, k1, eb);
      const NormBound ny = space.norm_bounds(yc, k2, eb);
      const NormBound nd = space.norm_bounds(dc, k1 + k2, eb);
      // certified violation of |diag(x,y)| = max(|x|,|y|)
      const double viol =
          std::max(nd.lower - std::max(nx.upper, ny.upper),
                   std::max(nx.lower, ny.lower) - nd.upper);
      rep.max_linf_violation = std::max(rep.max_linf_violation, viol);
    }
  }
  return rep;
}

}  // namespace opforge
