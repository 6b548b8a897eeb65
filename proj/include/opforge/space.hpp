#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "opforge/matrix.hpp"
#include "opforge/normbound.hpp"
#include "opforge/rng.hpp"

namespace opforge {

// Ordered list of matrix-algebra dimensions [m_1, ..., m_r]; the ambient
// direct sum M_{m_1} (+)inf ... (+)inf M_{m_r}.
struct AmbientSignature {
  std::vector<int> blocks;

  int block_count() const { return static_cast<int>(blocks.size()); }
  int total_dim() const {  // sum of m_j^2, dimension as a vector space
    int t = 0;
    for (int m : blocks) t += m * m;
    return t;
  }
  int max_block() const {
    int t = 0;
    for (int m : blocks) t = std::max(t, m);
    return t;
  }
  void validate() const;
  bool operator==(const AmbientSignature& o) const { return blocks == o.blocks; }
};

AmbientSignature concat(const AmbientSignature& a, const AmbientSignature& b);

struct EvalBudget {
  int budget = 200;
  std::uint64_t seed = 1;
};

class ConcreteSpace;

// A finite-dimensional matrix-normed space. Concrete spaces evaluate their
// level norms exactly; derived spaces return certified intervals.
class Space {
 public:
  virtual ~Space() = default;

  virtual int dim() const = 0;
  // Highest level at which norms are defined (INT_MAX when unrestricted).
  virtual int level_cap() const = 0;
  virtual NormBound norm_bounds(const std::vector<Matrix>& coeff, int level,
                                const EvalBudget& budget) const = 0;
  virtual const ConcreteSpace* as_concrete() const { return nullptr; }
  virtual std::string kind() const = 0;

  std::string label;
};

using SpacePtr = std::shared_ptr<const Space>;

// Level-k element sum_i alpha_i (x) b_i of M_k(X), stored by its coefficient
// tuple of k x k matrices.
struct SpaceElement {
  SpacePtr space;
  int level = 1;
  std::vector<Matrix> coeff;

  void validate() const;
};

// A subspace of a direct sum of matrix algebras, given by a basis of matrix
// tuples. The universal carrier of all norms.
class ConcreteSpace : public Space,
                      public std::enable_shared_from_this<ConcreteSpace> {
 public:
  AmbientSignature ambient;
  std::vector<MatrixTuple> basis;  // d tuples, one matrix per ambient block

  int dim() const override { return static_cast<int>(basis.size()); }
  int level_cap() const override;
  std::string kind() const override { return "concrete"; }
  const ConcreteSpace* as_concrete() const override { return this; }

  NormBound norm_bounds(const std::vector<Matrix>& coeff, int level,
                        const EvalBudget&) const override;

  // sum_i alpha_i (x) b_i^{(j)} for ambient block j.
  Matrix element_block(const std::vector<Matrix>& coeff, int level,
                       int block) const;

  // Flattened basis: column i stacks vec(b_i^{(j)}) over blocks j.
  const Eigen::MatrixXcd& basis_flat() const { return basis_flat_; }

  // Coordinates of an ambient tuple in this basis; throws if the tuple is
  // not in the span (residual above tol).
  Eigen::VectorXcd coordinates(const MatrixTuple& tuple,
                               double tol = 1e-8) const;

  // Ambient tuple of the level-1 element with the given coordinates.
  MatrixTuple tuple_of(const Eigen::VectorXcd& coords) const;

  double smallest_basis_singular_value() const { return sigma_min_; }

  static std::shared_ptr<const ConcreteSpace> create(
      AmbientSignature ambient, std::vector<MatrixTuple> basis,
      std::string label, bool allow_empty = false);

 private:
  Eigen::MatrixXcd basis_flat_;
  double sigma_min_ = 0.0;
};

using ConcretePtr = std::shared_ptr<const ConcreteSpace>;

// --- core-spaces operations ---------------------------------------------

// Construction with validation; rejects dependent bases (rank tolerance
// 1e-10 on the stacked coefficient matrix).
ConcretePtr make_space(const AmbientSignature& ambient,
                       std::vector<MatrixTuple> basis, std::string label = {});

// max over ambient blocks of the spectral norm of sum_i alpha_i (x) b_i^{(j)}
double level_norm(const SpaceElement& x);

// ell-infinity(k): ambient [1,...,1], coordinate basis.
ConcretePtr build_linfty(int k);

// Full matrix algebra M_m as a concrete space (matrix-unit basis).
ConcretePtr build_full_algebra(int m);

// Deterministic Ginibre basis; re-drawn on rank deficiency (at most 100
// attempts, then RandomnessExhausted).
ConcretePtr random_space(const AmbientSignature& ambient, int dim,
                         std::uint64_t seed);

SpaceElement random_element(const SpacePtr& space, int level, Rng& rng);

SpaceElement element_from_coords(const SpacePtr& space,
                                 const Eigen::VectorXcd& coords);

// Axiom checker report.
struct AxiomReport {
  double max_ruan_violation = 0.0;
  double max_linf_violation = 0.0;
  int samples = 0;
  bool passed(double tol) const {
    return max_ruan_violation <= tol && max_linf_violation <= tol;
  }
};

// Samples the reformulated Ruan inequality
//   |sum_i a_i . x_i . b_i| <= |sum a_i a_i*|^(1/2) max_i|x_i| |sum b_i* b_i|^(1/2)
// together with the L-infinity condition |diag(x,y)| = max(|x|,|y|).
AxiomReport check_ruan(const Space& space, int sample_count,
                       std::uint64_t seed, double tol);

}  // namespace opforge
