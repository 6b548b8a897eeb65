#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "opforge/matrix.hpp"

namespace opforge {

// How an upper endpoint is backed. Lower endpoints are always backed by a
// witness (re-evaluating it reproduces the bound).
enum class CertKind {
  Exact,       // direct evaluation on a concrete representation
  Structural,  // coordinate-slice / unitary-conjugation pattern, exact by form
  SdpDual,     // interior-point solve, duality-gap certified, feasibility-bumped
  Triangle,    // sum/product of certified bounds
  Grid,        // Lipschitz-covered grid bound
  Unbounded,   // no upper information
};

const char* cert_kind_name(CertKind k);

// Witness for a lower endpoint: an input element (coefficients at `level`)
// together with the value it achieves.
struct Witness {
  std::vector<Matrix> coeff;
  int level = 1;
  double achieved = 0.0;
};

// Certified interval [lower, upper].
struct NormBound {
  double lower = 0.0;
  double upper = kInf;
  CertKind upper_kind = CertKind::Unbounded;
  std::string note;
  std::optional<Witness> witness;

  bool exact() const { return upper_kind == CertKind::Exact && upper == lower; }
  double width() const { return upper - lower; }

  static NormBound exactly(double v, std::string note = {}) {
    NormBound b;
    b.lower = b.upper = v;
    b.upper_kind = CertKind::Exact;
    b.note = std::move(note);
    return b;
  }

  static NormBound interval(double lo, double hi, CertKind kind,
                            std::string note = {}) {
    NormBound b;
    b.lower = lo;
    b.upper = hi;
    b.upper_kind = kind;
    b.note = std::move(note);
    return b;
  }

  // Tightest combination of two bounds for the same quantity.
  NormBound meet(const NormBound& other) const {
    NormBound b = *this;
    if (other.lower > b.lower) {
      b.lower = other.lower;
      b.witness = other.witness;
    }
    if (other.upper < b.upper) {
      b.upper = other.upper;
      b.upper_kind = other.upper_kind;
      b.note = other.note;
    }
    return b;
  }
};

inline const char* cert_kind_name(CertKind k) {
  switch (k) {
    case CertKind::Exact: return "exact";
    case CertKind::Structural: return "structural";
    case CertKind::SdpDual: return "sdp-dual";
    case CertKind::Triangle: return "triangle";
    case CertKind::Grid: return "grid";
    case CertKind::Unbounded: return "unbounded";
  }
  return "unknown";
}

}  // namespace opforge
