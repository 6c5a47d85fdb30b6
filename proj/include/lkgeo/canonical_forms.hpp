#pragma once

// The four normal forms of a metric-self-adjoint operator on a Lorentzian
// inner-product space, and the P_k actions in the corresponding frames.

#include <stdexcept>
#include <string>
#include <vector>

#include "lkgeo/curvature.hpp"

namespace lkgeo {

enum class CanonicalKind { I, II, III, IV };
enum class FrameKind { orthonormal, pseudo_orthonormal };

std::string to_string(CanonicalKind kind);

/// Kind I:   diag(kappas).
/// Kind II:  S E1 = k E1 - b E2, S E2 = b E1 + k E2, S Ei = kappa_i Ei.
/// Kind III: S E1 = k E1 + E2, S E2 = k E2, S Ei = kappa_i Ei.
/// Kind IV:  S E1 = k E1 - E3, S E2 = k E2, S E3 = E2 + k E3, S Ei = kappa_i Ei.
/// `kappas` holds the principal curvatures outside the special block.
struct CanonicalForm {
  CanonicalKind kind = CanonicalKind::I;
  double kappa = 0.0;
  double b_rot = 0.0;
  std::vector<double> kappas;
  FrameKind frame_kind = FrameKind::orthonormal;

  int block_size() const;
  int n() const { return block_size() + static_cast<int>(kappas.size()); }
  /// kappa_1..kappa_n with the special block filled by kappa.
  std::vector<double> principal_list() const;
};

CanonicalForm make_canonical(CanonicalKind kind, double kappa, double b_rot,
                             std::vector<double> kappas);

/// Matrix of S in the canonical frame (column j holds S E_j).
Matrix canonical_shape(const CanonicalForm& form);

/// Gram matrix of the canonical frame. Orthonormal: diag(-1, 1, ..., 1).
/// Pseudo-orthonormal: <E1,E2> = -1, <E1,E1> = <E2,E2> = 0; for kind IV
/// additionally <E3,E3> = 1; Euclidean on the remaining vectors.
Matrix canonical_gram(const CanonicalForm& form);

class ClassificationError : public std::runtime_error {
 public:
  ClassificationError(const std::string& what, std::vector<CanonicalKind> kinds)
      : std::runtime_error(what), candidates(std::move(kinds)) {}
  std::vector<CanonicalKind> candidates;
};

/// Determines the canonical type from the Jordan data of S: eigenvalue
/// clusters, then the rank sequence of (S - kappa I)^j for each cluster,
/// cross-checked against the degree of the minimal polynomial.
CanonicalForm classify(const Matrix& S, double tol = kDefaultTol);
inline CanonicalForm classify(const ShapeData& s, double tol = kDefaultTol) {
  return classify(s.S, tol);
}

/// P_k in the canonical frame from the closed mu-formulas.
Matrix canonical_pk_expected(const CanonicalForm& form, int k);

struct PkCheck {
  bool ok = false;
  double deviation = 0.0;
  double bound = 0.0;
};

/// Compares the recursion P_k = a_k I + S P_{k-1} against the mu-formulas
/// column by column; bound = tol * max(1, ||S||)^k.
PkCheck canonical_pk_check(const CanonicalForm& form, int k, double tol = 1e-9);

}  // namespace lkgeo
