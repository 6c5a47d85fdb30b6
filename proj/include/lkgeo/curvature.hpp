#pragma once

// Characteristic coefficients, higher-order mean curvatures and Newton
// transformations of a shape operator.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lkgeo/indefinite_linalg.hpp"

namespace lkgeo {

/// Shape operator of a hypersurface at one point, written in some basis of
/// the tangent space together with the Gram matrix of that basis.
struct ShapeData {
  Matrix S;
  Matrix gram;
  int eps = 1;  ///< <N, N>
  int c = 1;    ///< curvature of the ambient space form

  int n() const { return static_cast<int>(S.rows()); }

  /// Validates dimensions, signs and metric self-adjointness of S.
  static ShapeData make(Matrix S, Matrix gram, int eps, int c, double tol = kDefaultTol);
};

/// Raised when P_n fails to vanish (Cayley-Hamilton), which means the
/// characteristic coefficients are not consistent with S.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact binomial coefficient; valid for 0 <= n <= 62.
std::uint64_t binomial(int n, int k);

/// a_0..a_n of det(tI - S) by the Leverrier-Faddeev recursion
/// a_k = -(1/k) sum_{j=1..k} a_{k-j} tr(S^j).
std::vector<double> char_coeffs(const Matrix& S);
inline std::vector<double> char_coeffs(const ShapeData& s) { return char_coeffs(s.S); }

/// H_k = (-eps)^k a_k / binom(n, k).
std::vector<double> mean_curvatures(const std::vector<double>& a, int eps, int n);

/// P_0 = I, P_k = a_k I + S P_{k-1}, for k = 0..n. Throws ConsistencyError
/// when ||P_n||_max > tol * max(1, ||S||)^n.
std::vector<Matrix> newton_transforms(const Matrix& S, const std::vector<double>& a,
                                      double tol = kDefaultTol);

/// c_k = (-eps)^k (n - k) binom(n, k).
double newton_constant(int n, int k, int eps);

struct CurvatureProfile {
  int n = 0;
  int eps = 1;
  std::vector<double> a;   ///< a_0..a_n
  std::vector<double> H;   ///< H_0..H_n
  std::vector<Matrix> P;   ///< P_0..P_n
  std::vector<double> ck;  ///< c_0..c_n
  std::vector<double> Ck;  ///< C_k = c_k / (k + 1)

  /// H_k with the convention H_k = 0 for k > n.
  double H_at(int k) const { return k >= 0 && k <= n ? H[k] : 0.0; }
  /// a_k with a_k = 0 outside 0..n.
  double a_at(int k) const { return k >= 0 && k <= n ? a[k] : 0.0; }
};

CurvatureProfile curvature_profile(const ShapeData& shape, double tol = kDefaultTol);

/// One trace identity: the measured trace and its two closed forms.
struct TraceIdentity {
  int k = 0;
  double measured = 0.0;
  double from_coeffs = 0.0;     ///< in terms of a_k
  double from_curvature = 0.0;  ///< in terms of c_k, C_k, H_k
};

/// tr(P_k), tr(S P_k), tr(S^2 P_k) for every k = 0..n-1, each with the
/// closed forms (n-k)a_k = c_k H_k, -(k+1)a_{k+1} = eps c_k H_{k+1} and
/// a_1 a_{k+1} - (k+2) a_{k+2} = C_k (n H_1 H_{k+1} - (n-k-1) H_{k+2}).
struct TraceReport {
  std::vector<TraceIdentity> trP;
  std::vector<TraceIdentity> trSP;
  std::vector<TraceIdentity> trS2P;
};

TraceReport lemma1_traces(const Matrix& S, const CurvatureProfile& profile);

/// Elementary symmetric polynomial of degree k in the kappas whose (1-based)
/// indices are not in J. mu_0 = 1; mu_k = 0 for k < 0 or k > n - |J|.
double mu_subset(std::span<const double> kappas, int k, std::span<const int> J = {});

struct RicciScalar {
  Matrix ric;           ///< Ric(E_i, E_j) in the tangent basis
  double scal_trace;    ///< tr(gram^{-1} Ric)
  double scal_closed;   ///< n(n-1)(c + eps H_2)
};

RicciScalar ricci_and_scalar(const ShapeData& shape, const CurvatureProfile& profile);

}  // namespace lkgeo
