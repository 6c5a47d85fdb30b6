#pragma once

// Linear algebra over the pseudo-Euclidean spaces R^{n+2}_q.

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lkgeo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Absolute tolerance on unit-scale quantities.
inline constexpr double kDefaultTol = 1e-8;

/// Raised when an operation is called outside its documented domain
/// (dimension mismatch, point off the quadric, bad sign, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Metric diag(-1,...,-1,+1,...,+1) on R^dim with `index` negative entries
/// placed first.
class Signature {
 public:
  Signature(int dim, int index);

  int dim() const { return dim_; }
  int index() const { return index_; }
  /// Diagonal entry of the metric at coordinate i (0-based).
  double sign(int i) const { return i < index_ ? -1.0 : 1.0; }
  /// G; satisfies G * G = I.
  Matrix metric() const;
  /// G * x.
  Vector lower(const Vector& x) const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  int dim_;
  int index_;
};

/// The Lorentzian space form M^{n+1}_c: De Sitter space in R^{n+2}_1 when
/// c = +1, anti De Sitter space in R^{n+2}_2 when c = -1.
class AmbientSpaceForm {
 public:
  AmbientSpaceForm(int c, int n);

  int c() const { return c_; }
  int n() const { return n_; }
  int dim() const { return signature_.dim(); }
  const Signature& signature() const { return signature_; }

  /// |<x,x> - c| <= tol * (1 + |x|^2).
  bool contains(const Vector& x, double tol = kDefaultTol) const;

 private:
  int c_;
  int n_;
  Signature signature_;
};

/// -sum_{i<q} x_i y_i + sum_{i>=q} x_i y_i.
double inner(const Vector& x, const Vector& y, const Signature& sig);

/// max |G M - (G M)^T|.
double self_adjoint_defect(const Matrix& M, const Signature& sig);
/// Same, for an arbitrary symmetric Gram matrix (tangent spaces).
double self_adjoint_defect(const Matrix& M, const Matrix& gram);

bool is_metric_self_adjoint(const Matrix& M, const Signature& sig,
                            double tol = kDefaultTol);

/// Thrown when the Krylov sequence shows no clear rank gap.
class IllConditionedError : public std::runtime_error {
 public:
  IllConditionedError(const std::string& what, std::vector<double> profile)
      : std::runtime_error(what), singular_values(std::move(profile)) {}
  std::vector<double> singular_values;
};

/// Monic polynomial, coefficients in ascending order: p(t) = sum coeffs[j] t^j
/// with coeffs.back() == 1.
struct MinimalPolynomial {
  std::vector<double> coeffs;
  /// Singular values of the normalized Krylov matrix at the accepted degree.
  std::vector<double> singular_values;
  /// ||p(M)||_F / (1 + ||M||_F^deg).
  double relative_residual = 0.0;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  /// Discriminant; only meaningful for degree 2.
  double discriminant() const;
};

/// Relative drop between consecutive singular values that marks a rank
/// deficiency in the Krylov sequence.
inline constexpr double kKrylovGapRatio = 1e-6;

/// Least-degree monic p with p(M) ~ 0, found from the first rank deficiency
/// of {vec(I), vec(M), vec(M^2), ...}.
MinimalPolynomial minimal_polynomial(const Matrix& M, double tol = kDefaultTol);

/// p(M) for ascending coefficients.
Matrix evaluate_polynomial(const std::vector<double>& coeffs, const Matrix& M);

/// Remainder of num / den (ascending coefficients, den monic).
std::vector<double> polynomial_remainder(std::vector<double> num,
                                         const std::vector<double>& den);

/// Metric-orthogonal complement of span{x, N} at a point of M^{n+1}_c.
struct TangentSpace {
  Vector base_point;
  Vector normal;
  /// dim x n, columns are the basis vectors (not orthonormalized).
  Matrix basis;
  /// n x n, gram(i,j) = <basis_i, basis_j>.
  Matrix gram;
  /// <N, N>.
  int eps = 0;

  int n() const { return static_cast<int>(basis.cols()); }
  /// Coordinates in `basis` of an ambient vector assumed tangent.
  Vector coordinates(const Vector& v, const Signature& sig) const;
};

TangentSpace tangent_space(const Vector& x, const Vector& N,
                           const AmbientSpaceForm& space,
                           double tol = kDefaultTol);

/// Number of negative eigenvalues of a symmetric matrix.
int negative_inertia(const Matrix& sym);

}  // namespace lkgeo
