#pragma once

// Pointwise evaluation of L_k on coordinate functions and on the Gauss map,
// least-squares recovery of (A, b) from samples, and the algebraic checks
// that follow from L_k psi = A psi + b.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lkgeo/catalog.hpp"
#include "lkgeo/curvature.hpp"

namespace lkgeo {

class RecoveryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// tangential part of a: a - eps <a,N> N - c <a,x> x.
Vector grad_coord(const Vector& a, const Vector& x, const Vector& N,
                  const AmbientSpaceForm& space);

/// Hessian of <a, psi> as an endomorphism of the tangent space:
/// eps <a,N> S - c <a,x> I.
Matrix hessian_coord(const Vector& a, const ShapeData& shape, const Vector& x,
                     const Vector& N, const Signature& sig);

struct PointEvaluation {
  int k = 0;
  Vector x;
  Vector N;
  TangentSpace tangent;
  ShapeData shape;
  CurvatureProfile profile;
  Vector lk_psi;         ///< tr(P_k Hess x_i) for each coordinate
  Vector lk_psi_closed;  ///< c_k H_{k+1} N - c c_k H_k x
  Vector lk_N;           ///< closed form
  Vector lk_N_trace;     ///< -eps tr(P_k S^2) N + c tr(P_k S) x
  double dual_path_dev = 0.0;  ///< max over coordinates, divided by its scale
  double gauss_dev = 0.0;      ///< same for L_k N

  double ck() const { return profile.ck[k]; }
};

PointEvaluation evaluate_point(const HypersurfaceExample& ex, const Vector& x, int k,
                               double tol = kDefaultTol);
std::vector<PointEvaluation> evaluate_samples(const HypersurfaceExample& ex,
                                              const std::vector<Vector>& xs, int k,
                                              double tol = kDefaultTol);
std::vector<PointEvaluation> evaluate_samples_serial(const HypersurfaceExample& ex,
                                                     const std::vector<Vector>& xs, int k,
                                                     double tol = kDefaultTol);

struct DualPath {
  double closed = 0.0;
  double trace = 0.0;
  double scale = 1.0;
  double deviation() const;  ///< |closed - trace| / scale
};

/// L_k <a, psi> from the closed form and from tr(P_k Hess).
DualPath lk_coord(const Vector& a, const PointEvaluation& pe, const AmbientSpaceForm& space);

struct GaussPair {
  Vector closed;
  Vector trace;
  double scale = 1.0;
};

/// L_k N; valid when the shape operator is parallel, which holds on every
/// catalog entry.
GaussPair lk_gauss(const PointEvaluation& pe, int c);

/// |L_k(fg) - g L_k f - f L_k g - 2 <P_k grad f, grad g>| / scale for
/// f = <a1, psi>, g = <a2, psi>.
double product_rule_check(const Vector& a1, const Vector& a2, const PointEvaluation& pe,
                          const AmbientSpaceForm& space);

struct AffineFit {
  Matrix A;
  Vector b;
  double residual_max = 0.0;
  int rank = 0;
  int nullity = 0;
  bool self_adjoint = false;
  /// Orthonormal basis of the unidentifiable directions in the unknown
  /// space: per output row [A_row; b_i] when unconstrained, the packed
  /// (upper triangle of G A, b) vector when self-adjoint.
  Matrix null_basis;
};

/// Least squares for y_i = A x_i + b. With enforce_self_adjoint, A = G Sym.
/// Throws RecoveryError when the design has more than allowed_nullity
/// deficient directions or too few samples.
AffineFit recover_affine(const std::vector<Vector>& xs, const std::vector<Vector>& ys,
                         const Signature& sig, bool enforce_self_adjoint,
                         int allowed_nullity = 0, double rank_tol = 1e-10);

/// Replaces the unidentifiable component of the fit by that of (A_ref, b_ref)
/// and recomputes residual_max on the given samples.
AffineFit align_to_reference(const AffineFit& fit, const Matrix& A_ref, const Vector& b_ref,
                             const Signature& sig, const std::vector<Vector>& xs,
                             const std::vector<Vector>& ys);

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
  std::string detail;
};

/// Checks available when b = 0: S^2 + lambda S - eps c I = 0, A x and A N,
/// the minimal polynomial of A and its discriminant, <A x, x> constant.
/// When H_{k+1} = 0 only the scalar form of A is checked.
std::vector<CheckResult> theorem1_checks(const HypersurfaceExample& ex, int k,
                                         const std::vector<PointEvaluation>& evals,
                                         const Matrix& A, double tol_scale = 1.0);

/// Checks for umbilical entries with b != 0: b tangential part, <b,psi>
/// constant, <b,N> = (c H_k / H_{k+1}) <b,psi>, umbilicity.
std::vector<CheckResult> theorem2_checks(const HypersurfaceExample& ex, int k,
                                         const std::vector<PointEvaluation>& evals,
                                         const Vector& b, double tol_scale = 1.0);

struct VerifyOptions {
  int k = 0;
  int samples = 500;
  std::uint64_t seed = 42;
  double tol = kDefaultTol;
  bool enforce_self_adjoint = false;
  bool parallel = true;
  int random_vectors = 100;
};

/// Minimum sample count accepted by recover_affine for ambient dimension dim.
int min_samples(int dim);

struct VerificationReport {
  std::string example_id;
  std::string metadata;
  int k = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  int sample_count = 0;
  double residual_max = 0.0;
  Matrix A_recovered, A_predicted;
  Vector b_recovered, b_predicted;
  double self_adjoint_defect = 0.0;
  int rank = 0;
  int nullity = 0;
  bool A_nondiagonalizable = false;
  std::string shape_kind;
  std::vector<CheckResult> checks;

  bool pass() const;
};

VerificationReport verify_example(const HypersurfaceExample& ex, const VerifyOptions& opt);

}  // namespace lkgeo
