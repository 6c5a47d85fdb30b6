#include "lkgeo/indefinite_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lkgeo {

Signature::Signature(int dim, int index) : dim_(dim), index_(index) {
  if (dim <= 0 || index < 0 || index > dim) {
    throw ContractViolation("Signature: need dim > 0 and 0 <= index <= dim");
  }
}

Matrix Signature::metric() const {
  Matrix G = Matrix::Identity(dim_, dim_);
  for (int i = 0; i < index_; ++i) G(i, i) = -1.0;
  return G;
}

Vector Signature::lower(const Vector& x) const {
  Vector y = x;
  y.head(index_) *= -1.0;
  return y;
}

AmbientSpaceForm::AmbientSpaceForm(int c, int n)
    : c_(c), n_(n), signature_(n + 2, c == 1 ? 1 : 2) {
  if (c != 1 && c != -1) throw ContractViolation("AmbientSpaceForm: c must be +1 or -1");
  if (n < 1) throw ContractViolation("AmbientSpaceForm: n must be positive");
}

bool AmbientSpaceForm::contains(const Vector& x, double tol) const {
  if (x.size() != dim()) return false;
  return std::abs(inner(x, x, signature_) - c_) <= tol * (1.0 + x.squaredNorm());
}

double inner(const Vector& x, const Vector& y, const Signature& sig) {
  if (x.size() != sig.dim() || y.size() != sig.dim()) {
    throw ContractViolation("inner: vector length does not match signature");
  }
  const int q = sig.index();
  return -x.head(q).dot(y.head(q)) + x.tail(sig.dim() - q).dot(y.tail(sig.dim() - q));
}

double self_adjoint_defect(const Matrix& M, const Matrix& gram) {
  if (M.rows() != M.cols() || gram.rows() != M.rows() || gram.cols() != M.cols()) {
    throw ContractViolation("self_adjoint_defect: dimension mismatch");
  }
  const Matrix GM = gram * M;
  return (GM - GM.transpose()).cwiseAbs().maxCoeff();
}

double self_adjoint_defect(const Matrix& M, const Signature& sig) {
  if (M.rows() != sig.dim()) {
    throw ContractViolation("self_adjoint_defect: dimension mismatch");
  }
  return self_adjoint_defect(M, sig.metric());
}

bool is_metric_self_adjoint(const Matrix& M, const Signature& sig, double tol) {
  return self_adjoint_defect(M, sig) <= tol;
}

double MinimalPolynomial::discriminant() const {
  if (degree() != 2) return 0.0;
  return coeffs[1] * coeffs[1] - 4.0 * coeffs[0];
}

Matrix evaluate_polynomial(const std::vector<double>& coeffs, const Matrix& M) {
  // Horner.
  const auto n = M.rows();
  Matrix acc = Matrix::Zero(n, n);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * M;
    acc.diagonal().array() += *it;
  }
  return acc;
}

std::vector<double> polynomial_remainder(std::vector<double> num,
                                         const std::vector<double>& den) {
  const int dd = static_cast<int>(den.size()) - 1;
  if (dd < 0 || den.back() != 1.0) {
    throw ContractViolation("polynomial_remainder: divisor must be monic");
  }
  for (int top = static_cast<int>(num.size()) - 1; top >= dd; --top) {
    const double lead = num[top];
    for (int j = 0; j <= dd; ++j) num[top - dd + j] -= lead * den[j];
  }
  num.resize(std::max(dd, 0));
  return num;
}

namespace {

std::string format_profile(const std::vector<double>& sv) {
  std::ostringstream os;
  os.precision(3);
  os << "[";
  for (std::size_t i = 0; i < sv.size(); ++i) os << (i ? ", " : "") << sv[i];
  os << "]";
  return os.str();
}

}  // namespace

MinimalPolynomial minimal_polynomial(const Matrix& M, double tol) {
  if (M.rows() != M.cols() || M.rows() == 0) {
    throw ContractViolation("minimal_polynomial: matrix must be square and non-empty");
  }
  if (!(tol > 0.0)) throw ContractViolation("minimal_polynomial: tol must be positive");

  const auto n = M.rows();
  const auto nn = n * n;
  // Work with M / sigma so powers stay O(1); coefficients are rescaled at the end.
  const double sigma = std::max(M.norm(), 1e-300);
  const Matrix Ms = M / sigma;

  Matrix krylov(nn, n + 1);
  Matrix power = Matrix::Identity(n, n);
  krylov.col(0) = power.reshaped();
  std::vector<double> last_profile;

  for (Eigen::Index d = 1; d <= n; ++d) {
    power = power * Ms;
    krylov.col(d) = power.reshaped();

    bool deficient = false;
    if (krylov.col(d).norm() <= tol) {
      // M^d vanishes to working precision: nilpotent part exhausted.
      deficient = true;
    }
    Matrix normalized = krylov.leftCols(d + 1);
    for (Eigen::Index j = 0; j <= d; ++j) {
      const double nrm = normalized.col(j).norm();
      if (nrm > 0.0) normalized.col(j) /= nrm;
    }
    const Eigen::JacobiSVD<Matrix> svd(normalized);
    const Vector sv = svd.singularValues();
    last_profile.assign(sv.data(), sv.data() + sv.size());

    if (!deficient) {
      const double s_last = sv(d);
      const double s_prev = sv(d - 1);
      if (s_last <= kKrylovGapRatio * s_prev) {
        deficient = true;
      } else if (s_last <= tol * sv(0)) {
        throw IllConditionedError(
            "minimal_polynomial: no clear rank gap at degree " + std::to_string(d) +
                ", singular values " + format_profile(last_profile),
            last_profile);
      }
    }
    if (!deficient) continue;

    // Solve vec(Ms^d) + sum_{j<d} c_j vec(Ms^j) = 0 in the least-squares sense.
    const Matrix lower = krylov.leftCols(d);
    const Vector rhs = -krylov.col(d);
    const Vector cs = lower.colPivHouseholderQr().solve(rhs);

    MinimalPolynomial out;
    out.coeffs.resize(d + 1);
    for (Eigen::Index j = 0; j < d; ++j) {
      out.coeffs[j] = cs(j) * std::pow(sigma, static_cast<double>(d - j));
    }
    out.coeffs[d] = 1.0;
    out.singular_values = last_profile;

    std::vector<double> scaled(out.coeffs.size());
    for (Eigen::Index j = 0; j <= d; ++j) scaled[j] = j < d ? cs(j) : 1.0;
    out.relative_residual = evaluate_polynomial(scaled, Ms).norm();
    // ||p(M)|| <= tol * (1 + ||M||^d), measured on M / ||M||.
    if (out.relative_residual > 2.0 * tol) {
      throw IllConditionedError(
          "minimal_polynomial: residual " + std::to_string(out.relative_residual) +
              " too large at degree " + std::to_string(d),
          last_profile);
    }
    return out;
  }
  // Cayley-Hamilton guarantees a deficiency at degree n in exact arithmetic.
  throw IllConditionedError(
      "minimal_polynomial: no rank deficiency up to degree n, singular values " +
          format_profile(last_profile),
      last_profile);
}

Vector TangentSpace::coordinates(const Vector& v, const Signature& sig) const {
  const Vector rhs = basis.transpose() * sig.lower(v);
  return gram.ldlt().solve(rhs);
}

TangentSpace tangent_space(const Vector& x, const Vector& N,
                           const AmbientSpaceForm& space, double tol) {
  const Signature& sig = space.signature();
  const int dim = sig.dim();
  if (x.size() != dim || N.size() != dim) {
    throw ContractViolation("tangent_space: dimension mismatch");
  }
  const double xx = inner(x, x, sig);
  const double nn = inner(N, N, sig);
  const double xn = inner(x, N, sig);
  if (std::abs(xx - space.c()) > tol * (1.0 + x.squaredNorm())) {
    throw ContractViolation("tangent_space: <x,x> != c (x not on the space form)");
  }
  if (std::abs(std::abs(nn) - 1.0) > tol * (1.0 + N.squaredNorm())) {
    throw ContractViolation("tangent_space: N is not a unit vector");
  }
  if (std::abs(xn) > tol * (1.0 + x.norm() * N.norm())) {
    throw ContractViolation("tangent_space: N is not orthogonal to x");
  }

  // Constraint rows <x, v> = 0 and <N, v> = 0 in Euclidean form.
  Matrix C(2, dim);
  C.row(0) = sig.lower(x).transpose();
  C.row(1) = sig.lower(N).transpose();

  // Reduced row echelon form with complete pivoting.
  Eigen::Index r0 = 0, p0 = 0;
  const double piv0 = C.cwiseAbs().maxCoeff(&r0, &p0);
  if (piv0 == 0.0) throw ContractViolation("tangent_space: zero constraint system");
  if (r0 != 0) C.row(0).swap(C.row(1));
  C.row(0) /= C(0, p0);
  C.row(1) -= C(1, p0) * C.row(0);

  Eigen::Index p1 = 0;
  const double piv1 = C.row(1).cwiseAbs().maxCoeff(&p1);
  if (piv1 <= tol * (1.0 + C.row(1).norm()) || piv1 <= 1e-12 * piv0) {
    throw ContractViolation("tangent_space: x and N are linearly dependent");
  }
  C.row(1) /= C(1, p1);
  C.row(0) -= C(0, p1) * C.row(1);

  const int n = dim - 2;
  TangentSpace ts;
  ts.base_point = x;
  ts.normal = N;
  ts.eps = nn > 0.0 ? 1 : -1;
  ts.basis = Matrix::Zero(dim, n);
  int col = 0;
  for (int f = 0; f < dim; ++f) {
    if (f == p0 || f == p1) continue;
    ts.basis(f, col) = 1.0;
    ts.basis(p0, col) = -C(0, f);
    ts.basis(p1, col) = -C(1, f);
    ++col;
  }
  ts.gram = ts.basis.transpose() * sig.metric() * ts.basis;
  ts.gram = 0.5 * (ts.gram + ts.gram.transpose());
  return ts;
}

int negative_inertia(const Matrix& sym) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  const Vector ev = es.eigenvalues();
  return static_cast<int>((ev.array() < 0.0).count());
}

}  // namespace lkgeo
