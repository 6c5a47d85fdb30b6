#include "lkgeo/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace lkgeo {

ShapeData ShapeData::make(Matrix S, Matrix gram, int eps, int c, double tol) {
  if (S.rows() != S.cols() || gram.rows() != S.rows() || gram.cols() != S.cols()) {
    throw ContractViolation("ShapeData: S and gram must be square of equal size");
  }
  if (eps != 1 && eps != -1) throw ContractViolation("ShapeData: eps must be +1 or -1");
  if (c != 1 && c != -1) throw ContractViolation("ShapeData: c must be +1 or -1");
  const double scale = 1.0 + S.norm() * gram.norm();
  if (self_adjoint_defect(S, gram) > tol * scale) {
    throw ContractViolation("ShapeData: S is not self-adjoint with respect to gram");
  }
  return ShapeData{std::move(S), std::move(gram), eps, c};
}

std::uint64_t binomial(int n, int k) {
  if (n < 0 || n > 62) throw ContractViolation("binomial: n out of range");
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  // r * (n - k + i) is divisible by i at every step.
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

std::vector<double> char_coeffs(const Matrix& S) {
  if (S.rows() != S.cols()) throw ContractViolation("char_coeffs: S must be square");
  const int n = static_cast<int>(S.rows());
  std::vector<double> traces(n + 1, 0.0);
  Matrix power = Matrix::Identity(n, n);
  for (int j = 1; j <= n; ++j) {
    power = power * S;
    traces[j] = power.trace();
  }
  std::vector<double> a(n + 1, 0.0);
  a[0] = 1.0;
  for (int k = 1; k <= n; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += a[k - j] * traces[j];
    a[k] = -acc / k;
  }
  return a;
}

std::vector<double> mean_curvatures(const std::vector<double>& a, int eps, int n) {
  if (static_cast<int>(a.size()) != n + 1) {
    throw ContractViolation("mean_curvatures: need n + 1 coefficients");
  }
  std::vector<double> H(n + 1);
  double sign = 1.0;
  for (int k = 0; k <= n; ++k) {
    H[k] = sign * a[k] / static_cast<double>(binomial(n, k));
    sign *= -eps;
  }
  H[0] = 1.0;
  return H;
}

std::vector<Matrix> newton_transforms(const Matrix& S, const std::vector<double>& a,
                                      double tol) {
  const int n = static_cast<int>(S.rows());
  if (static_cast<int>(a.size()) != n + 1) {
    throw ContractViolation("newton_transforms: need n + 1 coefficients");
  }
  std::vector<Matrix> P;
  P.reserve(n + 1);
  P.push_back(Matrix::Identity(n, n));
  for (int k = 1; k <= n; ++k) {
    Matrix next = S * P.back();
    next.diagonal().array() += a[k];
    P.push_back(std::move(next));
  }
  const double bound = tol * std::pow(std::max(1.0, S.norm()), n);
  const double pn = n > 0 ? P.back().cwiseAbs().maxCoeff() : 0.0;
  if (pn > bound) {
    throw ConsistencyError("newton_transforms: P_n does not vanish (||P_n|| = " +
                           std::to_string(pn) + ")");
  }
  return P;
}

double newton_constant(int n, int k, int eps) {
  const double sign = (k % 2 == 0) ? 1.0 : -static_cast<double>(eps);
  return sign * (n - k) * static_cast<double>(binomial(n, k));
}

CurvatureProfile curvature_profile(const ShapeData& shape, double tol) {
  CurvatureProfile p;
  p.n = shape.n();
  p.eps = shape.eps;
  p.a = char_coeffs(shape.S);
  p.H = mean_curvatures(p.a, shape.eps, p.n);
  p.P = newton_transforms(shape.S, p.a, tol);
  p.ck.resize(p.n + 1);
  p.Ck.resize(p.n + 1);
  for (int k = 0; k <= p.n; ++k) {
    p.ck[k] = newton_constant(p.n, k, shape.eps);
    p.Ck[k] = p.ck[k] / (k + 1);
  }
  return p;
}

TraceReport lemma1_traces(const Matrix& S, const CurvatureProfile& pr) {
  const int n = pr.n;
  const Matrix S2 = S * S;
  TraceReport out;
  for (int k = 0; k < n; ++k) {
    const Matrix& Pk = pr.P[k];
    out.trP.push_back({k, Pk.trace(), (n - k) * pr.a[k], pr.ck[k] * pr.H[k]});
    out.trSP.push_back({k, (S * Pk).trace(), -(k + 1) * pr.a_at(k + 1),
                        pr.eps * pr.ck[k] * pr.H_at(k + 1)});
    out.trS2P.push_back(
        {k, (S2 * Pk).trace(), pr.a[1] * pr.a_at(k + 1) - (k + 2) * pr.a_at(k + 2),
         pr.Ck[k] * (n * pr.H_at(1) * pr.H_at(k + 1) - (n - k - 1) * pr.H_at(k + 2))});
  }
  return out;
}

double mu_subset(std::span<const double> kappas, int k, std::span<const int> J) {
  const int n = static_cast<int>(kappas.size());
  if (k < 0 || k > n) return 0.0;
  // e_j of the kept values by the usual one-pass recurrence.
  std::vector<double> e(k + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < n; ++i) {
    if (std::find(J.begin(), J.end(), i + 1) != J.end()) continue;
    for (int j = k; j >= 1; --j) e[j] += kappas[i] * e[j - 1];
  }
  return e[k];
}

RicciScalar ricci_and_scalar(const ShapeData& shape, const CurvatureProfile& pr) {
  const int n = shape.n();
  const Matrix& g = shape.gram;
  const Matrix& S = shape.S;
  // <S E_i, E_j> = (S^T g)_{ij}, <S E_i, S E_j> = (S^T g S)_{ij}.
  const Matrix SX_Y = S.transpose() * g;
  const Matrix SX_SY = S.transpose() * g * S;
  RicciScalar r;
  r.ric = (n - 1) * shape.c * g + n * pr.H_at(1) * SX_Y - shape.eps * SX_SY;
  r.scal_trace = g.partialPivLu().solve(r.ric).trace();
  r.scal_closed = n * (n - 1) * (shape.c + shape.eps * pr.H_at(2));
  return r;
}

}  // namespace lkgeo
