#include "lkgeo/canonical_forms.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace lkgeo {

std::string to_string(CanonicalKind kind) {
  switch (kind) {
    case CanonicalKind::I: return "I";
    case CanonicalKind::II: return "II";
    case CanonicalKind::III: return "III";
    case CanonicalKind::IV: return "IV";
  }
  return "?";
}

int CanonicalForm::block_size() const {
  switch (kind) {
    case CanonicalKind::I: return 0;
    case CanonicalKind::II: return 2;
    case CanonicalKind::III: return 2;
    case CanonicalKind::IV: return 3;
  }
  return 0;
}

std::vector<double> CanonicalForm::principal_list() const {
  std::vector<double> out(block_size(), kappa);
  out.insert(out.end(), kappas.begin(), kappas.end());
  return out;
}

CanonicalForm make_canonical(CanonicalKind kind, double kappa, double b_rot,
                             std::vector<double> kappas) {
  CanonicalForm f;
  f.kind = kind;
  f.kappa = kind == CanonicalKind::I ? 0.0 : kappa;
  f.b_rot = kind == CanonicalKind::II ? b_rot : 0.0;
  f.kappas = std::move(kappas);
  f.frame_kind = (kind == CanonicalKind::III || kind == CanonicalKind::IV)
                     ? FrameKind::pseudo_orthonormal
                     : FrameKind::orthonormal;
  if (kind == CanonicalKind::II && b_rot == 0.0) {
    throw ContractViolation("make_canonical: kind II needs b_rot != 0");
  }
  if (f.n() < 1) throw ContractViolation("make_canonical: empty form");
  return f;
}

Matrix canonical_shape(const CanonicalForm& f) {
  const int n = f.n();
  const int bs = f.block_size();
  Matrix S = Matrix::Zero(n, n);
  const double k = f.kappa;
  switch (f.kind) {
    case CanonicalKind::I:
      break;
    case CanonicalKind::II:
      S(0, 0) = k;  S(0, 1) = f.b_rot;
      S(1, 0) = -f.b_rot;  S(1, 1) = k;
      break;
    case CanonicalKind::III:
      S(0, 0) = k;
      S(1, 0) = 1.0;  S(1, 1) = k;
      break;
    case CanonicalKind::IV:
      S(0, 0) = k;
      S(1, 1) = k;  S(1, 2) = 1.0;
      S(2, 0) = -1.0;  S(2, 2) = k;
      break;
  }
  for (int i = bs; i < n; ++i) S(i, i) = f.kappas[i - bs];
  return S;
}

Matrix canonical_gram(const CanonicalForm& f) {
  const int n = f.n();
  Matrix g = Matrix::Identity(n, n);
  if (f.frame_kind == FrameKind::orthonormal) {
    g(0, 0) = -1.0;
    return g;
  }
  g(0, 0) = 0.0;
  g(1, 1) = 0.0;
  g(0, 1) = g(1, 0) = -1.0;
  return g;
}

namespace {

struct Cluster {
  std::complex<double> center;
  int multiplicity = 0;
  bool complex_pair = false;  // center has Im > 0; the conjugate is implied
  std::vector<int> nullities;  // nu_1..nu_s of (S - center)^j
  int max_block = 0;
  bool consistent = false;
};

int rank_of(const Matrix& M, double threshold) {
  const Eigen::JacobiSVD<Matrix> svd(M);
  const Vector sv = svd.singularValues();
  return static_cast<int>((sv.array() > threshold).count());
}

// Single-linkage clustering of the spectrum at the given radius.
std::vector<Cluster> cluster_spectrum(const Eigen::VectorXcd& ev, double radius) {
  const int n = static_cast<int>(ev.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(ev(i) - ev(j)) <= radius) parent[find(i)] = find(j);

  std::vector<Cluster> clusters;
  std::vector<int> root_to_cluster(n, -1);
  std::vector<std::complex<double>> sums;
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (root_to_cluster[r] < 0) {
      root_to_cluster[r] = static_cast<int>(clusters.size());
      clusters.emplace_back();
      sums.emplace_back(0.0, 0.0);
    }
    const int c = root_to_cluster[r];
    clusters[c].multiplicity += 1;
    sums[c] += ev(i);
  }
  std::vector<Cluster> out;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    Cluster cl = clusters[c];
    cl.center = sums[c] / static_cast<double>(cl.multiplicity);
    if (std::abs(cl.center.imag()) > radius) {
      // Keep one representative per conjugate pair.
      if (cl.center.imag() < 0.0) continue;
      cl.complex_pair = true;
    } else {
      cl.center = {cl.center.real(), 0.0};
    }
    out.push_back(cl);
  }
  return out;
}

void analyse_cluster(const Matrix& S, double scale, double tol, Cluster& cl) {
  const int n = static_cast<int>(S.rows());
  const Matrix I = Matrix::Identity(n, n);
  Matrix base;
  int s = cl.multiplicity;
  if (cl.complex_pair) {
    // Real quadratic factor t^2 - 2 Re(z) t + |z|^2 carries both roots.
    const double re = cl.center.real();
    const double nrm2 = std::norm(cl.center);
    base = S * S - 2.0 * re * S + nrm2 * I;
    s = cl.multiplicity;  // nullity counts both conjugates
  } else {
    base = S - cl.center.real() * I;
  }
  const int target = cl.complex_pair ? 2 * cl.multiplicity : cl.multiplicity;
  const int per_step = cl.complex_pair ? 2 : 1;
  Matrix power = I;
  cl.nullities.clear();
  cl.max_block = 0;
  cl.consistent = false;
  for (int j = 1; j <= s; ++j) {
    power = power * base;
    const double thr = tol * std::pow(scale, cl.complex_pair ? 2 * j : j);
    const int nu = n - rank_of(power, thr);
    cl.nullities.push_back(nu);
    if (nu == target && cl.max_block == 0) cl.max_block = j;
  }
  (void)per_step;
  cl.consistent = !cl.nullities.empty() && cl.nullities.back() == target;
}

}  // namespace

CanonicalForm classify(const Matrix& S, double tol) {
  if (S.rows() != S.cols() || S.rows() == 0) {
    throw ContractViolation("classify: S must be square and non-empty");
  }
  const int n = static_cast<int>(S.rows());
  const double scale = 1.0 + S.norm();

  int mp_degree = -1;
  try {
    mp_degree = minimal_polynomial(S, tol).degree();
  } catch (const IllConditionedError&) {
    mp_degree = -1;
  }

  const Eigen::EigenSolver<Matrix> es(S, false);
  const Eigen::VectorXcd ev = es.eigenvalues();

  // Eigenvalues of a Jordan block of size s split by about (eps ||S||)^(1/s);
  // try the finest radius first and accept the first consistent structure.
  const double radii[] = {tol, 1e-6, 1e-5, 1e-4, 1e-3};
  std::vector<Cluster> chosen;
  bool found = false;
  for (double r : radii) {
    auto clusters = cluster_spectrum(ev, std::max(r, tol) * scale);
    bool ok = true;
    int degree = 0;
    for (auto& cl : clusters) {
      analyse_cluster(S, scale, tol, cl);
      ok = ok && cl.consistent;
      degree += cl.complex_pair ? 2 * cl.max_block : cl.max_block;
    }
    if (!ok) continue;
    if (mp_degree >= 0 && degree != mp_degree) continue;
    chosen = std::move(clusters);
    found = true;
    break;
  }
  if (!found) {
    throw ClassificationError(
        "classify: eigenvalue clusters are not resolvable at this tolerance",
        {CanonicalKind::I, CanonicalKind::II, CanonicalKind::III, CanonicalKind::IV});
  }

  int complex_pairs = 0;
  int jordan_clusters = 0;
  const Cluster* special = nullptr;
  for (const auto& cl : chosen) {
    if (cl.complex_pair) {
      complex_pairs += cl.multiplicity;
      if (cl.max_block > 1 || cl.multiplicity > 1) {
        throw ClassificationError("classify: repeated complex eigenvalues",
                                  {CanonicalKind::II});
      }
      special = &cl;
    } else if (cl.max_block > 1) {
      ++jordan_clusters;
      special = &cl;
      // More than one non-trivial block in the same cluster.
      const auto& nu = cl.nullities;
      const int blocks_ge2 = nu.size() >= 2 ? nu[1] - nu[0] : 0;
      if (blocks_ge2 > 1 || cl.max_block > 3) {
        throw ClassificationError("classify: Jordan structure outside types III/IV",
                                  {CanonicalKind::III, CanonicalKind::IV});
      }
    }
  }
  if (complex_pairs + jordan_clusters > 1) {
    throw ClassificationError("classify: more than one non-diagonal block",
                              {CanonicalKind::II, CanonicalKind::III, CanonicalKind::IV});
  }

  CanonicalForm form;
  form.kind = CanonicalKind::I;
  if (special != nullptr) {
    if (special->complex_pair) {
      form.kind = CanonicalKind::II;
      form.kappa = special->center.real();
      form.b_rot = std::abs(special->center.imag());
    } else {
      form.kind = special->max_block == 2 ? CanonicalKind::III : CanonicalKind::IV;
      form.kappa = special->center.real();
    }
  }
  form.frame_kind = (form.kind == CanonicalKind::III || form.kind == CanonicalKind::IV)
                        ? FrameKind::pseudo_orthonormal
                        : FrameKind::orthonormal;
  for (const auto& cl : chosen) {
    if (cl.complex_pair) continue;
    int copies = cl.multiplicity;
    if (&cl == special) copies -= cl.max_block;
    for (int i = 0; i < copies; ++i) form.kappas.push_back(cl.center.real());
  }
  std::sort(form.kappas.begin(), form.kappas.end());
  (void)n;
  return form;
}

Matrix canonical_pk_expected(const CanonicalForm& f, int k) {
  const int n = f.n();
  const std::vector<double> mu_list = f.principal_list();
  const std::span<const double> kap(mu_list);
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  auto mu = [&](int deg, std::initializer_list<int> J) {
    return mu_subset(kap, deg, std::span<const int>(J.begin(), J.size()));
  };
  Matrix P = Matrix::Zero(n, n);
  const int bs = f.block_size();
  for (int i = bs; i < n; ++i) {
    const int idx = i + 1;
    double v = mu(k, {idx});
    if (f.kind == CanonicalKind::II) v += f.b_rot * f.b_rot * mu(k - 2, {1, 2, idx});
    P(i, i) = sign * v;
  }
  switch (f.kind) {
    case CanonicalKind::I:
      break;
    case CanonicalKind::II: {
      const double m1 = mu(k, {1});
      const double m12 = mu(k - 1, {1, 2});
      // P E1 = (-1)^k (mu_k^1 E1 + b mu_{k-1}^{1,2} E2)
      P(0, 0) = sign * m1;
      P(1, 0) = sign * f.b_rot * m12;
      // P E2 = (-1)^k (-b mu_{k-1}^{1,2} E1 + mu_k^1 E2)
      P(0, 1) = -sign * f.b_rot * m12;
      P(1, 1) = sign * m1;
      break;
    }
    case CanonicalKind::III: {
      P(0, 0) = sign * mu(k, {1});
      P(1, 0) = -sign * mu(k - 1, {1, 2});
      P(1, 1) = sign * mu(k, {1});
      break;
    }
    case CanonicalKind::IV: {
      const double m1 = mu(k, {1});
      P(0, 0) = sign * m1;
      P(1, 0) = -sign * mu(k - 2, {1, 2, 3});
      P(2, 0) = sign * mu(k - 1, {1, 2});
      P(1, 1) = sign * m1;
      P(1, 2) = -sign * mu(k - 1, {1, 2});
      P(2, 2) = sign * m1;
      break;
    }
  }
  return P;
}

PkCheck canonical_pk_check(const CanonicalForm& f, int k, double tol) {
  const Matrix S = canonical_shape(f);
  const int n = f.n();
  if (k < 0 || k > n) throw ContractViolation("canonical_pk_check: k out of range");
  const std::vector<double> a = char_coeffs(S);
  Matrix P = Matrix::Identity(n, n);
  for (int j = 1; j <= k; ++j) {
    P = S * P;
    P.diagonal().array() += a[j];
  }
  PkCheck out;
  out.deviation = (P - canonical_pk_expected(f, k)).cwiseAbs().maxCoeff();
  out.bound = tol * std::pow(std::max(1.0, S.norm()), k);
  out.ok = out.deviation <= out.bound;
  return out;
}

}  // namespace lkgeo
