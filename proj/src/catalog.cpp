#include "lkgeo/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <sstream>

namespace lkgeo {

std::string to_string(Family f) {
  switch (f) {
    case Family::umbilical: return "umbilical";
    case Family::product: return "product";
    case Family::quadric: return "quadric";
    case Family::kmax: return "kmax";
  }
  return "?";
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int sign_of(double v) { return v > 0.0 ? 1 : -1; }

Vector unit_sphere(int dim, CounterRng& rng) {
  Vector u(dim);
  for (;;) {
    for (int i = 0; i < dim; ++i) u(i) = rng.normal();
    const double nrm = u.norm();
    if (nrm > 1e-3) return u / nrm;
  }
}

constexpr double kMaxRapidity = 2.0;

// Point y of R^{p,q} (p negative directions first) with <y,y> = value.
Vector pseudo_sphere(int p, int q, double value, CounterRng& rng) {
  Vector y = Vector::Zero(p + q);
  const double rad = std::sqrt(std::abs(value));
  // `big` carries the sign of value, `small` the opposite one.
  const int nbig = value > 0.0 ? q : p;
  const int nsmall = value > 0.0 ? p : q;
  const double t = nsmall > 0 ? rng.uniform(-kMaxRapidity, kMaxRapidity) : 0.0;
  Vector big = rad * std::cosh(t) * unit_sphere(nbig, rng);
  Vector small = nsmall > 0 ? Vector(rad * std::sinh(t) * unit_sphere(nsmall, rng))
                            : Vector(Vector::Zero(0));
  if (value > 0.0) {
    y.head(p) = small;
    y.tail(q) = big;
  } else {
    y.head(p) = big;
    y.tail(q) = small;
  }
  return y;
}

// Negative and positive counts of the metric restricted to a coordinate set.
std::pair<int, int> split_signs(const Signature& sig, const std::vector<int>& idx) {
  int p = 0;
  for (int i : idx) p += sig.sign(i) < 0.0 ? 1 : 0;
  return {p, static_cast<int>(idx.size()) - p};
}

bool pseudo_sphere_nonempty(int p, int q, double value) {
  return value > 0.0 ? q >= 1 : p >= 1;
}

// Fills coordinates `idx` of x with a point of value `value`; the coordinates
// are ordered so that negative directions come first.
void place_pseudo_sphere(const Signature& sig, const std::vector<int>& idx, double value,
                         CounterRng& rng, Vector& x) {
  std::vector<int> neg, pos;
  for (int i : idx) (sig.sign(i) < 0.0 ? neg : pos).push_back(i);
  const Vector y = pseudo_sphere(static_cast<int>(neg.size()), static_cast<int>(pos.size()),
                                 value, rng);
  int j = 0;
  for (int i : neg) x(i) = y(j++);
  for (int i : pos) x(i) = y(j++);
}

std::vector<double> poly_mul(const std::vector<double>& p, const std::vector<double>& q) {
  std::vector<double> out(p.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += p[i] * q[j];
  return out;
}

// H_0..H_n from the ascending characteristic polynomial of S.
std::vector<double> H_from_charpoly(const std::vector<double>& p, int n, int eps) {
  std::vector<double> a(n + 1);
  for (int k = 0; k <= n; ++k) a[k] = p[n - k];
  return mean_curvatures(a, eps, n);
}

std::vector<double> H_from_kappas(const std::vector<double>& kappas, int eps) {
  const int n = static_cast<int>(kappas.size());
  std::vector<double> H(n + 1);
  double e = 1.0;
  for (int k = 0; k <= n; ++k) {
    H[k] = e * mu_subset(kappas, k) / static_cast<double>(binomial(n, k));
    e *= eps;
  }
  return H;
}

void check_n(int n) {
  if (n < 2 || n > 8) throw CatalogError("hypersurface dimension n must be in 2..8");
}

}  // namespace

Vector HypersurfaceExample::gauss_map(const Vector& x) const {
  return (normal.L * x + normal.v) / normal.scale;
}

double HypersurfaceExample::constraint_residual(const Vector& x) const {
  const Signature& sig = space.signature();
  const double on_space = std::abs(inner(x, x, sig) - c());
  const double F = inner(Q * x, x, sig) + inner(l, x, sig);
  return std::max(on_space, std::abs(F - level));
}

TangentSpace HypersurfaceExample::tangent_at(const Vector& x, double tol) const {
  return tangent_space(x, gauss_map(x), space, tol);
}

ShapeData HypersurfaceExample::shape_on(const TangentSpace& ts, double tol) const {
  // S X = -(d/dX) N = -(L X) / scale, which is tangent; express it in the basis.
  const Matrix G = space.signature().metric();
  const Matrix image = -(normal.L * ts.basis) / normal.scale;
  const Matrix S = ts.gram.ldlt().solve(ts.basis.transpose() * G * image);
  return ShapeData::make(S, ts.gram, ts.eps, c(), tol);
}

ShapeData HypersurfaceExample::shape_at(const Vector& x, double tol) const {
  return shape_on(tangent_at(x, tol), tol);
}

AffinePrediction HypersurfaceExample::predicted(int k) const {
  const int nn = n();
  if (k < 0 || k > nn - 1) throw ContractViolation("predicted: k must be in 0..n-1");
  const int cc = c();
  const double ck = newton_constant(nn, k, eps);
  const double Hk = H_at(k);
  const double Hk1 = H_at(k + 1);
  const Matrix I = Matrix::Identity(dim(), dim());
  AffinePrediction out;
  out.b = Vector::Zero(dim());
  switch (family) {
    case Family::umbilical: {
      const double tau = umbilical.tau;
      const double s = normal.scale;
      const double base = std::pow(eps * cc * tau, k);
      out.A = -(ck * base * (eps * tau * tau + cc * s * s) / std::pow(s, k + 2)) * I;
      out.b = ck * base * (eps * cc * tau) / std::pow(s, k + 2) * normal.v;
      break;
    }
    case Family::kmax:
      if (k == target_k) {
        out.A = -cc * ck * Hk * I;
        break;
      }
      [[fallthrough]];
    case Family::product: {
      const double rcr = product.rho * cc * product.r * product.r;
      const double s = normal.scale;
      out.A = Matrix::Zero(dim(), dim());
      for (int i = 0; i < dim(); ++i) {
        const double Dii = normal.L(i, i) + rcr;
        out.A(i, i) = ck * Hk1 * (Dii - rcr) / s - cc * ck * Hk;
      }
      break;
    }
    case Family::quadric: {
      const double s = normal.scale;
      out.A = (ck * Hk1 / s) * quadric.R -
              (ck * Hk1 * cc * quadric.d / s + cc * ck * Hk) * I;
      break;
    }
  }
  return out;
}

namespace {

template <bool Parallel>
std::vector<Vector> sample_impl(const HypersurfaceExample& ex, int count,
                                std::uint64_t seed) {
  if (count < 0) throw ContractViolation("sample: negative count");
  std::vector<Vector> xs(count);
  std::vector<std::exception_ptr> errors(count);
#pragma omp parallel for schedule(static) if (Parallel)
  for (int i = 0; i < count; ++i) {
    try {
      CounterRng rng(seed, static_cast<std::uint64_t>(i));
      xs[i] = ex.draw(rng);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return xs;
}

}  // namespace

std::vector<Vector> HypersurfaceExample::sample(int count, std::uint64_t seed) const {
  return sample_impl<true>(*this, count, seed);
}

std::vector<Vector> HypersurfaceExample::sample_serial(int count, std::uint64_t seed) const {
  return sample_impl<false>(*this, count, seed);
}

HypersurfaceExample totally_umbilical(const UmbilicalParams& p, int n) {
  check_n(n);
  if (p.c != 1 && p.c != -1) throw CatalogError("umbilical: c must be +1 or -1");
  if (p.aa < -1 || p.aa > 1) throw CatalogError("umbilical: <a,a> must be -1, 0 or 1");
  if (p.aa == 0 && p.tau == 0.0) throw CatalogError("umbilical: null a needs tau != 0");
  const double disc = p.aa - p.c * p.tau * p.tau;
  if (std::abs(disc) < 1e-12) {
    throw CatalogError("umbilical: degenerate slice, <a,a> - c tau^2 = 0");
  }

  HypersurfaceExample ex;
  ex.family = Family::umbilical;
  ex.space = AmbientSpaceForm(p.c, n);
  ex.umbilical = p;
  const int dim = n + 2;
  const int c = p.c;
  const double tau = p.tau;

  Vector a = Vector::Zero(dim);
  if (p.aa <= 0) a(0) = 1.0;
  if (p.aa >= 0) a(dim - 1) = 1.0;

  const double s = std::sqrt(std::abs(disc));
  ex.eps = sign_of(disc);
  ex.normal = {-c * tau * Matrix::Identity(dim, dim), a, s};
  ex.Q = Matrix::Zero(dim, dim);
  ex.l = a;
  ex.level = tau;

  const double sigma = c * tau / s;
  ex.kappas.assign(n, sigma);
  ex.mu_S = {-sigma, 1.0};
  ex.expected_kind = CanonicalKind::I;
  ex.H_closed.resize(n + 1);
  for (int k = 0; k <= n; ++k) ex.H_closed[k] = std::pow(ex.eps * c * tau, k) / std::pow(s, k);
  ex.affine_nullity = 1;

  const std::string nn = std::to_string(n);
  const double at = std::abs(tau);
  if (c == 1) {
    if (p.aa == -1) {
      ex.listed_eps = -1;
      ex.metadata = "S^" + nn + "(" + num(std::sqrt(tau * tau + 1)) + ")";
    } else if (p.aa == 0) {
      ex.listed_eps = -1;
      ex.metadata = "R^" + nn;
    } else if (at > 1.0) {
      ex.listed_eps = -1;
      ex.metadata = "H^" + nn + "(-" + num(std::sqrt(tau * tau - 1)) + ")";
    } else {
      ex.listed_eps = 1;
      ex.metadata = "S^" + nn + "_1(" + num(std::sqrt(1 - tau * tau)) + ")";
    }
  } else {
    if (p.aa == -1 && at > 1.0) {
      ex.listed_eps = 1;
      ex.metadata = "S^" + nn + "_1(" + num(std::sqrt(tau * tau - 1)) + ")";
    } else if (p.aa == -1) {
      ex.listed_eps = -1;
      ex.metadata = "H^" + nn + "(-" + num(std::sqrt(1 - tau * tau)) + ")";
    } else if (p.aa == 0) {
      ex.listed_eps = 1;
      ex.metadata = "R^" + nn + "_1";
    } else {
      ex.listed_eps = 1;
      ex.metadata = "H^" + nn + "_1(-" + num(std::sqrt(tau * tau + 1)) + ")";
    }
  }
  if (tau == 0.0) ex.metadata += ", totally geodesic";

  const Signature sig = ex.space.signature();
  const int aa = p.aa;
  ex.draw = [sig, dim, c, tau, aa](CounterRng& rng) -> Vector {
    Vector x = Vector::Zero(dim);
    if (aa == 0) {
      double Qm = 0.0;
      for (int i = 1; i < dim - 1; ++i) {
        x(i) = rng.normal();
        Qm += sig.sign(i) * x(i) * x(i);
      }
      const double w = (c - Qm) / tau;
      x(0) = 0.5 * (w - tau);
      x(dim - 1) = 0.5 * (w + tau);
      return x;
    }
    const int j = aa < 0 ? 0 : dim - 1;
    x(j) = tau * sig.sign(j);
    std::vector<int> rest;
    for (int i = 0; i < dim; ++i)
      if (i != j) rest.push_back(i);
    place_pseudo_sphere(sig, rest, c - aa * tau * tau, rng, x);
    return x;
  };
  std::ostringstream id;
  id << "umbilical:c=" << c << ",aa=" << aa << ",tau=" << num(tau) << ",n=" << n;
  ex.id = id.str();
  return ex;
}

HypersurfaceExample standard_product(const ProductParams& p, int n) {
  check_n(n);
  if (p.c != 1 && p.c != -1) throw CatalogError("product: c must be +1 or -1");
  if (!((p.delta1 == 1 && p.delta2 == 0) || (p.delta1 == 0 && p.delta2 == 1))) {
    throw CatalogError("product: need delta1, delta2 in {0,1} with delta1 + delta2 = 1");
  }
  if (p.rho != 1 && p.rho != -1) throw CatalogError("product: rho must be +1 or -1");
  if (!(p.r > 0.0)) throw CatalogError("product: r must be positive");
  if (p.m < 1 || p.m > n - 1) throw CatalogError("product: m must be in 1..n-1");
  if ((p.delta1 == 0 && p.delta2 == 1 && p.rho == -1 && p.c == 1) ||
      (p.delta1 == 1 && p.delta2 == 0 && p.rho == 1 && p.c == -1)) {
    throw CatalogError("product: excluded tuple (delta1,delta2,rho,c) = (" +
                       std::to_string(p.delta1) + "," + std::to_string(p.delta2) + "," +
                       std::to_string(p.rho) + "," + std::to_string(p.c) + ")");
  }
  const int c = p.c;
  const double r = p.r;
  const double gap = p.rho - c * r * r;
  if (std::abs(gap) < 1e-12) throw CatalogError("product: rho - c r^2 = 0");

  HypersurfaceExample ex;
  ex.family = Family::product;
  ex.space = AmbientSpaceForm(c, n);
  ex.product = p;
  const int dim = n + 2;
  const int m = p.m;
  const Signature sig = ex.space.signature();

  // D = 1 on coordinate 2 and on the factor selected by delta; the factor with
  // D = delta1 has tangent dimension m.
  Vector D = Vector::Zero(dim);
  D(1) = 1.0;
  std::vector<int> ones{1}, zeros;
  if (p.delta1 == 1) {
    for (int i = 0; i < dim; ++i) {
      if (i == 1) continue;
      const bool first = (i == 0) || (i >= 2 && i <= m);
      D(i) = first ? 1.0 : 0.0;
      (first ? ones : zeros).push_back(i);
    }
  } else {
    for (int i = 0; i < dim; ++i) {
      if (i == 1) continue;
      const bool first = (i == 0) || (i >= 2 && i <= m + 1);
      D(i) = first ? 0.0 : 1.0;
      (first ? zeros : ones).push_back(i);
    }
  }
  std::sort(ones.begin(), ones.end());

  const double level = p.rho * r * r;
  const auto [p1, q1] = split_signs(sig, ones);
  const auto [p0, q0] = split_signs(sig, zeros);
  if (!pseudo_sphere_nonempty(p1, q1, level) || !pseudo_sphere_nonempty(p0, q0, c - level)) {
    throw CatalogError("product: empty level set for these parameters (r = " + num(r) + ")");
  }

  const double s = r * std::sqrt(std::abs(gap));
  const double rcr = p.rho * c * r * r;
  ex.eps = sign_of(gap);
  Matrix L = Matrix::Zero(dim, dim);
  L.diagonal() = D.array() - rcr;
  ex.normal = {L, Vector::Zero(dim), s};
  ex.Q = D.asDiagonal();
  ex.l = Vector::Zero(dim);
  ex.level = level;

  const double k1 = (rcr - p.delta1) / s;
  const double k2 = (rcr - p.delta2) / s;
  ex.kappas.assign(m, k1);
  ex.kappas.insert(ex.kappas.end(), n - m, k2);
  ex.mu_S = {k1 * k2, -(k1 + k2), 1.0};
  ex.expected_kind = CanonicalKind::I;
  ex.H_closed = H_from_kappas(ex.kappas, ex.eps);

  const std::string M = std::to_string(m), NM = std::to_string(n - m);
  const double rr = std::sqrt(std::abs(1 - r * r));
  const double rp = std::sqrt(1 + r * r);
  const int d1 = p.delta1;
  if (c == 1 && d1 == 1 && p.rho == 1) {
    ex.listed_eps = 1;
    ex.metadata = "S^" + M + "_1(" + num(r) + ") x S^" + NM + "(" + num(rr) + ")";
  } else if (c == 1 && d1 == 1) {
    ex.listed_eps = -1;
    ex.metadata = "H^" + M + "(-" + num(r) + ") x S^" + NM + "(" + num(rp) + ")";
  } else if (c == 1) {
    ex.listed_eps = r < 1.0 ? 1 : -1;
    ex.metadata = (r < 1.0 ? "S^" + M + "_1(" + num(rr) + ")" : "H^" + M + "(-" + num(rr) + ")") +
                  " x S^" + NM + "(" + num(r) + ")";
  } else if (d1 == 1) {
    ex.listed_eps = 1;
    ex.metadata = "H^" + M + "_1(-" + num(r) + ") x S^" + NM + "(" + num(rr) + ")";
  } else if (p.rho == 1) {
    ex.listed_eps = 1;
    ex.metadata = "H^" + M + "(-" + num(rp) + ") x S^" + NM + "_1(" + num(r) + ")";
  } else {
    ex.listed_eps = r > 1.0 ? 1 : -1;
    ex.metadata = (r > 1.0 ? "S^" + M + "_1(" + num(rr) + ")" : "H^" + M + "(-" + num(rr) + ")") +
                  " x H^" + NM + "(-" + num(r) + ")";
  }

  ex.draw = [sig, dim, ones, zeros, level, c](CounterRng& rng) -> Vector {
    Vector x = Vector::Zero(dim);
    place_pseudo_sphere(sig, ones, level, rng, x);
    place_pseudo_sphere(sig, zeros, c - level, rng, x);
    return x;
  };
  std::ostringstream id;
  id << "product:c=" << c << ",d1=" << d1 << ",rho=" << p.rho << ",r=" << num(r)
     << ",m=" << m << ",n=" << n;
  ex.id = id.str();
  return ex;
}

Matrix quadric_matrix(const std::string& name, int n) {
  const int dim = n + 2;
  const Signature sig(dim, 2);
  if (name == "J2") {
    if (n != 2) throw CatalogError("quadric: R=J2 exists only for n = 2");
    Matrix R = Matrix::Zero(4, 4);
    R(0, 2) = 1.0;
    R(1, 3) = 1.0;
    R(2, 0) = -1.0;
    R(3, 1) = -1.0;
    return R;
  }
  if (name == "N2") {
    Vector u = Vector::Zero(dim), w = Vector::Zero(dim);
    u(0) = u(2) = 1.0;
    w(1) = w(3) = 1.0;
    const Matrix G = sig.metric();
    return u * (G * w).transpose() + w * (G * u).transpose();
  }
  throw CatalogError("quadric: unknown matrix name '" + name + "' (expected J2 or N2)");
}

HypersurfaceExample quadratic_hypersurface(const QuadricParams& p, int n) {
  check_n(n);
  if (p.c != 1 && p.c != -1) throw CatalogError("quadric: c must be +1 or -1");
  HypersurfaceExample ex;
  ex.family = Family::quadric;
  ex.space = AmbientSpaceForm(p.c, n);
  ex.quadric = p;
  const int dim = n + 2;
  const int c = p.c;
  const double d = p.d;
  const Signature sig = ex.space.signature();
  if (p.R.rows() != dim || p.R.cols() != dim) throw CatalogError("quadric: R has wrong size");
  if (!is_metric_self_adjoint(p.R, sig, 1e-12 * (1.0 + p.R.norm()))) {
    throw CatalogError("quadric: R is not self-adjoint");
  }
  MinimalPolynomial mp;
  try {
    mp = minimal_polynomial(p.R);
  } catch (const IllConditionedError& e) {
    throw CatalogError(std::string("quadric: minimal polynomial of R: ") + e.what());
  }
  if (mp.degree() != 2) {
    throw CatalogError("quadric: minimal polynomial of R must have degree 2, got " +
                       std::to_string(mp.degree()));
  }
  const double a = mp.coeffs[1];
  const double b = mp.coeffs[0];
  const double discR = a * a - 4.0 * b;
  if (discR > 1e-10 * (1.0 + a * a + std::abs(b))) {
    throw CatalogError("quadric: minimal polynomial of R needs a^2 - 4b <= 0");
  }
  const double muR = (c * d) * (c * d) + a * c * d + b;
  if (std::abs(muR) < 1e-12) throw CatalogError("quadric: mu_R(cd) = 0");

  const double s = std::sqrt(std::abs(muR));
  ex.eps = -c * sign_of(muR);
  ex.listed_eps = 1;
  ex.normal = {p.R - c * d * Matrix::Identity(dim, dim), Vector::Zero(dim), s};
  ex.Q = p.R;
  ex.l = Vector::Zero(dim);
  ex.level = d;

  const double p1 = -(a + 2.0 * c * d) / s;
  const double p0 = (b + d * d + a * c * d) / std::abs(muR);
  ex.mu_S = {p0, p1, 1.0};
  const double discS = p1 * p1 - 4.0 * p0;
  std::vector<double> charpoly{1.0};
  if (std::abs(discS) <= 1e-10 * (1.0 + p1 * p1)) {
    ex.expected_kind = CanonicalKind::III;
    const std::vector<double> lin{p1 / 2.0, 1.0};
    for (int i = 0; i < n; ++i) charpoly = poly_mul(charpoly, lin);
  } else {
    if (n % 2 != 0) throw CatalogError("quadric: complex shape operator needs even n");
    ex.expected_kind = CanonicalKind::II;
    for (int i = 0; i < n / 2; ++i) charpoly = poly_mul(charpoly, ex.mu_S);
  }
  ex.H_closed = H_from_charpoly(charpoly, n, ex.eps);

  ex.metadata = "quadric <Rx,x> = " + num(d) + (p.label.empty() ? "" : ", R = " + p.label) +
                (ex.expected_kind == CanonicalKind::II ? ", complex principal curvatures"
                                                       : ", 2-step nilpotent part");

  const Matrix R = p.R;
  const Matrix G = sig.metric();
  ex.draw = [R, G, dim, c, d](CounterRng& rng) -> Vector {
    const double rscale = 1.0 + R.norm();
    for (int attempt = 0; attempt < 20; ++attempt) {
      Vector x(dim);
      for (int i = 0; i < dim; ++i) x(i) = rng.normal();
      auto residual = [&](const Vector& y) {
        Eigen::Vector2d F;
        F(0) = y.dot(G * y) - c;
        F(1) = y.dot(G * R * y) - d;
        return F;
      };
      Eigen::Vector2d F = residual(x);
      for (int it = 0; it < 50; ++it) {
        if (F.cwiseAbs().maxCoeff() <= 1e-13 * (1.0 + x.squaredNorm()) * rscale) break;
        Matrix J(2, dim);
        J.row(0) = 2.0 * (G * x).transpose();
        J.row(1) = 2.0 * (G * R * x).transpose();
        const Eigen::Matrix2d JJ = J * J.transpose();
        if (std::abs(JJ.determinant()) < 1e-14 * JJ.squaredNorm()) break;
        const Vector step = -J.transpose() * JJ.inverse() * F;
        double t = 1.0;
        Vector trial = x + step;
        Eigen::Vector2d Ft = residual(trial);
        for (int h = 0; h < 30 && Ft.norm() > F.norm(); ++h) {
          t *= 0.5;
          trial = x + t * step;
          Ft = residual(trial);
        }
        x = trial;
        F = Ft;
      }
      const bool ok = F.cwiseAbs().maxCoeff() <= 1e-13 * (1.0 + x.squaredNorm()) * rscale;
      if (ok && x.norm() <= 20.0) return x;
    }
    throw SamplingError("quadric: Newton projection failed after 20 seeds");
  };
  std::ostringstream id;
  id << "quadric:c=" << c << ",R=" << (p.label.empty() ? "custom" : p.label) << ",d=" << num(d)
     << ",n=" << n;
  ex.id = id.str();
  return ex;
}

HypersurfaceExample k_maximal_flat_example(int n, int k) {
  check_n(n);
  if (k < 0 || k > n - 1) throw CatalogError("kmax: k must be in 0..n-1");
  // On S^m_1(r) x S^{n-m}(sqrt(1-r^2)) the curvatures are -1/t (m times)
  // and t (n-m times) with t = r / sqrt(1 - r^2).
  auto e_next = [n, k](int m, double r) {
    const double t = r / std::sqrt(1.0 - r * r);
    std::vector<double> kap(m, -1.0 / t);
    kap.insert(kap.end(), n - m, t);
    return mu_subset(kap, k + 1);
  };
  constexpr int kGrid = 4000;
  for (int m = 1; m <= n - 1; ++m) {
    double lo = 0.0, hi = 0.0;
    bool found = false;
    double prev_r = 1e-3;
    double prev = e_next(m, prev_r);
    for (int i = 1; i <= kGrid && !found; ++i) {
      const double r = 1e-3 + (1.0 - 2e-3) * i / kGrid;
      const double cur = e_next(m, r);
      if (prev == 0.0 || (prev < 0.0) != (cur < 0.0)) {
        lo = prev_r;
        hi = r;
        found = true;
      }
      prev = cur;
      prev_r = r;
    }
    if (!found) continue;
    const bool lo_neg = e_next(m, lo) < 0.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      ((e_next(m, mid) < 0.0) == lo_neg ? lo : hi) = mid;
    }
    ProductParams p;
    p.c = 1;
    p.m = m;
    p.delta1 = 1;
    p.delta2 = 0;
    p.rho = 1;
    p.r = 0.5 * (lo + hi);
    HypersurfaceExample ex = standard_product(p, n);
    ex.family = Family::kmax;
    ex.target_k = k;
    ex.H_closed[k + 1] = 0.0;
    ex.metadata = std::to_string(k) + "-maximal " + ex.metadata;
    ex.id = "kmax:n=" + std::to_string(n) + ",k=" + std::to_string(k);
    return ex;
  }
  throw CatalogError("kmax: no admissible r with H_{k+1} = 0 for n = " + std::to_string(n) +
                     ", k = " + std::to_string(k));
}

namespace {

double parse_real(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty()) throw CatalogError("bad number for " + key + ": '" + v + "'");
  return out;
}

int parse_int(const std::string& key, const std::string& v) {
  const double d = parse_real(key, v);
  if (d != std::floor(d)) throw CatalogError("expected an integer for " + key);
  return static_cast<int>(d);
}

}  // namespace

HypersurfaceExample example_from_id(const std::string& id) {
  const auto colon = id.find(':');
  if (colon == std::string::npos) throw CatalogError("example id needs '<family>:<params>'");
  const std::string fam = id.substr(0, colon);
  std::map<std::string, std::string> kv;
  std::stringstream ss(id.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw CatalogError("bad parameter '" + item + "' in id");
    if (!kv.emplace(item.substr(0, eq), item.substr(eq + 1)).second) {
      throw CatalogError("duplicate parameter '" + item.substr(0, eq) + "'");
    }
  }
  auto take = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw CatalogError(fam + ": missing parameter '" + key + "'");
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto take_or = [&](const std::string& key, const std::string& def) {
    return kv.count(key) ? take(key) : def;
  };
  auto finish = [&]() {
    if (!kv.empty()) throw CatalogError(fam + ": unknown parameter '" + kv.begin()->first + "'");
  };

  if (fam == "umbilical") {
    UmbilicalParams p;
    p.c = parse_int("c", take("c"));
    p.aa = parse_int("aa", take("aa"));
    p.tau = parse_real("tau", take("tau"));
    const int n = parse_int("n", take_or("n", "3"));
    finish();
    auto ex = totally_umbilical(p, n);
    ex.id = id;
    return ex;
  }
  if (fam == "product") {
    ProductParams p;
    p.c = parse_int("c", take("c"));
    p.delta1 = parse_int("d1", take("d1"));
    p.delta2 = 1 - p.delta1;
    p.rho = parse_int("rho", take("rho"));
    p.r = parse_real("r", take("r"));
    p.m = parse_int("m", take("m"));
    const int n = parse_int("n", take_or("n", "3"));
    finish();
    auto ex = standard_product(p, n);
    ex.id = id;
    return ex;
  }
  if (fam == "quadric") {
    QuadricParams p;
    p.c = parse_int("c", take("c"));
    p.label = take("R");
    p.d = parse_real("d", take("d"));
    const int n = parse_int("n", take_or("n", p.label == "N2" ? "3" : "2"));
    finish();
    if (p.c != -1) throw CatalogError("quadric: named instances exist only for c = -1");
    p.R = quadric_matrix(p.label, n);
    auto ex = quadratic_hypersurface(p, n);
    ex.id = id;
    return ex;
  }
  if (fam == "kmax") {
    const int n = parse_int("n", take("n"));
    const int k = parse_int("k", take("k"));
    finish();
    auto ex = k_maximal_flat_example(n, k);
    ex.id = id;
    return ex;
  }
  throw CatalogError("unknown example family '" + fam + "'");
}

std::vector<FamilyInfo> catalog_families() {
  return {
      {"umbilical",
       {1, -1},
       "umbilical:c=<+-1>,aa=<-1|0|1>,tau=<real>[,n=<int>]",
       "totally umbilical hyperplane sections <a,x> = tau",
       {"c=1  aa=-1        S^n(sqrt(tau^2+1))     eps=-1",
        "c=1  aa=0  tau!=0 R^n                    eps=-1",
        "c=1  aa=1  |tau|>1 H^n(-sqrt(tau^2-1))   eps=-1",
        "c=1  aa=1  |tau|<1 S^n_1(sqrt(1-tau^2))  eps=+1",
        "c=-1 aa=-1 |tau|>1 S^n_1(sqrt(tau^2-1))  eps=+1",
        "c=-1 aa=-1 |tau|<1 H^n(-sqrt(1-tau^2))   eps=-1",
        "c=-1 aa=0  tau!=0 R^n_1                  eps=+1",
        "c=-1 aa=1          H^n_1(-sqrt(tau^2+1)) eps=+1"}},
      {"product",
       {1, -1},
       "product:c=<+-1>,d1=<0|1>,rho=<+-1>,r=<real>,m=<1..n-1>[,n=<int>]",
       "standard pseudo-Riemannian products, two principal curvatures",
       {"c=1  d1=1 rho=1  r<1 S^m_1(r) x S^{n-m}(sqrt(1-r^2))",
        "c=1  d1=1 rho=-1     H^m(-r) x S^{n-m}(sqrt(1+r^2))",
        "c=1  d1=0 rho=1  r<1 S^m_1(sqrt(1-r^2)) x S^{n-m}(r)",
        "c=1  d1=0 rho=1  r>1 H^m(-sqrt(r^2-1)) x S^{n-m}(r)",
        "c=-1 d1=1 rho=-1 r>1 H^m_1(-r) x S^{n-m}(sqrt(r^2-1))",
        "c=-1 d1=0 rho=1      H^m(-sqrt(1+r^2)) x S^{n-m}_1(r)",
        "c=-1 d1=0 rho=-1 r>1 S^m_1(sqrt(r^2-1)) x H^{n-m}(-r)",
        "c=-1 d1=0 rho=-1 r<1 H^m(-sqrt(1-r^2)) x H^{n-m}(-r)",
        "excluded: (d1,rho,c) = (0,-1,1) and (1,1,-1)"}},
      {"quadric",
       {-1},
       "quadric:c=-1,R=<J2|N2>,d=<real>[,n=<int>]",
       "quadratic level sets <Rx,x> = d with non-diagonalizable shape operator",
       {"R=J2 (R^2 = -I, n = 2): complex principal curvatures",
        "R=N2 (R^2 = 0, n >= 2): 2x2 Jordan block"}},
      {"kmax",
       {1},
       "kmax:n=<int>,k=<int>",
       "H_{k+1} = 0 with constant H_k, A = -c c_k H_k I, b = 0",
       {"realized on S^m_1(r) x S^{n-m}(sqrt(1-r^2)) with r solving H_{k+1} = 0"}},
  };
}

std::vector<std::string> standard_catalog_ids() {
  return {
      "umbilical:c=1,aa=-1,tau=0.7",
      "umbilical:c=1,aa=0,tau=0.8",
      "umbilical:c=1,aa=1,tau=1.5",
      "umbilical:c=1,aa=1,tau=0.5",
      "umbilical:c=1,aa=1,tau=0",
      "umbilical:c=-1,aa=-1,tau=1.5",
      "umbilical:c=-1,aa=-1,tau=0.5",
      "umbilical:c=-1,aa=0,tau=0.8",
      "umbilical:c=-1,aa=1,tau=0.6",
      "umbilical:c=-1,aa=1,tau=0",
      "product:c=1,d1=1,rho=1,r=0.6,m=1",
      "product:c=1,d1=1,rho=1,r=0.8,m=2,n=4",
      "product:c=1,d1=1,rho=-1,r=0.6,m=1",
      "product:c=1,d1=1,rho=-1,r=2,m=2",
      "product:c=1,d1=0,rho=1,r=0.6,m=1",
      "product:c=1,d1=0,rho=1,r=0.3,m=2,n=4",
      "product:c=1,d1=0,rho=1,r=2,m=2",
      "product:c=1,d1=0,rho=1,r=1.5,m=1",
      "product:c=-1,d1=1,rho=-1,r=2,m=1",
      "product:c=-1,d1=1,rho=-1,r=1.5,m=2,n=4",
      "product:c=-1,d1=0,rho=1,r=0.6,m=1",
      "product:c=-1,d1=0,rho=1,r=2,m=2",
      "product:c=-1,d1=0,rho=-1,r=2,m=1",
      "product:c=-1,d1=0,rho=-1,r=3,m=2,n=4",
      "product:c=-1,d1=0,rho=-1,r=0.6,m=2",
      "product:c=-1,d1=0,rho=-1,r=0.4,m=1",
      "quadric:c=-1,R=J2,d=1",
      "quadric:c=-1,R=N2,d=1",
      "kmax:n=2,k=0",
      "kmax:n=3,k=1",
  };
}

}  // namespace lkgeo
