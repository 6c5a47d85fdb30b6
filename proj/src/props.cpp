#include "lkgeo/props.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include <Eigen/LU>

#include "lkgeo/canonical_forms.hpp"
#include "lkgeo/catalog.hpp"
#include "lkgeo/verification.hpp"

namespace lkgeo {

ShapeData random_shape(int n, int eps, int c, CounterRng& rng) {
  Matrix B(n, n);
  const double spread = 0.3 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = (i == j ? 1.0 : 0.0) + spread * rng.normal();
  Vector eta = Vector::Ones(n);
  if (eps == 1) eta(0) = -1.0;
  const Matrix gram = B.transpose() * eta.asDiagonal() * B;
  Matrix sym(n, n);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) sym(i, j) = sym(j, i) = s * rng.normal();
  ShapeData out;
  out.S = gram.partialPivLu().solve(sym);
  out.gram = gram;
  out.eps = eps;
  out.c = c;
  return out;
}

Matrix random_diagonalizable(int n, CounterRng& rng, std::vector<double>& kappas) {
  kappas.resize(n);
  for (int i = 0; i < n; ++i) kappas[i] = rng.uniform(-3.0, 3.0);
  Matrix B(n, n);
  const double s = 0.3 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = (i == j ? 1.0 : 0.0) + s * rng.normal();
  const Vector d = Eigen::Map<const Vector>(kappas.data(), n);
  return B.partialPivLu().solve(d.asDiagonal() * B);
}

std::vector<double> brute_force_char_coeffs(const std::vector<double>& kappas) {
  const int n = static_cast<int>(kappas.size());
  std::vector<double> a(n + 1, 0.0);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    double prod = 1.0;
    int size = 0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        prod *= kappas[i];
        ++size;
      }
    }
    a[size] += (size % 2 ? -1.0 : 1.0) * prod;
  }
  return a;
}

bool PropsSummary::pass() const {
  return std::all_of(outcomes.begin(), outcomes.end(),
                     [](const PropertyOutcome& o) { return o.pass; });
}

std::vector<std::string> props_suites() {
  return {"lemma1", "cayley", "canonical", "product_rule", "all"};
}

namespace {

using TrialFn = std::function<void(CounterRng&, long, std::vector<double>&)>;

// Runs total trials in parallel, each filling one deviation per property,
// then reduces in trial order.
std::vector<PropertyOutcome> run_group(const std::vector<std::string>& names,
                                       const std::vector<double>& bounds, long total,
                                       std::uint64_t seed, std::uint64_t tag, const TrialFn& fn) {
  const std::size_t P = names.size();
  std::vector<std::vector<double>> devs(total, std::vector<double>(P, 0.0));
#pragma omp parallel for schedule(dynamic, 8)
  for (long t = 0; t < total; ++t) {
    CounterRng rng(seed, substream(static_cast<std::uint64_t>(t), tag));
    try {
      fn(rng, t, devs[t]);
    } catch (const std::exception&) {
      std::fill(devs[t].begin(), devs[t].end(), INFINITY);
    }
  }
  std::vector<PropertyOutcome> out(P);
  for (std::size_t p = 0; p < P; ++p) {
    out[p].name = names[p];
    out[p].bound = bounds[p];
    out[p].trials = total;
  }
  for (long t = 0; t < total; ++t) {
    for (std::size_t p = 0; p < P; ++p) {
      const double d = devs[t][p];
      auto& o = out[p];
      if (std::isnan(d) || d > o.max_deviation) o.max_deviation = std::isnan(d) ? INFINITY : d;
      if (o.pass && !(d <= o.bound)) {
        o.pass = false;
        o.failing_trial = t;
        o.failing_seed = seed;
      }
    }
  }
  return out;
}

double elem_abs(const std::vector<double>& kappas, int k) {
  std::vector<double> ab(kappas.size());
  for (std::size_t i = 0; i < kappas.size(); ++i) ab[i] = std::abs(kappas[i]);
  return k <= static_cast<int>(ab.size()) ? std::abs(brute_force_char_coeffs(ab)[k]) : 0.0;
}

double max_abs(const Matrix& M) { return M.cwiseAbs().maxCoeff(); }

std::vector<PropertyOutcome> lemma1_suite(int trials, std::uint64_t seed) {
  const std::vector<std::string> names = {
      "trace_P",          "trace_SP",       "trace_S2P",  "trace_H_forms",
      "explicit_P",       "char_coeffs_oracle", "identity_F", "mu_subset_oracle",
      "scalar_curvature"};
  const std::vector<double> bounds = {1e-10, 1e-10, 1e-10, 1e-10, 1e-10,
                                      1e-9,  1e-12, 1e-12, 1e-9};
  const long total = static_cast<long>(trials) * 14;
  return run_group(names, bounds, total, seed, 0x4c31, [trials](CounterRng& rng, long t,
                                                                std::vector<double>& d) {
    const int combo = static_cast<int>(t / trials);
    const int n = 2 + combo / 2;
    const int eps = combo % 2 ? -1 : 1;
    const int c = rng.uniform() < 0.5 ? -1 : 1;
    const ShapeData sd = random_shape(n, eps, c, rng);
    const CurvatureProfile pr = curvature_profile(sd, 1e-8);
    const TraceReport tr = lemma1_traces(sd.S, pr);
    const double sn = 1.0 + sd.S.norm();
    for (int k = 0; k <= n - 1; ++k) {
      const auto& e = tr.trP[k];
      d[0] = std::max(d[0], std::abs(e.measured - e.from_coeffs) / std::pow(sn, k));
      d[3] = std::max(d[3], std::abs(e.from_curvature - e.from_coeffs) / std::pow(sn, k));
    }
    for (int k = 1; k <= n - 1; ++k) {
      const auto& e = tr.trSP[k];
      d[1] = std::max(d[1], std::abs(e.measured - e.from_coeffs) / std::pow(sn, k + 1));
      d[3] = std::max(d[3], std::abs(e.from_curvature - e.from_coeffs) / std::pow(sn, k + 1));
    }
    for (int k = 1; k <= n - 2; ++k) {
      const auto& e = tr.trS2P[k];
      d[2] = std::max(d[2], std::abs(e.measured - e.from_coeffs) / std::pow(sn, k + 2));
      d[3] = std::max(d[3], std::abs(e.from_curvature - e.from_coeffs) / std::pow(sn, k + 2));
    }
    Matrix Sj = Matrix::Identity(n, n);
    std::vector<Matrix> powers;
    for (int j = 0; j <= n; ++j) {
      powers.push_back(Sj);
      Sj = Sj * sd.S;
    }
    for (int k = 0; k <= n; ++k) {
      Matrix Pk = Matrix::Zero(n, n);
      for (int j = 0; j <= k; ++j) Pk += pr.a[k - j] * powers[j];
      d[4] = std::max(d[4], max_abs(Pk - pr.P[k]) / std::pow(sn, k));
    }

    std::vector<double> kap;
    const Matrix D = random_diagonalizable(n, rng, kap);
    const std::vector<double> a = char_coeffs(D);
    const std::vector<double> oracle = brute_force_char_coeffs(kap);
    for (int k = 0; k <= n; ++k)
      d[5] = std::max(d[5], std::abs(a[k] - oracle[k]) / std::max(1.0, elem_abs(kap, k)));

    // identity (F) and mu_subset against enumeration
    std::vector<int> J;
    for (int i = 1; i <= n; ++i)
      if (rng.uniform() < 0.3) J.push_back(i);
    std::vector<double> rest;
    for (int i = 1; i <= n; ++i)
      if (std::find(J.begin(), J.end(), i) == J.end()) rest.push_back(kap[i - 1]);
    const std::vector<double> rest_coeffs = brute_force_char_coeffs(rest);
    for (int k = 0; k <= n; ++k) {
      const double mu = mu_subset(kap, k, J);
      const double ref = k <= static_cast<int>(rest.size())
                             ? (k % 2 ? -1.0 : 1.0) * rest_coeffs[k]
                             : 0.0;
      d[7] = std::max(d[7], std::abs(mu - ref) / std::max(1.0, elem_abs(rest, std::min<int>(k, rest.size()))));
      for (int m : std::vector<int>{1, n}) {
        if (std::find(J.begin(), J.end(), m) != J.end() || k < 1) continue;
        std::vector<int> Jm = J;
        Jm.push_back(m);
        const double rhs = kap[m - 1] * mu_subset(kap, k - 1, Jm) + mu_subset(kap, k, Jm);
        d[6] = std::max(d[6], std::abs(mu - rhs) / std::max(1.0, elem_abs(kap, k)));
      }
    }

    const RicciScalar rs = ricci_and_scalar(sd, pr);
    d[8] = std::abs(rs.scal_trace - rs.scal_closed) /
           (1.0 + n * (n - 1) * (1.0 + std::abs(pr.H[2])));
  });
}

// Canonical parameters with the extra kappas kept 0.3 apart from each other
// and from kappa, so that round trips are well posed.
CanonicalForm random_canonical(CanonicalKind kind, CounterRng& rng) {
  const int bs = kind == CanonicalKind::I ? 1 : kind == CanonicalKind::IV ? 3 : 2;
  const int n = rng.uniform_int(std::max(bs, 2), 8);
  const double kappa = rng.uniform(-3.0, 3.0);
  const double b = kind == CanonicalKind::II ? rng.uniform(0.1, 3.0) : 0.0;
  const int extra = kind == CanonicalKind::I ? n : n - bs;
  std::vector<double> kappas;
  for (int tries = 0; static_cast<int>(kappas.size()) < extra && tries < 10000; ++tries) {
    const double v = rng.uniform(-3.0, 3.0);
    bool ok = kind == CanonicalKind::I || std::abs(v - kappa) >= 0.3;
    for (double w : kappas) ok = ok && std::abs(v - w) >= 0.3;
    if (ok) kappas.push_back(v);
  }
  if (static_cast<int>(kappas.size()) < extra) throw std::runtime_error("random_canonical: no room");
  return make_canonical(kind, kind == CanonicalKind::I ? 0.0 : kappa, b, kappas);
}

const CanonicalKind kAllKinds[] = {CanonicalKind::I, CanonicalKind::II, CanonicalKind::III,
                                   CanonicalKind::IV};

std::vector<PropertyOutcome> cayley_suite(int trials, std::uint64_t seed) {
  const std::vector<std::string> names = {"cayley_random", "cayley_kind_I", "cayley_kind_II",
                                          "cayley_kind_III", "cayley_kind_IV"};
  const std::vector<double> bounds(5, 1e-8);
  const long total = static_cast<long>(trials) * 14;
  return run_group(names, bounds, total, seed, 0x4348, [trials](CounterRng& rng, long t,
                                                                std::vector<double>& d) {
    const int combo = static_cast<int>(t / trials);
    const int n = 2 + combo / 2;
    const int eps = combo % 2 ? -1 : 1;
    auto pn_dev = [](const Matrix& S) {
      const int nn = static_cast<int>(S.rows());
      const std::vector<double> a = char_coeffs(S);
      Matrix P = Matrix::Identity(nn, nn);
      for (int k = 1; k <= nn; ++k) P = a[k] * Matrix::Identity(nn, nn) + S * P;
      return max_abs(P) / std::pow(std::max(1.0, S.norm()), nn);
    };
    d[0] = pn_dev(random_shape(n, eps, 1, rng).S);
    for (int i = 0; i < 4; ++i) d[1 + i] = pn_dev(canonical_shape(random_canonical(kAllKinds[i], rng)));
  });
}

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<PropertyOutcome> canonical_suite(int trials, std::uint64_t seed) {
  std::vector<PropertyOutcome> all;
  for (int i = 0; i < 4; ++i) {
    const CanonicalKind kind = kAllKinds[i];
    const std::string tag = to_string(kind);
    const std::vector<std::string> names = {"pk_formula_kind_" + tag, "round_trip_kind_" + tag,
                                            "char_coeffs_kind_" + tag};
    const std::vector<double> bounds = {1e-9, 1e-6, 1e-9};
    auto part = run_group(names, bounds, trials, seed, 0x4346 + i, [kind](CounterRng& rng, long,
                                                                          std::vector<double>& d) {
      const CanonicalForm form = random_canonical(kind, rng);
      const Matrix S = canonical_shape(form);
      const int n = form.n();
      const double sn = std::max(1.0, S.norm());
      for (int k = 0; k <= n - 1; ++k) {
        const PkCheck pc = canonical_pk_check(form, k, 1e-9);
        d[0] = std::max(d[0], pc.deviation / std::pow(sn, k));
      }

      const CanonicalForm back = classify(S, 1e-8);
      if (back.kind != form.kind) {
        d[1] = INFINITY;
      } else {
        const auto p0 = sorted(form.principal_list());
        const auto p1 = sorted(back.principal_list());
        double e = std::abs(back.b_rot - form.b_rot);
        if (form.kind != CanonicalKind::I) e = std::max(e, std::abs(back.kappa - form.kappa));
        for (std::size_t j = 0; j < p0.size() && j < p1.size(); ++j)
          e = std::max(e, std::abs(p0[j] - p1[j]));
        d[1] = p0.size() == p1.size() ? e : INFINITY;
      }

      const std::vector<double> a = char_coeffs(S);
      const std::vector<double> pl = form.principal_list();
      const double b2 = form.b_rot * form.b_rot;
      const std::vector<int> J12 = {1, 2};
      for (int k = 0; k <= n; ++k) {
        double expect = mu_subset(pl, k);
        double scale = std::max(1.0, elem_abs(pl, k));
        if (kind == CanonicalKind::II) {
          expect += b2 * mu_subset(pl, k - 2, J12);
          scale += b2 * std::abs(mu_subset(pl, k - 2, J12));
        }
        expect *= k % 2 ? -1.0 : 1.0;
        d[2] = std::max(d[2], std::abs(a[k] - expect) / scale);
      }
    });
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

std::vector<PropertyOutcome> product_rule_suite(int trials, std::uint64_t seed) {
  PropertyOutcome dual{"dual_path_catalog", 0.0, 1e-8, true, -1, 0, 0};
  PropertyOutcome prod{"product_rule_catalog", 0.0, 1e-8, true, -1, 0, 0};
  PropertyOutcome gauss{"dual_path_gauss_catalog", 0.0, 1e-9, true, -1, 0, 0};
  long offset = 0;
  for (const std::string& id : standard_catalog_ids()) {
    const HypersurfaceExample ex = example_from_id(id);
    const std::vector<Vector> xs = ex.sample(4, seed);
    for (int k = 0; k <= ex.n() - 1; ++k) {
      const std::vector<PointEvaluation> evals = evaluate_samples(ex, xs, k);
      std::vector<double> dd(trials), dp(trials);
#pragma omp parallel for schedule(static)
      for (int j = 0; j < trials; ++j) {
        CounterRng rng(seed, substream(static_cast<std::uint64_t>(offset + j), 0x5052));
        Vector a1(ex.dim()), a2(ex.dim());
        for (int i = 0; i < ex.dim(); ++i) a1(i) = rng.normal();
        for (int i = 0; i < ex.dim(); ++i) a2(i) = rng.normal();
        const PointEvaluation& pe = evals[j % evals.size()];
        dd[j] = lk_coord(a1, pe, ex.space).deviation();
        dp[j] = product_rule_check(a1, a2, pe, ex.space);
      }
      for (int j = 0; j < trials; ++j) {
        for (auto* pr : {&dual, &prod}) {
          const double v = pr == &dual ? dd[j] : dp[j];
          pr->max_deviation = std::max(pr->max_deviation, v);
          if (pr->pass && !(v <= pr->bound)) {
            pr->pass = false;
            pr->failing_trial = offset + j;
            pr->failing_seed = seed;
          }
        }
      }
      for (const auto& pe : evals) {
        gauss.max_deviation = std::max(gauss.max_deviation, pe.gauss_dev);
        if (gauss.pass && !(pe.gauss_dev <= gauss.bound)) {
          gauss.pass = false;
          gauss.failing_trial = offset;
          gauss.failing_seed = seed;
        }
      }
      offset += trials;
    }
  }
  dual.trials = prod.trials = offset;
  gauss.trials = offset;
  return {dual, prod, gauss};
}

}  // namespace

PropsSummary run_props(const std::string& suite, int trials, std::uint64_t seed) {
  const auto names = props_suites();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    throw std::invalid_argument("unknown suite '" + suite + "'");
  if (trials < 0) throw std::invalid_argument("trials must be non-negative");
  PropsSummary sum;
  sum.suite = suite;
  if (trials == 0) {
    sum.vacuous = true;
    return sum;
  }
  auto add = [&](std::vector<PropertyOutcome> v) {
    sum.outcomes.insert(sum.outcomes.end(), v.begin(), v.end());
  };
  if (suite == "lemma1" || suite == "all") add(lemma1_suite(trials, seed));
  if (suite == "cayley" || suite == "all") add(cayley_suite(trials, seed));
  if (suite == "canonical" || suite == "all") add(canonical_suite(trials, seed));
  if (suite == "product_rule" || suite == "all") add(product_rule_suite(trials, seed));
  return sum;
}

}  // namespace lkgeo
