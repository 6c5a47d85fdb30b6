#include <doctest.h>

#include <cmath>
#include <vector>

#include "lkgeo/canonical_forms.hpp"
#include "lkgeo/curvature.hpp"

using namespace lkgeo;

namespace {
ShapeData diag_shape(std::initializer_list<double> d, int eps = 1, int c = 1) {
  const int n = static_cast<int>(d.size());
  Matrix S = Matrix::Zero(n, n);
  int i = 0;
  for (double v : d) S(i, i) = v, ++i;
  return ShapeData::make(S, Matrix::Identity(n, n), eps, c);
}
}  // namespace

TEST_CASE("characteristic coefficients") {
  auto a = char_coeffs(diag_shape({1, 2}));
  REQUIRE(a.size() == 3);
  CHECK(a[0] == 1.0);
  CHECK(a[1] == doctest::Approx(-3.0));
  CHECK(a[2] == doctest::Approx(2.0));

  a = char_coeffs(Matrix::Zero(4, 4));
  CHECK(a == std::vector<double>{1, 0, 0, 0, 0});

  Matrix T(2, 2);
  T << 1, -2, 2, 1;
  a = char_coeffs(T);
  CHECK(a[1] == doctest::Approx(-2.0));
  CHECK(a[2] == doctest::Approx(5.0));
}

TEST_CASE("mean curvatures from coefficients") {
  auto H = mean_curvatures({1, -3, 2}, 1, 2);
  CHECK(H[0] == 1.0);
  CHECK(H[1] == doctest::Approx(1.5));
  CHECK(H[2] == doctest::Approx(2.0));
  H = mean_curvatures({1, -3, 2}, -1, 2);
  CHECK(H[1] == doctest::Approx(-1.5));
  CHECK(H[2] == doctest::Approx(2.0));
  H = mean_curvatures({1, 0, 0, 0}, -1, 3);
  CHECK(H[1] == 0.0);
  CHECK(H[3] == 0.0);
}

TEST_CASE("newton transformations") {
  const ShapeData s = diag_shape({1, 2});
  const auto P = newton_transforms(s.S, {1, -3, 2});
  REQUIRE(P.size() == 3);
  CHECK(P[0].isIdentity());
  CHECK(P[1](0, 0) == doctest::Approx(-2.0));
  CHECK(P[1](1, 1) == doctest::Approx(-1.0));
  CHECK(P[1](0, 1) == 0.0);
  CHECK(P[2].norm() < 1e-14);
  CHECK_THROWS_AS(newton_transforms(s.S, {1, -3, 5}), ConsistencyError);
}

TEST_CASE("binomials and constants") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(20, 10) == 184756);
  CHECK(binomial(3, 4) == 0);
  // c_k = (-eps)^k (n-k) C(n,k)
  CHECK(newton_constant(3, 1, 1) == doctest::Approx(-6.0));
  CHECK(newton_constant(3, 1, -1) == doctest::Approx(6.0));
  CHECK(newton_constant(4, 2, 1) == doctest::Approx(12.0));
  CHECK(newton_constant(3, 0, -1) == doctest::Approx(3.0));
}

TEST_CASE("curvature profile invariants") {
  const auto pr = curvature_profile(diag_shape({1, 2, -0.5}, -1, -1));
  CHECK(pr.a[0] == 1.0);
  CHECK(pr.H[0] == 1.0);
  CHECK(pr.P[0].isIdentity());
  for (int k = 0; k <= 3; ++k) {
    CHECK(binomial(3, k) * pr.H[k] == doctest::Approx(std::pow(1.0, k) * pr.a[k]));
    CHECK(pr.Ck[k] == doctest::Approx(pr.ck[k] / (k + 1)));
  }
  CHECK(pr.H_at(4) == 0.0);
  CHECK(pr.H_at(-1) == 0.0);
}

TEST_CASE("lemma one traces on diag(1,2)") {
  const ShapeData s = diag_shape({1, 2});
  const auto pr = curvature_profile(s);
  const auto tr = lemma1_traces(s.S, pr);
  CHECK(tr.trP[1].measured == doctest::Approx(-3.0));
  CHECK(tr.trP[1].from_coeffs == doctest::Approx(-3.0));
  CHECK(tr.trSP[0].measured == doctest::Approx(3.0));
  CHECK(tr.trSP[0].from_coeffs == doctest::Approx(3.0));
  for (int k = 0; k < 2; ++k) {
    CHECK(tr.trP[k].from_curvature == doctest::Approx(tr.trP[k].from_coeffs));
    CHECK(tr.trSP[k].from_curvature == doctest::Approx(tr.trSP[k].from_coeffs));
  }
  const auto z = lemma1_traces(Matrix::Zero(3, 3), curvature_profile(diag_shape({0, 0, 0})));
  for (int k = 1; k < 3; ++k) CHECK(z.trP[k].measured == 0.0);
}

TEST_CASE("mu subsets") {
  const std::vector<double> k = {1, 2, 3};
  CHECK(mu_subset(k, 2) == doctest::Approx(11.0));
  const std::vector<int> J = {2};
  CHECK(mu_subset(k, 1, J) == doctest::Approx(4.0));
  CHECK(mu_subset(k, 0) == 1.0);
  CHECK(mu_subset(k, 3, J) == 0.0);
  CHECK(mu_subset(k, -1) == 0.0);
  // identity (F) with m = 1
  const std::vector<int> J1 = {1};
  CHECK(mu_subset(k, 2) == doctest::Approx(k[0] * mu_subset(k, 1, J1) + mu_subset(k, 2, J1)));
}

TEST_CASE("ricci and scalar curvature") {
  auto s = diag_shape({0, 0, 0}, 1, 1);
  auto rs = ricci_and_scalar(s, curvature_profile(s));
  CHECK(rs.scal_closed == doctest::Approx(6.0));
  CHECK(rs.scal_trace == doctest::Approx(6.0));
  CHECK((rs.ric - 2.0 * s.gram).norm() < 1e-14);

  s = diag_shape({1, 2}, 1, 1);
  rs = ricci_and_scalar(s, curvature_profile(s));
  CHECK(rs.scal_closed == doctest::Approx(6.0));
  CHECK(rs.scal_trace == doctest::Approx(6.0));

  // H_2 = -c eps: kappa1 kappa2 = -1 with eps = c = 1
  s = diag_shape({1, -1}, 1, 1);
  rs = ricci_and_scalar(s, curvature_profile(s));
  CHECK(std::abs(rs.scal_closed) < 1e-14);
  CHECK(std::abs(rs.scal_trace) < 1e-14);
}

TEST_CASE("scalar curvature on a Lorentzian type II operator") {
  const CanonicalForm f = make_canonical(CanonicalKind::II, 0.5, 1.5, {0.3});
  const ShapeData s = ShapeData::make(canonical_shape(f), canonical_gram(f), 1, -1);
  const auto pr = curvature_profile(s);
  const auto rs = ricci_and_scalar(s, pr);
  CHECK(rs.scal_trace == doctest::Approx(rs.scal_closed).epsilon(1e-12));
}

TEST_CASE("shape data validation") {
  Matrix S(2, 2);
  S << 0, 1, 0, 0;
  CHECK_THROWS_AS(ShapeData::make(S, Matrix::Identity(2, 2), 1, 1), ContractViolation);
  CHECK_THROWS_AS(ShapeData::make(Matrix::Zero(2, 2), Matrix::Identity(2, 2), 2, 1),
                  ContractViolation);
}
