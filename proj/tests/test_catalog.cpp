#include <doctest.h>

#include <cmath>
#include <string>

#include "lkgeo/catalog.hpp"
#include "lkgeo/verification.hpp"

using namespace lkgeo;

TEST_CASE("umbilical closed forms") {
  const auto ex = example_from_id("umbilical:c=1,aa=1,tau=0.5");
  CHECK(ex.eps == 1);
  CHECK(ex.listed_eps == 1);
  CHECK(ex.n() == 3);
  CHECK(ex.H_closed[1] == doctest::Approx(0.5 / std::sqrt(0.75)));
  CHECK(ex.metadata.find("S^3_1") != std::string::npos);
  const auto p = ex.predicted(0);
  CHECK(p.b.norm() > 0.0);

  const auto flat = example_from_id("umbilical:c=1,aa=1,tau=0");
  for (int k = 1; k <= 3; ++k) CHECK(flat.H_closed[k] == 0.0);
  for (int k = 0; k < 3; ++k) CHECK(flat.predicted(k).b.norm() == 0.0);
}

TEST_CASE("umbilical causal characters match the case lists") {
  for (const auto& id : standard_catalog_ids()) {
    const auto ex = example_from_id(id);
    CAPTURE(id);
    CHECK(ex.eps == ex.listed_eps);
  }
}

TEST_CASE("null slices need tau != 0") {
  CHECK_THROWS_AS(example_from_id("umbilical:c=1,aa=0,tau=0"), CatalogError);
}

TEST_CASE("product principal curvatures") {
  const auto a = example_from_id("product:c=1,d1=1,rho=1,r=0.6,m=1,n=3");
  REQUIRE(a.kappas.size() == 3);
  CHECK(a.kappas[0] == doctest::Approx(-4.0 / 3.0));
  CHECK(a.kappas[1] == doctest::Approx(0.75));
  CHECK(a.kappas[2] == doctest::Approx(0.75));
  CHECK(a.metadata == "S^1_1(0.6) x S^2(0.8)");

  const auto b = example_from_id("product:c=-1,d1=1,rho=-1,r=2,m=1,n=3");
  CHECK(b.kappas[0] == doctest::Approx(std::sqrt(3.0) / 2.0));
  CHECK(b.kappas[1] == doctest::Approx(2.0 / std::sqrt(3.0)));
}

TEST_CASE("excluded product tuples are rejected") {
  CHECK_THROWS_AS(example_from_id("product:c=1,d1=0,rho=-1,r=0.5,m=1"), CatalogError);
  CHECK_THROWS_AS(example_from_id("product:c=-1,d1=1,rho=1,r=0.5,m=1"), CatalogError);
  CHECK_THROWS_AS(example_from_id("product:c=1,d1=1,rho=1,r=0.6,m=3,n=3"), CatalogError);
}

// The lambda/theta/mu display carries c on the H_{k+1} term; the derivation
// through N = (D - rho c r^2) x / s does not. They agree for c = 1 only.
TEST_CASE("product eigenvalues of A with and without the extra factor c") {
  for (const std::string id : {"product:c=1,d1=0,rho=1,r=2,m=2", "product:c=-1,d1=1,rho=-1,r=2,m=1"}) {
    const auto ex = example_from_id(id);
    const int c = ex.c();
    const auto& P = ex.product;
    const double s = P.r * std::sqrt(std::abs(P.rho - c * P.r * P.r));
    const double rcr = P.rho * c * P.r * P.r;
    const int k = 1;
    const double ck = newton_constant(ex.n(), k, ex.eps);
    const double Hk = ex.H_at(k), Hk1 = ex.H_at(k + 1);
    const double shown = c * ck * Hk1 * (P.delta2 - rcr) / s - c * ck * Hk;
    const double derived = ck * Hk1 * (P.delta2 - rcr) / s - c * ck * Hk;
    const auto pred = ex.predicted(k);
    const double last = pred.A(ex.dim() - 1, ex.dim() - 1);
    CHECK(last == doctest::Approx(derived));
    if (c == 1) {
      CHECK(shown == doctest::Approx(derived));
    } else {
      CHECK(std::abs(shown - derived) > 0.1);
      VerifyOptions opt;
      opt.k = k;
      const auto rep = verify_example(ex, opt);
      CHECK(std::abs(rep.A_recovered(ex.dim() - 1, ex.dim() - 1) - derived) < 1e-6);
    }
  }
}

TEST_CASE("quadric with complex principal curvatures") {
  const auto ex = example_from_id("quadric:c=-1,R=J2,d=1");
  CHECK(ex.n() == 2);
  REQUIRE(ex.mu_S.size() == 3);
  CHECK(ex.mu_S[0] == doctest::Approx(1.0));
  CHECK(ex.mu_S[1] == doctest::Approx(std::sqrt(2.0)));
  CHECK(ex.expected_kind == CanonicalKind::II);
  CHECK(ex.eps == 1);
  const Matrix R = quadric_matrix("J2", 2);
  CHECK((R * R + Matrix::Identity(4, 4)).norm() == 0.0);
}

TEST_CASE("quadric with a nilpotent matrix") {
  const Matrix R = quadric_matrix("N2", 3);
  CHECK((R * R).norm() == 0.0);
  const auto ex = example_from_id("quadric:c=-1,R=N2,d=1");
  CHECK(ex.expected_kind == CanonicalKind::III);
}

TEST_CASE("quadric matrices must have a degree two minimal polynomial") {
  QuadricParams p;
  p.c = -1;
  p.R = Matrix::Identity(4, 4);
  p.d = 1.0;
  CHECK_THROWS_AS(quadratic_hypersurface(p, 2), CatalogError);
  CHECK_THROWS_AS(quadric_matrix("J2", 3), CatalogError);
}

TEST_CASE("k-maximal products") {
  const auto ex = k_maximal_flat_example(2, 0);
  CHECK(ex.product.r == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(std::abs(ex.H_closed[1]) < 1e-12);
  const auto A = ex.predicted(0).A;
  CHECK((A - A(0, 0) * Matrix::Identity(4, 4)).norm() == 0.0);
  CHECK_THROWS_AS(k_maximal_flat_example(3, 2), CatalogError);
  const auto e3 = k_maximal_flat_example(3, 1);
  CHECK(std::abs(e3.H_closed[2]) < 1e-12);
}

TEST_CASE("id grammar") {
  CHECK(example_from_id("umbilical:tau=0.5,aa=1,c=1").id == "umbilical:tau=0.5,aa=1,c=1");
  CHECK_THROWS_AS(example_from_id("sphere:c=1"), CatalogError);
  CHECK_THROWS_AS(example_from_id("umbilical:c=1,aa=1"), CatalogError);
  CHECK_THROWS_AS(example_from_id("umbilical:c=1,c=1,aa=1,tau=0.5"), CatalogError);
  CHECK_THROWS_AS(example_from_id("umbilical:c=2,aa=1,tau=0.5"), CatalogError);
  CHECK_THROWS_AS(example_from_id("umbilical:c=1,aa=1,tau=abc"), CatalogError);
  CHECK_THROWS_AS(example_from_id("umbilical:c=1,aa=1,tau=0.5,n=40"), CatalogError);
  CHECK(example_from_id("umbilical:c=1,aa=1,tau=0.5,n=5").n() == 5);
  CHECK_FALSE(catalog_families().empty());
}

TEST_CASE("samples lie on the hypersurface and are reproducible") {
  for (const auto& id : standard_catalog_ids()) {
    const auto ex = example_from_id(id);
    CAPTURE(id);
    const auto xs = ex.sample(40, 7);
    const auto ys = ex.sample_serial(40, 7);
    REQUIRE(xs.size() == 40);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      CHECK(xs[i] == ys[i]);
      CHECK(ex.constraint_residual(xs[i]) <= 1e-10 * (1.0 + xs[i].squaredNorm()));
      const Vector N = ex.gauss_map(xs[i]);
      CHECK(std::abs(inner(N, N, ex.space.signature()) - ex.eps) < 1e-10 * (1.0 + xs[i].squaredNorm()));
    }
    CHECK(ex.sample(3, 8)[0] != xs[0]);
  }
}
