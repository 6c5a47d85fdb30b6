#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lkgeo/canonical_forms.hpp"

using namespace lkgeo;

TEST_CASE("classify a diagonal operator") {
  Matrix S = Matrix::Zero(3, 3);
  S.diagonal() << 1, 2, 3;
  const CanonicalForm f = classify(S);
  CHECK(f.kind == CanonicalKind::I);
  REQUIRE(f.kappas.size() == 3);
  CHECK(f.kappas[0] == doctest::Approx(1.0));
  CHECK(f.kappas[2] == doctest::Approx(3.0));
  CHECK(f.frame_kind == FrameKind::orthonormal);
}

TEST_CASE("classify a complex pair") {
  Matrix S(2, 2);
  S << 1, -2, 2, 1;
  Matrix gram = Matrix::Identity(2, 2);
  gram(0, 0) = -1.0;
  const ShapeData sd = ShapeData::make(S, gram, 1, 1);
  const CanonicalForm f = classify(sd);
  CHECK(f.kind == CanonicalKind::II);
  CHECK(f.kappa == doctest::Approx(1.0));
  CHECK(f.b_rot == doctest::Approx(2.0));
  CHECK(f.kappas.empty());
}

TEST_CASE("type II orientation of the canonical block") {
  const CanonicalForm f = make_canonical(CanonicalKind::II, 1.0, 2.0, {});
  const Matrix S = canonical_shape(f);
  // S E1 = k E1 - b E2, S E2 = b E1 + k E2
  CHECK(S(0, 0) == 1.0);
  CHECK(S(1, 0) == -2.0);
  CHECK(S(0, 1) == 2.0);
  CHECK(self_adjoint_defect(S, canonical_gram(f)) == 0.0);
  const CanonicalForm back = classify(S);
  CHECK(back.kind == CanonicalKind::II);
  CHECK(back.b_rot == doctest::Approx(2.0));
}

TEST_CASE("classify Jordan blocks") {
  const CanonicalForm f3 = make_canonical(CanonicalKind::III, -0.7, 0.0, {1.5, 2.5});
  const CanonicalForm b3 = classify(canonical_shape(f3));
  CHECK(b3.kind == CanonicalKind::III);
  CHECK(b3.kappa == doctest::Approx(-0.7));
  CHECK(b3.frame_kind == FrameKind::pseudo_orthonormal);
  REQUIRE(b3.kappas.size() == 2);
  CHECK(b3.kappas[1] == doctest::Approx(2.5));

  const CanonicalForm f4 = make_canonical(CanonicalKind::IV, 0.4, 0.0, {-1.0});
  const CanonicalForm b4 = classify(canonical_shape(f4));
  CHECK(b4.kind == CanonicalKind::IV);
  CHECK(b4.kappa == doctest::Approx(0.4));
  CHECK(self_adjoint_defect(canonical_shape(f4), canonical_gram(f4)) == 0.0);
  CHECK(self_adjoint_defect(canonical_shape(f3), canonical_gram(f3)) == 0.0);
}

TEST_CASE("classification is basis independent") {
  const CanonicalForm f = make_canonical(CanonicalKind::III, 0.5, 0.0, {-2.0});
  Matrix B(3, 3);
  B << 1, 0.3, -0.2, 0.1, 1, 0.4, -0.3, 0.2, 1;
  const Matrix S = B.inverse() * canonical_shape(f) * B;
  CHECK(classify(S).kind == CanonicalKind::III);
}

TEST_CASE("unsupported Jordan structures are rejected") {
  Matrix S = Matrix::Zero(4, 4);
  S(1, 0) = 1.0;
  S(3, 2) = 1.0;
  S(2, 2) = S(3, 3) = 2.0;
  CHECK_THROWS_AS(classify(S), ClassificationError);
  CHECK_THROWS_AS(make_canonical(CanonicalKind::II, 0.0, 0.0, {}), ContractViolation);
}

TEST_CASE("newton transformations in canonical frames") {
  const CanonicalForm f1 = make_canonical(CanonicalKind::I, 0.0, 0.0, {1, 2, 3});
  const PkCheck p1 = canonical_pk_check(f1, 1);
  CHECK(p1.ok);
  CHECK(p1.deviation < 1e-14);
  // P_1 E_1 = -(2 + 3) E_1
  CHECK(canonical_pk_expected(f1, 1)(0, 0) == doctest::Approx(-5.0));

  const CanonicalForm f2 = make_canonical(CanonicalKind::II, 1.0, 2.0, {});
  const Matrix P = canonical_pk_expected(f2, 1);
  CHECK(P(0, 0) == doctest::Approx(-1.0));
  CHECK(P(1, 0) == doctest::Approx(-2.0));
  CHECK(canonical_pk_check(f2, 1).ok);

  const CanonicalForm f3 = make_canonical(CanonicalKind::III, 0.3, 0.0, {0.9});
  CHECK(canonical_pk_check(f3, 0).deviation == 0.0);
  for (int k = 0; k < 3; ++k) CHECK(canonical_pk_check(f3, k).ok);

  const CanonicalForm f4 = make_canonical(CanonicalKind::IV, -1.2, 0.0, {0.5, 2.0});
  for (int k = 0; k < 5; ++k) CHECK(canonical_pk_check(f4, k).ok);
}

TEST_CASE("principal list repeats the block eigenvalue") {
  const CanonicalForm f = make_canonical(CanonicalKind::IV, 2.0, 0.0, {5.0});
  const auto pl = f.principal_list();
  CHECK(pl == std::vector<double>{2.0, 2.0, 2.0, 5.0});
  CHECK(f.n() == 4);
  CHECK(to_string(CanonicalKind::III) == "III");
}
