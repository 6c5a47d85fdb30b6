#include <doctest.h>

#include <cmath>

#include "lkgeo/catalog.hpp"
#include "lkgeo/rng.hpp"
#include "lkgeo/verification.hpp"

using namespace lkgeo;

namespace {
const CheckResult* find(const VerificationReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}
}  // namespace

TEST_CASE("tangential parts of the position and the normal vanish") {
  const auto ex = example_from_id("product:c=1,d1=1,rho=1,r=0.6,m=1");
  const Vector x = ex.sample(1, 3)[0];
  const Vector N = ex.gauss_map(x);
  CHECK(grad_coord(x, x, N, ex.space).norm() < 1e-12);
  CHECK(grad_coord(N, x, N, ex.space).norm() < 1e-12);
  CounterRng rng(5, 0);
  Vector a(ex.dim());
  for (int i = 0; i < ex.dim(); ++i) a(i) = rng.normal();
  const Vector g = grad_coord(a, x, N, ex.space);
  CHECK(std::abs(inner(g, x, ex.space.signature())) < 1e-12);
  CHECK(std::abs(inner(g, N, ex.space.signature())) < 1e-12);
}

TEST_CASE("coordinate hessians") {
  const auto ex = example_from_id("umbilical:c=1,aa=1,tau=0.5");
  const Vector x = ex.sample(1, 11)[0];
  const Vector N = ex.gauss_map(x);
  const ShapeData s = ex.shape_at(x);
  const Signature& sig = ex.space.signature();
  const Matrix I = Matrix::Identity(s.n(), s.n());
  CHECK((hessian_coord(N, s, x, N, sig) - s.S).norm() < 1e-12);
  CHECK((hessian_coord(x, s, x, N, sig) + I).norm() < 1e-12);
  const TangentSpace ts = ex.tangent_at(x);
  CHECK(hessian_coord(ts.basis.col(0), s, x, N, sig).norm() < 1e-12);
}

TEST_CASE("L_0 is the trace of the hessian") {
  const auto ex = example_from_id("quadric:c=-1,R=J2,d=1");
  const auto pe = evaluate_point(ex, ex.sample(1, 2)[0], 0);
  Vector a = Vector::Zero(ex.dim());
  a(1) = 1.0;
  const DualPath dp = lk_coord(a, pe, ex.space);
  const Matrix H = hessian_coord(a, pe.shape, pe.x, pe.N, ex.space.signature());
  CHECK(dp.trace == doctest::Approx(H.trace()));
  CHECK(dp.deviation() < 1e-12);
}

TEST_CASE("dual paths and product rule at a point") {
  const auto ex = example_from_id("product:c=-1,d1=0,rho=1,r=0.6,m=1");
  const auto xs = ex.sample(3, 1);
  for (int k = 0; k < ex.n(); ++k) {
    const auto pe = evaluate_point(ex, xs[0], k);
    CHECK(pe.dual_path_dev < 1e-12);
    CHECK(pe.gauss_dev < 1e-12);
    CounterRng rng(9, k);
    Vector a(ex.dim()), b(ex.dim());
    for (int i = 0; i < ex.dim(); ++i) a(i) = rng.normal(), b(i) = rng.normal();
    CHECK(product_rule_check(a, b, pe, ex.space) < 1e-12);
    CHECK(product_rule_check(a, a, pe, ex.space) < 1e-12);
  }
}

TEST_CASE("product rule with a constant factor") {
  const auto ex = example_from_id("umbilical:c=-1,aa=-1,tau=0.5");
  const auto pe = evaluate_point(ex, ex.sample(1, 4)[0], 1);
  Vector a1 = Vector::Zero(ex.dim());
  a1(3) = 1.0;
  CHECK(product_rule_check(a1, ex.normal.v, pe, ex.space) < 1e-12);
}

TEST_CASE("exact recovery from synthetic affine data") {
  const Signature sig(4, 1);
  Matrix A0(4, 4);
  A0 << 1, 2, 0, -1, 0, 3, 1, 1, 2, 0, -2, 0, 1, 1, 1, 1;
  Vector b0(4);
  b0 << 0.5, -1, 2, 0;
  CounterRng rng(1, 0);
  std::vector<Vector> xs, ys;
  for (int i = 0; i < 60; ++i) {
    Vector x(4);
    for (int j = 0; j < 4; ++j) x(j) = rng.normal();
    xs.push_back(x);
    ys.push_back(A0 * x + b0);
  }
  const AffineFit fit = recover_affine(xs, ys, sig, false);
  CHECK((fit.A - A0).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((fit.b - b0).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(fit.nullity == 0);
  CHECK(fit.residual_max < 1e-10);

  // G A symmetric
  const Matrix G = sig.metric();
  const Matrix Sym = A0 + A0.transpose();
  const Matrix As = G * Sym;
  for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = As * xs[i] + b0;
  const AffineFit sa = recover_affine(xs, ys, sig, true);
  CHECK((sa.A - As).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((sa.b - b0).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("recovery rejects short or degenerate designs") {
  const Signature sig(3, 1);
  std::vector<Vector> xs(10, Vector::Ones(3)), ys(10, Vector::Ones(3));
  CHECK_THROWS_AS(recover_affine(xs, ys, sig, false), RecoveryError);
  xs.assign(min_samples(3), Vector::Ones(3));
  ys.assign(min_samples(3), Vector::Ones(3));
  CHECK_THROWS_AS(recover_affine(xs, ys, sig, false), RecoveryError);
}

TEST_CASE("product recovery reproduces the diagonal A") {
  const auto ex = example_from_id("product:c=1,d1=1,rho=1,r=0.6,m=1,n=3");
  VerifyOptions opt;
  opt.k = 0;
  const auto rep = verify_example(ex, opt);
  CHECK(rep.pass());
  CHECK((rep.A_recovered - rep.A_predicted).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(rep.b_recovered.cwiseAbs().maxCoeff() < 1e-6);
  const Matrix& A = rep.A_predicted;
  // d1 = 1: theta coincides with lambda on the first factor
  CHECK(A(0, 0) == doctest::Approx(A(1, 1)));
  CHECK(A(2, 2) == doctest::Approx(A(4, 4)));
  CHECK(A(0, 0) != doctest::Approx(A(2, 2)));
  CHECK(find(rep, "S_quadratic")->pass);
}

TEST_CASE("umbilical recovery gives b parallel to a") {
  const auto ex = example_from_id("umbilical:c=-1,aa=-1,tau=0.5");
  VerifyOptions opt;
  opt.k = 1;
  const auto rep = verify_example(ex, opt);
  CHECK(rep.pass());
  CHECK(rep.b_recovered.norm() > 0.1);
  REQUIRE(find(rep, "b_parallel_a") != nullptr);
  CHECK(find(rep, "b_normal_relation")->pass);
  CHECK(find(rep, "b_tangential")->measured < 1e-9);
}

TEST_CASE("self-adjoint recovery agrees") {
  const auto ex = example_from_id("quadric:c=-1,R=N2,d=1");
  VerifyOptions opt;
  opt.k = 2;
  opt.enforce_self_adjoint = true;
  const auto rep = verify_example(ex, opt);
  CHECK(rep.pass());
  CHECK(rep.A_nondiagonalizable);
  CHECK(rep.shape_kind == "III");
}

TEST_CASE("theorem two checks need b != 0") {
  const auto ex = example_from_id("umbilical:c=1,aa=1,tau=0");
  CHECK_THROWS_AS(theorem2_checks(ex, 0, {}, Vector::Zero(ex.dim())), ContractViolation);
}

TEST_CASE("totally geodesic slices only check the scalar form") {
  const auto ex = example_from_id("umbilical:c=1,aa=1,tau=0");
  const auto xs = ex.sample(5, 1);
  const auto ev = evaluate_samples(ex, xs, 1);
  const auto res = theorem1_checks(ex, 1, ev, ex.predicted(1).A);
  REQUIRE(res.size() == 1);
  CHECK(res[0].name == "A_scalar");
  CHECK(res[0].pass);
}

TEST_CASE("k out of range") {
  const auto ex = example_from_id("product:c=1,d1=1,rho=1,r=0.6,m=1");
  VerifyOptions opt;
  opt.k = 3;
  CHECK_THROWS_AS(verify_example(ex, opt), ContractViolation);
}

TEST_CASE("parallel and serial evaluation agree bit for bit") {
  const auto ex = example_from_id("product:c=-1,d1=0,rho=-1,r=2,m=1");
  VerifyOptions a;
  a.k = 1;
  VerifyOptions b = a;
  b.parallel = false;
  const auto ra = verify_example(ex, a);
  const auto rb = verify_example(ex, b);
  CHECK(ra.A_recovered == rb.A_recovered);
  CHECK(ra.b_recovered == rb.b_recovered);
  CHECK(ra.residual_max == rb.residual_max);
}
