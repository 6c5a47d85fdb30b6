#include <doctest.h>

#include <sstream>

#include "lkgeo/catalog.hpp"
#include "lkgeo/props.hpp"
#include "lkgeo/report.hpp"

using namespace lkgeo;

TEST_CASE("random shapes are metric self-adjoint") {
  CounterRng rng(3, 0);
  for (int n = 2; n <= 8; ++n) {
    for (int eps : {-1, 1}) {
      const ShapeData s = random_shape(n, eps, 1, rng);
      CHECK(self_adjoint_defect(s.S, s.gram) < 1e-12);
      CHECK(negative_inertia(s.gram) == (eps == 1 ? 1 : 0));
    }
  }
}

TEST_CASE("brute force coefficients") {
  const auto a = brute_force_char_coeffs({1, 2, 3});
  CHECK(a == std::vector<double>{1, -6, 11, -6});
}

TEST_CASE("random diagonalizable draws have the drawn spectrum") {
  CounterRng rng(4, 0);
  std::vector<double> k;
  const Matrix S = random_diagonalizable(5, rng, k);
  REQUIRE(k.size() == 5);
  CHECK(S.trace() == doctest::Approx(k[0] + k[1] + k[2] + k[3] + k[4]));
}

TEST_CASE("each suite passes on a few trials") {
  for (const auto& suite : {"lemma1", "cayley", "canonical", "product_rule"}) {
    CAPTURE(suite);
    const auto sum = run_props(suite, 5, 42);
    CHECK_FALSE(sum.outcomes.empty());
    for (const auto& o : sum.outcomes) {
      CAPTURE(o.name);
      CHECK(o.pass);
      CHECK(o.max_deviation <= o.bound);
    }
  }
}

TEST_CASE("zero trials is a vacuous pass") {
  const auto sum = run_props("all", 0, 1);
  CHECK(sum.vacuous);
  CHECK(sum.pass());
  std::ostringstream os;
  write_props(os, sum);
  CHECK(os.str().find("warning") != std::string::npos);
  CHECK_THROWS_AS(run_props("nope", 1, 1), std::invalid_argument);
}

TEST_CASE("suites are reproducible") {
  const auto a = run_props("cayley", 4, 17);
  const auto b = run_props("cayley", 4, 17);
  REQUIRE(a.outcomes.size() == b.outcomes.size());
  for (std::size_t i = 0; i < a.outcomes.size(); ++i)
    CHECK(a.outcomes[i].max_deviation == b.outcomes[i].max_deviation);
}

TEST_CASE("report formats") {
  const auto ex = example_from_id("quadric:c=-1,R=J2,d=1");
  VerifyOptions opt;
  const auto rep = verify_example(ex, opt);
  const auto j = to_json(rep);
  CHECK(j["meta"]["example_id"] == "quadric:c=-1,R=J2,d=1");
  CHECK(j["meta"]["samples"] == 500);
  CHECK(j["meta"]["seed"] == 42);
  CHECK(j["meta"]["tool_version"] == kToolVersion);
  CHECK(j["results"]["A_recovered"].size() == 4);
  CHECK(j["results"]["A_recovered"][0].size() == 4);
  CHECK(j["results"]["b_predicted"].size() == 4);
  CHECK(j["results"]["checks"].size() == rep.checks.size());
  CHECK(j["results"]["checks"][0].contains("measured"));

  std::ostringstream a, b, csv, txt;
  write_report(a, rep, ReportFormat::json);
  write_report(b, verify_example(ex, opt), ReportFormat::json);
  CHECK(a.str() == b.str());

  write_report(csv, rep, ReportFormat::csv);
  const std::string s = csv.str();
  CHECK(std::count(s.begin(), s.end(), '\n') == static_cast<long>(rep.checks.size()) + 1);
  write_report(txt, rep, ReportFormat::text);
  CHECK(txt.str().find("PASS") != std::string::npos);
  CHECK(parse_format("csv") == ReportFormat::csv);
  CHECK_THROWS_AS(parse_format("xml"), std::invalid_argument);
}
