#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#ifndef LKGEO_CLI_PATH
#error "LKGEO_CLI_PATH must point at the lkgeo executable"
#endif

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(LKGEO_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

}  // namespace

TEST_CASE("catalog list") {
  const Run all = run("catalog list");
  CHECK(all.code == 0);
  CHECK(all.out.find("product") != std::string::npos);
  CHECK(all.out.find("c=1  d1=1") != std::string::npos);
  CHECK(all.out.find("c=-1 d1=1") != std::string::npos);
  const Run pos = run("catalog list --c 1");
  CHECK(pos.code == 0);
  CHECK(pos.out.find("c=-1") == std::string::npos);
  CHECK(pos.out.find("quadric") == std::string::npos);
}

TEST_CASE("catalog show") {
  const Run r = run("catalog show product:c=1,d1=1,rho=1,r=0.6,m=1,n=3");
  CHECK(r.code == 0);
  CHECK(r.out.find("k1=-1.33333333333") != std::string::npos);
  CHECK(r.out.find("k2=0.75") != std::string::npos);
  CHECK(run("catalog show nothing:c=1").code == 2);
}

TEST_CASE("verify exit codes") {
  const Run u = run("verify --example umbilical:c=1,aa=1,tau=0.5 --k 0");
  CHECK(u.code == 0);
  CHECK(u.out.find("\"b_parallel_a\"") != std::string::npos);
  const Run q = run("verify --example quadric:c=-1,R=J2,d=1 --k 0 --format text");
  CHECK(q.code == 0);
  CHECK(q.out.find("A non-diagonalizable") != std::string::npos);
  CHECK(run("verify --example product:c=1,d1=1,rho=1,r=0.6,m=1 --k 99").code == 2);
  CHECK(run("verify --example bogus --k 0").code == 2);
  CHECK(run("verify --example umbilical:c=1,aa=1,tau=0.5 --k 0 --samples 3").code == 2);
  CHECK(run("verify --example umbilical:c=1,aa=1,tau=0.5 --k 0 --format xml").code == 2);
}

TEST_CASE("a tolerance too tight for round-off fails the checks") {
  const Run r = run("verify --example quadric:c=-1,R=J2,d=1 --k 0 --tol 1e-20 --format csv");
  CHECK(r.code == 1);
  CHECK(r.out.find(",false,") != std::string::npos);
}

TEST_CASE("LKGEO_TOL overrides the default tolerance") {
  const Run r = run("verify --example quadric:c=-1,R=J2,d=1 --k 0 --format json");
  const std::string cmd = std::string("LKGEO_TOL=1e-20 ") + LKGEO_CLI_PATH +
                          " verify --example quadric:c=-1,R=J2,d=1 --k 0 >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  CHECK(r.code == 0);
  CHECK(WEXITSTATUS(st) == 1);
}

TEST_CASE("json output is deterministic") {
  const std::string args = "verify --example product:c=-1,d1=1,rho=-1,r=2,m=1 --k 1 --seed 7";
  const Run a = run(args);
  const Run b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("\"seed\": 7") != std::string::npos);
}

TEST_CASE("props") {
  const Run l = run("props --suite lemma1 --trials 20");
  CHECK(l.code == 0);
  CHECK(l.out.find("trace_S2P") != std::string::npos);
  const Run c = run("props --suite cayley --trials 10");
  CHECK(c.code == 0);
  CHECK(c.out.find("cayley_kind_IV") != std::string::npos);
  const Run v = run("props --suite all --trials 0");
  CHECK(v.code == 0);
  CHECK(v.out.find("warning") != std::string::npos);
  CHECK(run("props --suite nope").code == 2);
}
