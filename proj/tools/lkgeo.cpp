#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lkgeo/catalog.hpp"
#include "lkgeo/props.hpp"
#include "lkgeo/report.hpp"
#include "lkgeo/verification.hpp"

using namespace lkgeo;

namespace {

constexpr int kExitCheck = 1;
constexpr int kExitInput = 2;
constexpr int kExitSampling = 3;

void print_list(std::ostream& os, const std::vector<double>& v) {
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ")";
}

int cmd_catalog_list(int c_filter) {
  for (const auto& fam : catalog_families()) {
    if (c_filter != 0 &&
        std::find(fam.c_values.begin(), fam.c_values.end(), c_filter) == fam.c_values.end())
      continue;
    std::cout << fam.name << "  (c in";
    for (int c : fam.c_values) std::cout << " " << c;
    std::cout << ")\n  schema:   " << fam.schema << "\n  realizes: " << fam.realizes << "\n";
    for (const auto& row : fam.rows) {
      const bool has_c = row.rfind("c=", 0) == 0;
      if (c_filter != 0 && has_c) {
        const bool neg = row.rfind("c=-1", 0) == 0;
        if ((c_filter == 1) == neg) continue;
      }
      std::cout << "    " << row << "\n";
    }
  }
  std::cout << "standard instances:\n";
  for (const auto& id : standard_catalog_ids()) {
    if (c_filter != 0) {
      const HypersurfaceExample ex = example_from_id(id);
      if (ex.c() != c_filter) continue;
    }
    std::cout << "  " << id << "\n";
  }
  return 0;
}

int cmd_catalog_show(const std::string& id) {
  HypersurfaceExample ex;
  try {
    ex = example_from_id(id);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  std::cout << std::setprecision(12);
  std::cout << "id:        " << ex.id << "\n"
            << "family:    " << to_string(ex.family) << "\n"
            << "type:      " << ex.metadata << "\n"
            << "ambient:   c=" << ex.c() << " n=" << ex.n() << " dim=" << ex.dim()
            << " index=" << ex.space.signature().index() << "\n"
            << "eps:       " << ex.eps << "\n"
            << "kind:      " << to_string(ex.expected_kind) << "\n";
  if (!ex.kappas.empty()) {
    std::cout << "kappas:   ";
    for (std::size_t i = 0; i < ex.kappas.size(); ++i)
      std::cout << " k" << i + 1 << "=" << ex.kappas[i];
    std::cout << "\n";
  }
  std::cout << "mu_S:      ";
  print_list(std::cout, ex.mu_S);
  std::cout << " (ascending)\nH:         ";
  print_list(std::cout, ex.H_closed);
  std::cout << "\n";
  if (ex.target_k >= 0) std::cout << "H_" << ex.target_k + 1 << " = 0 at k=" << ex.target_k << "\n";
  const Eigen::IOFormat f(10, 0, " ", "\n", "    [", "]");
  for (int k = 0; k < ex.n(); ++k) {
    const AffinePrediction p = ex.predicted(k);
    std::cout << "k=" << k << " A\n" << p.A.format(f) << "\n";
    std::cout << "k=" << k << " b\n" << p.b.transpose().format(f) << "\n";
  }
  return 0;
}

struct VerifyArgs {
  std::string example;
  int k = 0;
  int samples = 500;
  std::uint64_t seed = 42;
  double tol = kDefaultTol;
  std::string format = "json";
  bool enforce = false;
  std::string out;
};

int cmd_verify(const VerifyArgs& a, bool tol_given) {
  ReportFormat fmt;
  try {
    fmt = parse_format(a.format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  HypersurfaceExample ex;
  try {
    ex = example_from_id(a.example);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  VerifyOptions opt;
  opt.k = a.k;
  opt.samples = a.samples;
  opt.seed = a.seed;
  opt.tol = a.tol;
  opt.enforce_self_adjoint = a.enforce;
  if (!tol_given) {
    if (const char* env = std::getenv("LKGEO_TOL")) {
      try {
        opt.tol = std::stod(env);
      } catch (const std::exception&) {
        std::cerr << "error: LKGEO_TOL is not a number: " << env << "\n";
        return kExitInput;
      }
    }
  }
  if (opt.k < 0 || opt.k > ex.n() - 1) {
    std::cerr << "error: k=" << opt.k << " out of range 0.." << ex.n() - 1 << " for " << ex.id
              << "\n";
    return kExitInput;
  }
  if (opt.samples < min_samples(ex.dim())) {
    std::cerr << "error: need at least " << min_samples(ex.dim()) << " samples for dimension "
              << ex.dim() << "\n";
    return kExitInput;
  }
  if (!(opt.tol > 0.0)) {
    std::cerr << "error: tol must be positive\n";
    return kExitInput;
  }

  VerificationReport rep;
  try {
    rep = verify_example(ex, opt);
  } catch (const SamplingError& e) {
    std::cerr << "sampling failed: " << e.what() << "\n";
    return kExitSampling;
  } catch (const RecoveryError& e) {
    std::cerr << "recovery failed: " << e.what() << "\n";
    return kExitSampling;
  } catch (const std::exception& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kExitCheck;
  }

  if (a.out.empty()) {
    write_report(std::cout, rep, fmt);
  } else {
    std::ofstream os(a.out, std::ios::binary);
    if (!os) {
      std::cerr << "error: cannot write " << a.out << "\n";
      return kExitInput;
    }
    write_report(os, rep, fmt);
  }
  if (!rep.pass()) {
    for (const auto& c : rep.checks)
      if (!c.pass) std::cerr << "check failed: " << c.name << " " << c.measured << " > " << c.bound << "\n";
    return kExitCheck;
  }
  return 0;
}

int cmd_props(const std::string& suite, int trials, std::uint64_t seed) {
  PropsSummary sum;
  try {
    sum = run_props(suite, trials, seed);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  write_props(std::cout, sum);
  if (sum.vacuous) std::cerr << "warning: no trials run\n";
  return sum.pass() ? 0 : kExitCheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature calculus and L_k verification for hypersurfaces of Lorentzian space forms"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  auto* catalog = app.add_subcommand("catalog", "Catalog of example hypersurfaces");
  catalog->require_subcommand(1);
  int c_filter = 0;
  auto* list = catalog->add_subcommand("list", "List families and standard instances");
  list->add_option("--c", c_filter, "Only families with this ambient curvature")
      ->check(CLI::IsMember({-1, 1}));
  std::string show_id;
  auto* show = catalog->add_subcommand("show", "Closed-form data of one instance");
  show->add_option("id", show_id, "Catalog id")->required();

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Recover (A, b) by sampling and run all checks");
  verify->add_option("--example", va.example, "Catalog id")->required();
  verify->add_option("--k", va.k, "Order of L_k")->required();
  verify->add_option("--samples", va.samples, "Number of sample points")->capture_default_str();
  verify->add_option("--seed", va.seed, "Seed")->capture_default_str();
  auto* tol_opt = verify->add_option("--tol", va.tol, "Base tolerance (env LKGEO_TOL)");
  verify->add_option("--format", va.format, "json, csv or text")->capture_default_str();
  verify->add_flag("--enforce-self-adjoint", va.enforce, "Restrict the fit to G-self-adjoint A");
  verify->add_option("--out", va.out, "Output file (default stdout)");

  std::string suite = "all";
  int trials = 200;
  std::uint64_t pseed = 42;
  auto* props = app.add_subcommand("props", "Randomized invariant suites");
  props->add_option("--suite", suite, "lemma1, cayley, canonical, product_rule or all")
      ->capture_default_str();
  props->add_option("--trials", trials, "Draws per property group")->capture_default_str();
  props->add_option("--seed", pseed, "Seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  if (list->parsed()) return cmd_catalog_list(c_filter);
  if (show->parsed()) return cmd_catalog_show(show_id);
  if (verify->parsed()) return cmd_verify(va, tol_opt->count() > 0);
  if (props->parsed()) return cmd_props(suite, trials, pseed);
  return kExitInput;
}
