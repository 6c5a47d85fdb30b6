#pragma once

// Randomized invariant suites over shape operators, canonical forms and the
// catalog. Every draw is reproducible from (seed, trial).

#include <cstdint>
#include <string>
#include <vector>

#include "lkgeo/curvature.hpp"
#include "lkgeo/rng.hpp"

namespace lkgeo {

/// Random metric-self-adjoint shape operator: gram = B^T eta B with
/// B = I + 0.3 randn / sqrt(n), eta Lorentzian when eps = +1 and Euclidean otherwise,
/// and S = gram^{-1} Sym with Sym symmetric, entries N(0,1)/sqrt(n).
ShapeData random_shape(int n, int eps, int c, CounterRng& rng);

/// S = B^{-1} diag(kappas) B with kappas uniform in [-3, 3].
Matrix random_diagonalizable(int n, CounterRng& rng, std::vector<double>& kappas);

/// Signed elementary symmetric functions by enumeration of all subsets.
std::vector<double> brute_force_char_coeffs(const std::vector<double>& kappas);

struct PropertyOutcome {
  std::string name;
  double max_deviation = 0.0;  ///< deviation divided by the property's scale
  double bound = 0.0;
  bool pass = true;
  long failing_trial = -1;     ///< first trial over the bound
  std::uint64_t failing_seed = 0;
  long trials = 0;
};

struct PropsSummary {
  std::string suite;
  std::vector<PropertyOutcome> outcomes;
  bool vacuous = false;
  bool pass() const;
};

/// Suite names: lemma1, cayley, canonical, product_rule, all.
std::vector<std::string> props_suites();

/// Throws std::invalid_argument for an unknown suite.
PropsSummary run_props(const std::string& suite, int trials, std::uint64_t seed);

}  // namespace lkgeo
