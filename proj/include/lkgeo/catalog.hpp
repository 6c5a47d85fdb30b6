#pragma once

// Hypersurfaces of the Lorentzian space forms for which L_k psi = A psi + b
// holds with constant A, b: umbilical hyperplane sections, standard
// products, and quadratic level sets with non-diagonalizable shape operator.
//
// Id grammar (whitespace-free, keys in any order, n optional):
//
//   umbilical:c=<+-1>,aa=<-1|0|1>,tau=<real>[,n=<int>]
//   product:c=<+-1>,d1=<0|1>,rho=<+-1>,r=<real>,m=<int>[,n=<int>]
//   quadric:c=-1,R=<J2|N2>,d=<real>[,n=<int>]
//   kmax:n=<int>,k=<int>
//
// Defaults: n=3 for umbilical and product, n=2 for quadric J2, n=3 for N2.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lkgeo/canonical_forms.hpp"
#include "lkgeo/curvature.hpp"
#include "lkgeo/indefinite_linalg.hpp"
#include "lkgeo/rng.hpp"

namespace lkgeo {

class CatalogError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Family { umbilical, product, quadric, kmax };

std::string to_string(Family f);

/// N(x) = (L x + v) / scale on the hypersurface.
struct LinearNormal {
  Matrix L;
  Vector v;
  double scale = 1.0;
};

struct AffinePrediction {
  Matrix A;
  Vector b;
};

struct UmbilicalParams {
  int c = 1;
  int aa = 1;  ///< <a,a>; a is e_1, e_{n+2} or e_1 + e_{n+2}
  double tau = 0.0;
};

struct ProductParams {
  int c = 1;
  int m = 1;
  int delta1 = 1;
  int delta2 = 0;
  int rho = 1;
  double r = 0.5;
};

struct QuadricParams {
  int c = -1;
  Matrix R;
  double d = 1.0;
  std::string label;  ///< short name used in the id, may be empty
};

class HypersurfaceExample {
 public:
  std::string id;
  Family family = Family::umbilical;
  AmbientSpaceForm space{1, 1};
  int eps = 1;             ///< <N,N> computed from the construction
  int listed_eps = 1;      ///< causal character from the case tables
  std::string metadata;    ///< isometry type
  LinearNormal normal;
  /// Level function F(x) = <Q x, x> + <l, x>; the hypersurface is F = level.
  Matrix Q;
  Vector l;
  double level = 0.0;
  /// Closed-form principal curvatures (empty when not real-diagonalizable).
  std::vector<double> kappas;
  std::vector<double> mu_S;   ///< predicted minimal polynomial of S, ascending, monic
  CanonicalKind expected_kind = CanonicalKind::I;
  std::vector<double> H_closed;  ///< H_0..H_n from closed forms
  /// Dimension of the unidentifiable part of (A, b) per output row: points
  /// lying in a hyperplane cannot separate A from b along that hyperplane.
  int affine_nullity = 0;
  int target_k = -1;  ///< k of a k-maximal entry, -1 otherwise

  int n() const { return space.n(); }
  int dim() const { return space.dim(); }
  int c() const { return space.c(); }

  Vector gauss_map(const Vector& x) const;
  /// |<x,x> - c| and |F(x) - level|, the larger of the two.
  double constraint_residual(const Vector& x) const;
  TangentSpace tangent_at(const Vector& x, double tol = kDefaultTol) const;
  ShapeData shape_at(const Vector& x, double tol = kDefaultTol) const;
  /// Shape operator on a given tangent space.
  ShapeData shape_on(const TangentSpace& ts, double tol = kDefaultTol) const;

  double H_at(int k) const {
    return k >= 0 && k <= n() ? H_closed[k] : 0.0;
  }
  /// (A, b) from the closed forms of the family.
  AffinePrediction predicted(int k) const;

  /// Points on the hypersurface; point i depends only on (seed, i).
  std::vector<Vector> sample(int count, std::uint64_t seed) const;
  std::vector<Vector> sample_serial(int count, std::uint64_t seed) const;

  std::function<Vector(CounterRng&)> draw;  ///< one raw point, may throw SamplingError
  UmbilicalParams umbilical;
  ProductParams product;
  QuadricParams quadric;
};

HypersurfaceExample totally_umbilical(const UmbilicalParams& p, int n);
HypersurfaceExample standard_product(const ProductParams& p, int n);
HypersurfaceExample quadratic_hypersurface(const QuadricParams& p, int n);
/// The c = 1 product S^m_1(r) x S^{n-m}(sqrt(1-r^2)) with r tuned so that
/// H_{k+1} = 0; m is the first value in 1..n-1 admitting a root.
HypersurfaceExample k_maximal_flat_example(int n, int k);

/// Named matrices for the quadric family: J2 (R^2 = -I in R^4_2) and N2
/// (R = u w^T G + w u^T G with u, w null and orthogonal, R^2 = 0).
Matrix quadric_matrix(const std::string& name, int n);

HypersurfaceExample example_from_id(const std::string& id);

struct FamilyInfo {
  std::string name;
  std::vector<int> c_values;
  std::string schema;
  std::string realizes;
  std::vector<std::string> rows;
};

std::vector<FamilyInfo> catalog_families();
/// Ids exercised by the full verification run.
std::vector<std::string> standard_catalog_ids();

}  // namespace lkgeo
