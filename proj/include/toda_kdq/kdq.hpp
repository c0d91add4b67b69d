#pragma once

#include <complex>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "toda_kdq/moment.hpp"
#include "toda_kdq/sphere.hpp"

namespace toda_kdq::kdq {

using cplx = std::complex<double>;
using sphere::HarmonicIndex;
using sphere::SphereDirection;

// Point zeta*theta of the Klein-Dirac quadric, stored as the canonical
// representative of {(zeta, theta), (-zeta, -theta)}: Re zeta > 0, or
// Re zeta = 0 and Im zeta > 0; at zeta = 0 the first nonzero coordinate of
// theta is positive.
class KDQPoint {
 public:
  KDQPoint(cplx zeta, const SphereDirection& theta);

  cplx zeta() const { return zeta_; }
  const SphereDirection& theta() const { return theta_; }
  int n() const { return theta_.n(); }

 private:
  cplx zeta_;
  SphereDirection theta_;
};

// Roots <theta,x> +- i sqrt(|x|^2 - <theta,x>^2) of zeta^2 - 2 zeta <theta,x> + |x|^2.
std::pair<cplx, cplx> singular_roots(const SphereDirection& theta,
                                     std::span<const double> x);

// r(zeta theta - x)^n with w = zeta^2 - 2 zeta <theta,x> + |x|^2.  Even n:
// w^{n/2}.  Odd n: r = zeta sqrt(w / zeta^2) with the principal root, the
// branch asymptotic to zeta at infinity and analytic for |zeta| > |x|
// (principal sqrt(w) itself when zeta = 0).  Throws PoleError when w vanishes
// to rounding accuracy.
// The raw overloads act on (zeta, theta) without canonicalization.
cplx aronszajn_r_pow_n(cplx zeta, const SphereDirection& theta,
                       std::span<const double> x);
cplx aronszajn_r_pow_n(const KDQPoint& p, std::span<const double> x);

// Closed form zeta^{n-1} / r(zeta theta - x)^n.
cplx hua_kernel_closed(cplx zeta, const SphereDirection& theta,
                       std::span<const double> x);
cplx hua_kernel_closed(const KDQPoint& p, std::span<const double> x);

// A truncated series together with a bound on the omitted tail.
struct SeriesValue {
  cplx value;
  double tail_bound = 0.0;
};

// sum_{k>k_max} d_k q^k for 0 <= q < 1.
double harmonic_geometric_tail(int n, int k_max, double q);

// zeta/(zeta^2-|x|^2) sum_{k<=k_max} zeta^{-k} sum_ell Y_{k,ell}(theta) Y_{k,ell}(x).
// Throws ConvergenceError unless |zeta| > |x|.
SeriesValue hua_kernel(cplx zeta, const SphereDirection& theta,
                       std::span<const double> x, int k_max);
SeriesValue hua_kernel(const KDQPoint& p, std::span<const double> x, int k_max);

// Polynomial in the Almansi basis sum c |x|^{2j} Y_{k,ell}(x).
struct AlmansiTerm {
  int j = 0;
  HarmonicIndex idx;
  double coeff = 1.0;
};

class AlmansiPolynomial {
 public:
  AlmansiPolynomial(int n, std::vector<AlmansiTerm> terms);

  int n() const { return n_; }
  std::span<const AlmansiTerm> terms() const { return terms_; }
  // Total degree max(2j + k).
  int degree() const;
  double eval(std::span<const double> x) const;
  // P(zeta theta) = sum c zeta^{2j+k} Y_{k,ell}(theta).
  cplx eval_on_quadric(cplx zeta, const SphereDirection& theta) const;

 private:
  int n_;
  std::vector<AlmansiTerm> terms_;
};

struct CauchyQuadrature {
  int zeta_points = 0;    // 0: max(64, 4(deg+1))
  int sphere_degree = -1; // <0: 2 deg + 2
};

CauchyQuadrature resolve_cauchy_quadrature(const AlmansiPolynomial& P,
                                           CauchyQuadrature q);

// (1/2 pi i) int_{|zeta|=1} int_S K(zeta theta; x) P(zeta theta) dtheta dzeta
// with trapezoid in zeta and the sphere rule in theta.  Needs |x| < 1.
cplx cauchy_reproduce(const AlmansiPolynomial& P, std::span<const double> x,
                      CauchyQuadrature q = {});

// Component measures mu_{k,ell} on [0, inf) indexed by harmonic index; absent
// indices are zero components.
class PseudoPositiveMeasure {
 public:
  using ComponentMap = std::map<HarmonicIndex, moment::DiscreteMeasure>;

  PseudoPositiveMeasure(int n, int k_max, ComponentMap components);

  int n() const { return n_; }
  int k_max() const { return k_max_; }
  const ComponentMap& components() const { return components_; }
  // nullptr for an absent component.
  const moment::DiscreteMeasure* component(HarmonicIndex idx) const;
  double max_radius() const;

 private:
  int n_;
  int k_max_;
  ComponentMap components_;
};

// int r^p dmu_{k,ell}(r).
double component_power_moment(const PseudoPositiveMeasure& mu, HarmonicIndex idx, int p);

// s_{k,ell;j} = int r^{k+2j} dmu_{k,ell}(r).
double multi_moment(const PseudoPositiveMeasure& mu, HarmonicIndex idx, int j);

// r^k dmu_{k,ell}(r) pushed forward to rho = r^2.
moment::DiscreteMeasure tilde_component(const moment::DiscreteMeasure& component, int k);

struct GrowthReport {
  bool ok = true;
  double C = 0.0;
  double D = 0.0;
  std::vector<double> m;  // m_k = max_ell |int r^k dmu_{k,ell}|, k = 0..k_max
};

// Smallest (C, D) with m_k <= C D^k over the stored range; ok = false when
// m_k grows faster than geometrically.
GrowthReport growth_condition_check(const PseudoPositiveMeasure& mu);

// int r^k dmu_{k,ell}(r) / (zeta^2 - r^2), a one-dimensional Stieltjes
// transform in rho = zeta^2.
cplx component_transform(const PseudoPositiveMeasure& mu, HarmonicIndex idx, cplx zeta);

// sum_{k,ell} zeta^{1-k} Y_{k,ell}(theta) int r^k dmu_{k,ell}/(zeta^2 - r^2),
// summed in ascending (k, ell).  Requires |zeta| > max radius, or
// Im zeta^2 > 0 and |zeta| > D.  tail_bound bounds further degrees obeying
// the fitted growth constants.
SeriesValue markov_stieltjes(const PseudoPositiveMeasure& mu, cplx zeta,
                             const SphereDirection& theta);
SeriesValue markov_stieltjes(const PseudoPositiveMeasure& mu, const KDQPoint& p);

// Smallest sphere-rule degree that projects markov_stieltjes onto Y_idx exactly.
int projection_degree(const PseudoPositiveMeasure& mu, HarmonicIndex idx);

// zeta^{k-1} int markov_stieltjes(zeta, theta) Y_idx(theta) dtheta.
cplx component_projection(const PseudoPositiveMeasure& mu, HarmonicIndex idx,
                          cplx zeta, int quad_degree = -1);

// For each zeta: | zeta^{4N+2} ( zeta^{k-1} int f Y dtheta
//                  - sum_{j<2N} s_{k,ell;j} zeta^{-2j-2} ) - s_{k,ell;2N} |.
// quad_degree < 0 selects projection_degree; a smaller one is rejected.
std::vector<double> multi_nevanlinna_check(const PseudoPositiveMeasure& mu,
                                           HarmonicIndex idx, int N,
                                           std::span<const cplx> zetas,
                                           int quad_degree = -1);

struct PartialSums {
  cplx f_N;
  cplx g_N;
};

// f_N = (1/zeta) sum_{k,ell} sum_{j<2N} s_{k,ell;j} zeta^{-k-2j} Y_{k,ell}(theta)
// g_N = sum_{k,ell} s_{k,ell;2N} zeta^{-k} Y_{k,ell}(theta)
PartialSums divergent_partial_sums(const PseudoPositiveMeasure& mu, int N,
                                   const KDQPoint& p);

// | zeta^{4N+1} (markov_stieltjes - f_N) - g_N |.
double summation_residual(const PseudoPositiveMeasure& mu, int N, const KDQPoint& p);

}  // namespace toda_kdq::kdq
