#pragma once

#include <array>
#include <compare>
#include <span>
#include <utility>
#include <vector>

namespace toda_kdq::sphere {

// Degree k and intra-degree position ell (1-based) of a real spherical
// harmonic Y_{k,ell}.  Ordered by ascending k, then ell.
struct HarmonicIndex {
  int k = 0;
  int ell = 1;

  friend auto operator<=>(const HarmonicIndex&, const HarmonicIndex&) = default;
};

// Dimension d_k of the space of degree-k spherical harmonics on S^{n-1},
// n in {2, 3}.  d_0 = 1.
int dim_harmonics(int n, int k);

bool is_valid_index(int n, HarmonicIndex idx);
// Throws InvalidArgument unless 0 <= k and 1 <= ell <= d_k(n).
void validate_index(int n, HarmonicIndex idx);

// All indices with degree <= k_max in ascending (k, ell) order.
std::vector<HarmonicIndex> harmonic_indices(int n, int k_max);

// Unit vector on S^{n-1}, n in {2, 3}.  Unused trailing coordinates are 0.
class SphereDirection {
 public:
  // Throws unless |coords| = 1 within 1e-12.
  SphereDirection(int n, std::span<const double> coords);

  static SphereDirection normalized(int n, std::span<const double> v);
  // n = 2: (cos phi, sin phi).
  static SphereDirection from_angle(double phi);
  // n = 3: (sin polar cos azimuth, sin polar sin azimuth, cos polar).
  static SphereDirection from_angles(double polar, double azimuth);

  int n() const { return n_; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  std::span<const double> coords() const {
    return {c_.data(), static_cast<std::size_t>(n_)};
  }
  SphereDirection antipode() const;
  double dot(std::span<const double> x) const;

 private:
  SphereDirection() = default;
  int n_ = 2;
  std::array<double, 3> c_{};
};

// Real basis of H_k(S^{n-1}), orthonormal for the probability surface
// measure.  n = 2: Y_{0,1} = 1, Y_{k,1} = sqrt2 cos k phi, Y_{k,2} = sqrt2 sin k phi.
// n = 3: Y_{k,1} is zonal about e_3; Y_{k,2m} / Y_{k,2m+1} carry cos m phi /
// sin m phi.
double eval_harmonic(int n, HarmonicIndex idx, const SphereDirection& theta);

// Every Y_{k,ell}(theta) with k <= k_max, in harmonic_indices() order.
std::vector<double> eval_harmonics_upto(int n, int k_max,
                                        const SphereDirection& theta);

// Position of idx inside harmonic_indices(n, k).
std::size_t flat_offset(int n, HarmonicIndex idx);

// Solid harmonic Y_{k,ell}(x) = |x|^k Y_{k,ell}(x/|x|) on R^n.
double eval_solid_harmonic(int n, HarmonicIndex idx, std::span<const double> x);

// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendre gauss_legendre(int points);

// Quadrature for the probability measure on S^{n-1}, exact for spherical
// polynomials of degree <= `degree`.  S^1: (degree+1)-point trapezoid.
// S^2: Gauss-Legendre in cos(polar) x trapezoid in azimuth.
struct SphereRule {
  int n = 2;
  int degree = 0;
  std::vector<SphereDirection> nodes;
  std::vector<double> weights;
};
SphereRule sphere_rule(int n, int degree);

template <class F>
auto quadrature_sphere(const SphereRule& rule, F&& f) {
  using R = decltype(f(rule.nodes.front()));
  R acc{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * f(rule.nodes[i]);
  }
  return acc;
}

template <class F>
auto quadrature_sphere(int n, F&& f, int degree) {
  return quadrature_sphere(sphere_rule(n, degree), std::forward<F>(f));
}

}  // namespace toda_kdq::sphere
