#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "toda_kdq/errors.hpp"
#include "toda_kdq/kdq.hpp"

using namespace toda_kdq;
using namespace toda_kdq::kdq;
using doctest::Approx;

namespace {

SphereDirection random_direction(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (n == 2) return SphereDirection::from_angle(2 * std::numbers::pi * u(rng));
  return SphereDirection::from_angles(std::acos(2 * u(rng) - 1), 2 * std::numbers::pi * u(rng));
}

std::vector<double> scaled(const SphereDirection& d, double s) {
  std::vector<double> x;
  for (int i = 0; i < d.n(); ++i) x.push_back(s * d[i]);
  return x;
}

PseudoPositiveMeasure single(int n, HarmonicIndex idx, double r, double w, int kmax = -1) {
  PseudoPositiveMeasure::ComponentMap m;
  m.emplace(idx, moment::DiscreteMeasure({r}, {w}, true));
  return PseudoPositiveMeasure(n, kmax < 0 ? idx.k : kmax, std::move(m));
}

}  // namespace

TEST_CASE("canonical representative on the quadric") {
  const auto th = SphereDirection::from_angle(0.3);
  const KDQPoint p({-1.0, 2.0}, th);
  CHECK(p.zeta() == cplx(1.0, -2.0));
  CHECK(p.theta()[0] == Approx(-std::cos(0.3)));
  const KDQPoint q({0.0, -1.0}, th);
  CHECK(q.zeta() == cplx(0.0, 1.0));
  const KDQPoint o({0.0, 0.0}, th.antipode());
  CHECK(o.theta()[0] > 0.0);
  const KDQPoint keep({2.0, -1.0}, th);
  CHECK(keep.zeta() == cplx(2.0, -1.0));
}

TEST_CASE("singular roots") {
  const auto th = SphereDirection::from_angles(0.4, 1.0);
  const std::vector<double> zero{0, 0, 0};
  auto [z1, z2] = singular_roots(th, zero);
  CHECK(z1 == cplx(0, 0));
  CHECK(z2 == cplx(0, 0));
  auto [a1, a2] = singular_roots(th, scaled(th, 0.7));
  CHECK(std::abs(a1 - 0.7) < 1e-15);
  CHECK(std::abs(a2 - 0.7) < 1e-15);
  const auto e1 = SphereDirection::from_angle(0.0);
  auto [p1, p2] = singular_roots(e1, std::vector<double>{0.0, 1.0});
  CHECK(std::abs(p1 - cplx(0, 1)) < 1e-15);
  CHECK(std::abs(p2 - cplx(0, -1)) < 1e-15);
  std::mt19937_64 rng(21);
  for (int i = 0; i < 20; ++i) {
    const auto d = random_direction(rng, 3);
    const auto x = scaled(random_direction(rng, 3), 1.3);
    auto [r1, r2] = singular_roots(d, x);
    CHECK(std::abs(std::abs(r1) - 1.3) < 1e-12);
    CHECK(std::abs(std::abs(r2) - 1.3) < 1e-12);
    CHECK_THROWS_AS(aronszajn_r_pow_n(r1, d, x), PoleError);
  }
}

TEST_CASE("r(zeta theta - x)^n") {
  const cplx z{1.5, 0.8};
  const auto t2 = SphereDirection::from_angle(1.1);
  const auto t3 = SphereDirection::from_angles(0.6, 2.0);
  CHECK(std::abs(aronszajn_r_pow_n(z, t2, std::vector<double>{0, 0}) - z * z) < 1e-14);
  CHECK(std::abs(aronszajn_r_pow_n(z, t3, std::vector<double>{0, 0, 0}) - z * z * z) < 1e-14);
  const double s = 0.4;
  CHECK(std::abs(aronszajn_r_pow_n(z, t2, scaled(t2, s)) - (z - s) * (z - s)) < 1e-14);
  CHECK(std::abs(aronszajn_r_pow_n(z, t3, scaled(t3, s)) - std::pow(z - s, 3)) < 1e-14);
  // The odd-n branch follows zeta at infinity on every side of the plane.
  for (double arg : {0.3, 1.6, 2.9, -2.0}) {
    const cplx w = std::polar(3.0, arg);
    CHECK(std::abs(aronszajn_r_pow_n(w, t3, scaled(t3, s)) - std::pow(w - s, 3)) < 1e-13);
  }
}

TEST_CASE("Hua-Aronszajn kernel: simple cases") {
  const auto t2 = SphereDirection::from_angle(0.4);
  const cplx z{2.0, 1.0};
  const auto origin = hua_kernel(z, t2, std::vector<double>{0, 0}, 10);
  CHECK(std::abs(origin.value - 1.0 / z) < 1e-15);
  CHECK(origin.tail_bound == 0.0);
  const double s = 0.5;
  const auto aligned = hua_kernel(z, t2, scaled(t2, s), 60);
  CHECK(std::abs(aligned.value - z / ((z - s) * (z - s))) < 1e-14);
  CHECK(std::abs(hua_kernel_closed(z, t2, scaled(t2, s)) - z / ((z - s) * (z - s))) < 1e-14);
  const auto t3 = SphereDirection::from_angles(1.0, 0.5);
  CHECK(std::abs(hua_kernel_closed(z, t3, scaled(t3, s)) - z * z / std::pow(z - s, 3)) < 1e-14);
  CHECK(std::abs(hua_kernel(z, t3, scaled(t3, s), 80).value - z * z / std::pow(z - s, 3)) < 1e-13);
  CHECK_THROWS_AS(hua_kernel(cplx(0.3, 0.0), t2, scaled(t2, 0.5), 5), ConvergenceError);
}

TEST_CASE("Hua-Aronszajn kernel: series within its tail bound") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n : {2, 3}) {
    for (int i = 0; i < 50; ++i) {
      const auto th = random_direction(rng, n);
      const auto x = scaled(random_direction(rng, n), 0.2 + 0.8 * u(rng));
      double rx = 0;
      for (double v : x) rx += v * v;
      rx = std::sqrt(rx);
      const cplx z = std::polar(rx * (2.0 + 2.0 * u(rng)), 2 * std::numbers::pi * u(rng));
      const auto ser = hua_kernel(z, th, x, 40);
      const cplx ref = hua_kernel_closed(z, th, x);
      CHECK(std::abs(ser.value - ref) <= ser.tail_bound + 1e-13);
      CHECK(std::abs(ser.value - ref) < 1e-10 * std::max(1.0, std::abs(ref)));
      // Antipodal identification.
      const KDQPoint p(z, th);
      CHECK(std::abs(hua_kernel(p, x, 40).value - hua_kernel_closed(p, x)) <= ser.tail_bound + 1e-13);
    }
  }
}

TEST_CASE("geometric harmonic tails") {
  double direct2 = 0.0, direct3 = 0.0;
  for (int k = 6; k < 400; ++k) {
    direct2 += 2.0 * std::pow(0.5, k);
    direct3 += (2.0 * k + 1) * std::pow(0.5, k);
  }
  CHECK(harmonic_geometric_tail(2, 5, 0.5) == Approx(direct2));
  CHECK(harmonic_geometric_tail(3, 5, 0.5) == Approx(direct3));
}

TEST_CASE("Almansi polynomials") {
  const AlmansiPolynomial P(3, {{1, {0, 1}, 2.0}, {0, {1, 1}, -1.0}});
  const std::vector<double> x{0.1, 0.2, 0.3};
  CHECK(P.degree() == 2);
  CHECK(P.eval(x) == Approx(2.0 * 0.14 - std::sqrt(3.0) * 0.3));
  CHECK_THROWS_AS(AlmansiPolynomial(2, {{0, {1, 3}, 1.0}}), InvalidArgument);
}

TEST_CASE("Cauchy-type reproduction") {
  const auto e = SphereDirection::from_angles(0.7, 0.2);
  const auto x3 = scaled(e, 0.5);
  CHECK(std::abs(cauchy_reproduce(AlmansiPolynomial(3, {{0, {0, 1}, 1.0}}), x3) - 1.0) < 1e-10);
  CHECK(std::abs(cauchy_reproduce(AlmansiPolynomial(3, {{1, {0, 1}, 1.0}}), x3) - 0.25) < 1e-8);
  for (int l = 1; l <= 3; ++l) {
    const AlmansiPolynomial Y(3, {{0, {1, l}, 1.0}});
    CHECK(std::abs(cauchy_reproduce(Y, x3) - Y.eval(x3)) < 1e-8);
  }
  const auto x2 = scaled(SphereDirection::from_angle(2.0), 0.45);
  const AlmansiPolynomial P(2, {{2, {3, 2}, 0.7}, {0, {0, 1}, -1.0}});
  CHECK(std::abs(cauchy_reproduce(P, x2) - P.eval(x2)) < 1e-8);
  CHECK_THROWS_AS(cauchy_reproduce(P, std::vector<double>{1.0, 0.0}), InvalidArgument);
}

TEST_CASE("pseudo-positive measure validation") {
  PseudoPositiveMeasure::ComponentMap m;
  m.emplace(HarmonicIndex{2, 1}, moment::DiscreteMeasure({0.5}, {1.0}, true));
  CHECK_THROWS_AS(PseudoPositiveMeasure(3, 1, m), InvalidArgument);
  PseudoPositiveMeasure::ComponentMap bad;
  bad.emplace(HarmonicIndex{1, 3}, moment::DiscreteMeasure({0.5}, {1.0}, true));
  CHECK_THROWS_AS(PseudoPositiveMeasure(2, 2, bad), InvalidArgument);
}

TEST_CASE("Stieltjes-Markov transform: simple measures") {
  const auto th = SphereDirection::from_angles(0.3, 0.9);
  const cplx z{1.2, 2.0};
  const auto origin = single(3, {0, 1}, 0.0, 1.0);
  CHECK(std::abs(markov_stieltjes(origin, z, th).value - 1.0 / z) < 1e-15);
  const auto ring = single(3, {0, 1}, 1.0, 1.0);
  CHECK(std::abs(markov_stieltjes(ring, z, th).value - z / (z * z - 1.0)) < 1e-15);
  CHECK_THROWS_AS(markov_stieltjes(ring, cplx(0.5, 0.1), th), ConvergenceError);
  // Inside the upper sector beyond D the series is still accepted.
  const cplx inside = std::polar(0.9, std::numbers::pi / 4);
  CHECK_THROWS_AS(markov_stieltjes(ring, inside, th), ConvergenceError);
}

TEST_CASE("Stieltjes-Markov transform equals the kernel integral") {
  // A point mass at y contributes zeta^{n-1}/r(zeta theta - y)^n = K(zeta theta; y);
  // its components are Y_{k,ell}(y/|y|) delta_{|y|}, which are signed, so
  // only the identity is checked, not pseudo-positivity.
  const std::vector<double> y{0.3, -0.2, 0.4};
  const double r = std::sqrt(0.09 + 0.04 + 0.16);
  const auto yhat = SphereDirection::normalized(3, y);
  const int K = 40;
  const cplx z{1.5, 0.7};
  const auto th = SphereDirection::from_angles(1.2, 2.5);
  cplx sum = 0.0;
  for (const auto& idx : sphere::harmonic_indices(3, K)) {
    sum += std::pow(z, 1 - idx.k) * sphere::eval_harmonic(3, idx, th) *
           sphere::eval_harmonic(3, idx, yhat) * std::pow(r, idx.k) / (z * z - r * r);
  }
  CHECK(std::abs(sum - hua_kernel_closed(z, th, y)) < 1e-10);
}

TEST_CASE("growth condition") {
  PseudoPositiveMeasure::ComponentMap m;
  for (const auto& idx : sphere::harmonic_indices(2, 3)) {
    m.emplace(idx, moment::DiscreteMeasure({1.0}, {1.0}, true));
  }
  const auto unit = growth_condition_check(PseudoPositiveMeasure(2, 3, m));
  CHECK(unit.ok);
  CHECK(unit.C == Approx(1.0));
  CHECK(unit.D == Approx(1.0));
  const auto empty = growth_condition_check(PseudoPositiveMeasure(3, 2, {}));
  CHECK(empty.C == 0.0);
  // m_k = k^k over k = 0..8 outgrows every geometric sequence.
  PseudoPositiveMeasure::ComponentMap fast;
  for (int k = 0; k <= 8; ++k) {
    fast.emplace(HarmonicIndex{k, 1}, moment::DiscreteMeasure({double(std::max(k, 1))}, {1.0}, true));
  }
  CHECK_FALSE(growth_condition_check(PseudoPositiveMeasure(2, 8, fast)).ok);
}

TEST_CASE("projection identity") {
  PseudoPositiveMeasure::ComponentMap m;
  m.emplace(HarmonicIndex{0, 1}, moment::DiscreteMeasure({0.3, 0.6}, {0.5, 0.5}, true));
  m.emplace(HarmonicIndex{1, 2}, moment::DiscreteMeasure({0.4}, {0.7}, true));
  m.emplace(HarmonicIndex{2, 4}, moment::DiscreteMeasure({0.5, 0.8}, {0.2, 0.3}, true));
  const PseudoPositiveMeasure mu(3, 2, m);
  const cplx z = std::polar(2.0, 0.3);
  for (const auto& idx : sphere::harmonic_indices(3, 2)) {
    const cplx lhs = component_projection(mu, idx, z);
    CHECK(std::abs(lhs - component_transform(mu, idx, z)) < 1e-13);
  }
  CHECK_THROWS_AS(component_projection(mu, {2, 4}, z, 2), InvalidArgument);
}

TEST_CASE("multidimensional Nevanlinna residuals") {
  const auto ring = single(3, {0, 1}, 1.0, 1.0);
  std::vector<cplx> zs;
  for (double m : {4.0, 8.0, 16.0, 32.0}) zs.push_back(std::polar(m, std::numbers::pi / 4));
  const auto r = multi_nevanlinna_check(ring, {0, 1}, 1, zs);
  for (std::size_t i = 0; i < zs.size(); ++i) {
    // Remainder of the geometric series of 1/(zeta^2 - 1).
    const cplx z2 = zs[i] * zs[i];
    CHECK(r[i] == Approx(std::abs(1.0 / (z2 - 1.0))).epsilon(1e-8));
    if (i > 0) CHECK(r[i] < r[i - 1]);
  }
  const auto zero = multi_nevanlinna_check(PseudoPositiveMeasure(3, 1, {}), {1, 2}, 2, zs);
  for (double v : zero) CHECK(v == 0.0);
}

TEST_CASE("divergent partial sums") {
  const auto th = SphereDirection::from_angles(0.5, 0.5);
  const KDQPoint p(std::polar(5.0, std::numbers::pi / 4), th);
  const auto ring = single(3, {0, 1}, 1.0, 1.0);
  const auto zero = divergent_partial_sums(ring, 0, p);
  CHECK(zero.f_N == cplx(0, 0));
  CHECK(std::abs(zero.g_N - 1.0) < 1e-15);
  const auto two = divergent_partial_sums(ring, 1, p);
  const cplx z = p.zeta();
  CHECK(std::abs(two.f_N - (1.0 / z + 1.0 / (z * z * z))) < 1e-15);

  const auto mixed = single(3, {2, 3}, 0.5, 0.8, 2);
  double prev = 1e300;
  for (double m : {4.0, 8.0, 16.0}) {
    const KDQPoint q(std::polar(m, std::numbers::pi / 4), th);
    const double res = summation_residual(mixed, 2, q);
    CHECK(res < prev);
    prev = res;
    // Antipodal representative gives the same value.
    const KDQPoint qa(-q.zeta(), th.antipode());
    CHECK(summation_residual(mixed, 2, qa) == Approx(res));
  }
}
