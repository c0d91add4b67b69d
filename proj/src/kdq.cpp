#include "toda_kdq/kdq.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "toda_kdq/errors.hpp"

namespace toda_kdq::kdq {

namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

void check_point(int n, std::span<const double> x) {
  if (static_cast<int>(x.size()) != n) {
    throw InvalidArgument("point has " + std::to_string(x.size()) +
                          " coordinates, expected " + std::to_string(n));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw InvalidArgument("point has a non-finite coordinate");
  }
}

cplx ipow(cplx z, int p) {
  cplx r{1.0, 0.0};
  for (int i = 0; i < p; ++i) r *= z;
  return r;
}

}  // namespace

KDQPoint::KDQPoint(cplx zeta, const SphereDirection& theta) : zeta_(zeta), theta_(theta) {
  if (!std::isfinite(zeta.real()) || !std::isfinite(zeta.imag())) {
    throw InvalidArgument("zeta must be finite");
  }
  bool flip = false;
  if (zeta.real() != 0.0) {
    flip = zeta.real() < 0.0;
  } else if (zeta.imag() != 0.0) {
    flip = zeta.imag() < 0.0;
  } else {
    for (int i = 0; i < theta.n(); ++i) {
      if (theta[i] != 0.0) {
        flip = theta[i] < 0.0;
        break;
      }
    }
  }
  if (flip) {
    zeta_ = -zeta;
    theta_ = theta.antipode();
  }
  if (zeta_.real() == 0.0) zeta_ = {0.0, zeta_.imag()};  // drop -0.0
}

std::pair<cplx, cplx> singular_roots(const SphereDirection& theta, std::span<const double> x) {
  check_point(theta.n(), x);
  const double c = theta.dot(x);
  const double disc = std::max(0.0, norm2(x) - c * c);
  const double s = std::sqrt(disc);
  return {cplx{c, s}, cplx{c, -s}};
}

cplx aronszajn_r_pow_n(cplx zeta, const SphereDirection& theta, std::span<const double> x) {
  const int n = theta.n();
  check_point(n, x);
  const double c = theta.dot(x);
  const double x2 = norm2(x);
  const cplx w = zeta * zeta - 2.0 * c * zeta + x2;
  // Cancellation leaves w at rounding level of its terms on the roots.
  const double scale = std::norm(zeta) + 2.0 * std::abs(c * zeta) + x2;
  if (std::abs(w) <= 1e-14 * scale) {
    throw PoleError("zeta is a singular root of r(zeta theta - x)");
  }
  if (n % 2 == 0) return ipow(w, n / 2);
  cplx r;
  if (zeta == cplx{0.0, 0.0}) {
    r = std::sqrt(w);
  } else {
    const cplx u = 1.0 / zeta;
    r = zeta * std::sqrt(1.0 - 2.0 * c * u + x2 * u * u);
  }
  return ipow(r, n);
}

cplx aronszajn_r_pow_n(const KDQPoint& p, std::span<const double> x) {
  return aronszajn_r_pow_n(p.zeta(), p.theta(), x);
}

cplx hua_kernel_closed(cplx zeta, const SphereDirection& theta, std::span<const double> x) {
  return ipow(zeta, theta.n() - 1) / aronszajn_r_pow_n(zeta, theta, x);
}

cplx hua_kernel_closed(const KDQPoint& p, std::span<const double> x) {
  return hua_kernel_closed(p.zeta(), p.theta(), x);
}

double harmonic_geometric_tail(int n, int k_max, double q) {
  if (q < 0.0 || q >= 1.0) throw InvalidArgument("geometric ratio must lie in [0, 1)");
  if (q == 0.0) return 0.0;
  const double K = k_max;
  const double lead = std::pow(q, K + 1.0);
  if (n == 2) return 2.0 * lead / (1.0 - q);
  if (n == 3) {
    // sum_{k>K} (2k+1) q^k
    return lead * ((2.0 * K + 3.0) - (2.0 * K + 1.0) * q) / ((1.0 - q) * (1.0 - q));
  }
  throw InvalidArgument("dimension must be 2 or 3");
}

SeriesValue hua_kernel(cplx zeta, const SphereDirection& theta, std::span<const double> x,
                       int k_max) {
  const int n = theta.n();
  check_point(n, x);
  if (k_max < 0) throw InvalidArgument("k_max must be nonnegative");
  const double rx = std::sqrt(norm2(x));
  if (!(std::abs(zeta) > rx)) {
    throw ConvergenceError("Hua-Aronszajn series diverges for |zeta| <= |x|");
  }
  const auto yt = sphere::eval_harmonics_upto(n, k_max, theta);
  std::vector<double> yx(yt.size(), 0.0);
  if (rx > 0.0) {
    std::array<double, 3> u{};
    for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] / rx;
    yx = sphere::eval_harmonics_upto(n, k_max, SphereDirection::normalized(n, {u.data(), static_cast<std::size_t>(n)}));
  } else {
    yx[0] = 1.0;
  }
  const cplx inv = 1.0 / zeta;
  cplx sum{0.0, 0.0};
  cplx zk{1.0, 0.0};
  double xk = 1.0;
  std::size_t pos = 0;
  for (int k = 0; k <= k_max; ++k) {
    double s = 0.0;
    for (int l = 0; l < sphere::dim_harmonics(n, k); ++l, ++pos) s += yt[pos] * yx[pos];
    sum += zk * (s * xk);
    zk *= inv;
    xk *= rx;
  }
  const cplx pre = zeta / (zeta * zeta - rx * rx);
  const double q = rx / std::abs(zeta);
  return {pre * sum, std::abs(pre) * harmonic_geometric_tail(n, k_max, q)};
}

SeriesValue hua_kernel(const KDQPoint& p, std::span<const double> x, int k_max) {
  return hua_kernel(p.zeta(), p.theta(), x, k_max);
}

AlmansiPolynomial::AlmansiPolynomial(int n, std::vector<AlmansiTerm> terms)
    : n_(n), terms_(std::move(terms)) {
  if (n != 2 && n != 3) throw InvalidArgument("dimension must be 2 or 3");
  for (const auto& t : terms_) {
    if (t.j < 0) throw InvalidArgument("Almansi power j must be nonnegative");
    sphere::validate_index(n, t.idx);
    if (!std::isfinite(t.coeff)) throw InvalidArgument("Almansi coefficient must be finite");
  }
}

int AlmansiPolynomial::degree() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, 2 * t.j + t.idx.k);
  return d;
}

double AlmansiPolynomial::eval(std::span<const double> x) const {
  check_point(n_, x);
  const double x2 = norm2(x);
  double s = 0.0;
  for (const auto& t : terms_) {
    s += t.coeff * std::pow(x2, t.j) * sphere::eval_solid_harmonic(n_, t.idx, x);
  }
  return s;
}

cplx AlmansiPolynomial::eval_on_quadric(cplx zeta, const SphereDirection& theta) const {
  cplx s{0.0, 0.0};
  for (const auto& t : terms_) {
    s += t.coeff * ipow(zeta, 2 * t.j + t.idx.k) * sphere::eval_harmonic(n_, t.idx, theta);
  }
  return s;
}

CauchyQuadrature resolve_cauchy_quadrature(const AlmansiPolynomial& P, CauchyQuadrature q) {
  const int deg = P.degree();
  if (q.zeta_points <= 0) q.zeta_points = std::max(64, 4 * (deg + 1));
  if (q.sphere_degree < 0) q.sphere_degree = 2 * deg + 2;
  return q;
}

cplx cauchy_reproduce(const AlmansiPolynomial& P, std::span<const double> x,
                      CauchyQuadrature q) {
  const int n = P.n();
  check_point(n, x);
  if (!(norm2(x) < 1.0)) throw InvalidArgument("cauchy_reproduce needs |x| < 1");
  q = resolve_cauchy_quadrature(P, q);
  const auto rule = sphere::sphere_rule(n, q.sphere_degree);
  const int M = q.zeta_points;
  cplx acc{0.0, 0.0};
  for (int i = 0; i < M; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / M;
    const cplx zeta = std::polar(1.0, phi);
    const cplx inner = sphere::quadrature_sphere(rule, [&](const SphereDirection& th) {
      return hua_kernel_closed(zeta, th, x) * P.eval_on_quadric(zeta, th);
    });
    acc += inner * zeta;
  }
  return acc / static_cast<double>(M);
}

PseudoPositiveMeasure::PseudoPositiveMeasure(int n, int k_max, ComponentMap components)
    : n_(n), k_max_(k_max), components_(std::move(components)) {
  if (n != 2 && n != 3) throw InvalidArgument("dimension must be 2 or 3");
  if (k_max < 0) throw InvalidArgument("k_max must be nonnegative");
  for (const auto& [idx, comp] : components_) {
    sphere::validate_index(n, idx);
    if (idx.k > k_max) {
      throw InvalidArgument("component degree " + std::to_string(idx.k) + " exceeds k_max");
    }
    for (double r : comp.atoms()) {
      if (r < 0.0) throw InvalidArgument("component atoms must be nonnegative radii");
    }
  }
}

const moment::DiscreteMeasure* PseudoPositiveMeasure::component(HarmonicIndex idx) const {
  auto it = components_.find(idx);
  return it == components_.end() ? nullptr : &it->second;
}

double PseudoPositiveMeasure::max_radius() const {
  double r = 0.0;
  for (const auto& [idx, comp] : components_) r = std::max(r, comp.max_abs_atom());
  return r;
}

double component_power_moment(const PseudoPositiveMeasure& mu, HarmonicIndex idx, int p) {
  sphere::validate_index(mu.n(), idx);
  const auto* c = mu.component(idx);
  if (c == nullptr) return 0.0;
  double s = 0.0;
  for (int m = 0; m < c->size(); ++m) {
    s += c->weights()[static_cast<std::size_t>(m)] *
         std::pow(c->atoms()[static_cast<std::size_t>(m)], p);
  }
  return s;
}

double multi_moment(const PseudoPositiveMeasure& mu, HarmonicIndex idx, int j) {
  if (j < 0) throw InvalidArgument("moment index must be nonnegative");
  return component_power_moment(mu, idx, idx.k + 2 * j);
}

moment::DiscreteMeasure tilde_component(const moment::DiscreteMeasure& component, int k) {
  std::vector<double> rho;
  std::vector<double> w;
  for (int m = 0; m < component.size(); ++m) {
    const double r = component.atoms()[static_cast<std::size_t>(m)];
    rho.push_back(r * r);
    w.push_back(component.weights()[static_cast<std::size_t>(m)] * std::pow(r, k));
  }
  return moment::DiscreteMeasure(std::move(rho), std::move(w), true);
}

GrowthReport growth_condition_check(const PseudoPositiveMeasure& mu) {
  GrowthReport rep;
  rep.m.assign(static_cast<std::size_t>(mu.k_max() + 1), 0.0);
  for (const auto& [idx, comp] : mu.components()) {
    auto& m = rep.m[static_cast<std::size_t>(idx.k)];
    m = std::max(m, std::abs(component_power_moment(mu, idx, idx.k)));
  }
  for (double v : rep.m) {
    if (!std::isfinite(v)) {
      rep.ok = false;
      rep.C = rep.D = std::numeric_limits<double>::infinity();
      return rep;
    }
  }
  int k0 = 0;
  while (k0 <= mu.k_max() && rep.m[static_cast<std::size_t>(k0)] == 0.0) ++k0;
  if (k0 > mu.k_max()) {
    rep.C = 0.0;
    rep.D = 1.0;
    return rep;
  }
  const double m0 = rep.m[static_cast<std::size_t>(k0)];
  // k-th roots of the normalized sequence; m_k <= C D^k with D^{k0} absorbed in C.
  std::vector<double> roots;
  double D = 0.0;
  for (int k = k0 + 1; k <= mu.k_max(); ++k) {
    const double rt = std::pow(rep.m[static_cast<std::size_t>(k)] / m0, 1.0 / (k - k0));
    roots.push_back(rt);
    D = std::max(D, rt);
  }
  if (D == 0.0) D = 1.0;
  constexpr double eps = 1e-12;
  rep.D = D;
  rep.C = m0 * (1.0 + eps) / std::pow(D, k0);
  // Super-geometric: k-th roots still climbing steadily at the end of the range.
  if (roots.size() >= 4) {
    const std::size_t half = roots.size() / 2;
    bool climbing = true;
    for (std::size_t i = half; i + 1 < roots.size(); ++i) {
      if (!(roots[i + 1] > roots[i])) climbing = false;
    }
    if (climbing && roots.back() >= 1.5 * roots[half]) rep.ok = false;
  }
  return rep;
}

cplx component_transform(const PseudoPositiveMeasure& mu, HarmonicIndex idx, cplx zeta) {
  sphere::validate_index(mu.n(), idx);
  const auto* c = mu.component(idx);
  if (c == nullptr) return {0.0, 0.0};
  return moment::stieltjes_transform(tilde_component(*c, idx.k), zeta * zeta);
}

SeriesValue markov_stieltjes(const PseudoPositiveMeasure& mu, cplx zeta,
                             const SphereDirection& theta) {
  if (theta.n() != mu.n()) throw InvalidArgument("direction dimension mismatch");
  const double az = std::abs(zeta);
  const double R = mu.max_radius();
  const cplx z2 = zeta * zeta;
  const auto growth = growth_condition_check(mu);
  const bool outside = az > R;
  const bool upper = z2.imag() > 0.0 && az > growth.D;
  if (!outside && !upper) {
    throw ConvergenceError("Stieltjes-Markov series requires |zeta| beyond the support radius");
  }
  const int n = mu.n();
  const auto ys = sphere::eval_harmonics_upto(n, mu.k_max(), theta);
  cplx sum{0.0, 0.0};
  for (const auto& [idx, comp] : mu.components()) {
    const cplx F = component_transform(mu, idx, zeta);
    sum += std::pow(zeta, 1 - idx.k) * ys[sphere::flat_offset(n, idx)] * F;
  }
  // Degrees past k_max obeying |int r^k dmu| <= C D^k contribute at most
  // d_k C D^k |zeta|^{1-k} / dist(zeta^2, support).
  double tail = 0.0;
  const double q = growth.D / az;
  if (growth.C > 0.0) {
    double dist = 0.0;
    if (z2.imag() > 0.0) dist = z2.imag();
    else if (az > growth.D) dist = az * az - growth.D * growth.D;
    tail = (q < 1.0 && dist > 0.0)
               ? growth.C * az / dist * harmonic_geometric_tail(n, mu.k_max(), q)
               : std::numeric_limits<double>::infinity();
  }
  return {sum, tail};
}

SeriesValue markov_stieltjes(const PseudoPositiveMeasure& mu, const KDQPoint& p) {
  return markov_stieltjes(mu, p.zeta(), p.theta());
}

int projection_degree(const PseudoPositiveMeasure& mu, HarmonicIndex idx) {
  int kmax = 0;
  for (const auto& [i, c] : mu.components()) kmax = std::max(kmax, i.k);
  return kmax + idx.k;
}

cplx component_projection(const PseudoPositiveMeasure& mu, HarmonicIndex idx, cplx zeta,
                          int quad_degree) {
  sphere::validate_index(mu.n(), idx);
  const int need = projection_degree(mu, idx);
  if (quad_degree < 0) quad_degree = need;
  if (quad_degree < need) {
    throw InvalidArgument("sphere quadrature degree " + std::to_string(quad_degree) +
                          " cannot resolve degree " + std::to_string(need));
  }
  const cplx integral = sphere::quadrature_sphere(
      mu.n(),
      [&](const SphereDirection& th) {
        return markov_stieltjes(mu, zeta, th).value * sphere::eval_harmonic(mu.n(), idx, th);
      },
      quad_degree);
  return std::pow(zeta, idx.k - 1) * integral;
}

std::vector<double> multi_nevanlinna_check(const PseudoPositiveMeasure& mu, HarmonicIndex idx,
                                           int N, std::span<const cplx> zetas,
                                           int quad_degree) {
  if (N < 0) throw InvalidArgument("N must be nonnegative");
  sphere::validate_index(mu.n(), idx);
  std::vector<double> s(static_cast<std::size_t>(2 * N + 1));
  for (int j = 0; j <= 2 * N; ++j) s[static_cast<std::size_t>(j)] = multi_moment(mu, idx, j);
  std::vector<double> out;
  for (cplx zeta : zetas) {
    const cplx proj = component_projection(mu, idx, zeta, quad_degree);
    const cplx inv2 = 1.0 / (zeta * zeta);
    cplx partial{0.0, 0.0};
    cplx p = inv2;
    for (int j = 0; j < 2 * N; ++j) {
      partial += s[static_cast<std::size_t>(j)] * p;
      p *= inv2;
    }
    const cplx scaled = ipow(zeta, 4 * N + 2) * (proj - partial);
    out.push_back(std::abs(scaled - s[static_cast<std::size_t>(2 * N)]));
  }
  return out;
}

PartialSums divergent_partial_sums(const PseudoPositiveMeasure& mu, int N, const KDQPoint& p) {
  if (N < 0) throw InvalidArgument("N must be nonnegative");
  if (p.n() != mu.n()) throw InvalidArgument("direction dimension mismatch");
  const cplx zeta = p.zeta();
  if (zeta == cplx{0.0, 0.0}) throw PoleError("partial sums are singular at zeta = 0");
  const auto ys = sphere::eval_harmonics_upto(mu.n(), mu.k_max(), p.theta());
  const cplx inv = 1.0 / zeta;
  cplx f{0.0, 0.0};
  cplx g{0.0, 0.0};
  for (const auto& [idx, comp] : mu.components()) {
    const double y = ys[sphere::flat_offset(mu.n(), idx)];
    const cplx zk = ipow(inv, idx.k);
    cplx z2j{1.0, 0.0};
    for (int j = 0; j < 2 * N; ++j) {
      f += multi_moment(mu, idx, j) * zk * z2j * y;
      z2j *= inv * inv;
    }
    g += multi_moment(mu, idx, 2 * N) * zk * y;
  }
  return {f * inv, g};
}

double summation_residual(const PseudoPositiveMeasure& mu, int N, const KDQPoint& p) {
  const auto ps = divergent_partial_sums(mu, N, p);
  const cplx mhat = markov_stieltjes(mu, p).value;
  return std::abs(ipow(p.zeta(), 4 * N + 1) * (mhat - ps.f_N) - ps.g_N);
}

}  // namespace toda_kdq::kdq
