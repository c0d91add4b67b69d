#include "toda_kdq/sphere.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "toda_kdq/errors.hpp"

namespace toda_kdq::sphere {

namespace {

void require_dimension(int n) {
  if (n != 2 && n != 3) {
    throw InvalidArgument("unsupported sphere dimension n=" + std::to_string(n) +
                          " (only n = 2, 3)");
  }
}

// N_k^m(x) = sqrt((2k+1)(k-m)!/(k+m)!) P_k^m(x), without Condon-Shortley
// phase, for all 0 <= m <= k <= k_max.  Row-major in k: entry k*(k+1)/2 + m.
std::vector<double> normalized_legendre(int k_max, double x, double s) {
  std::vector<double> p(static_cast<std::size_t>((k_max + 1) * (k_max + 2) / 2), 0.0);
  auto at = [&](int k, int m) -> double& {
    return p[static_cast<std::size_t>(k * (k + 1) / 2 + m)];
  };
  at(0, 0) = 1.0;
  for (int m = 1; m <= k_max; ++m) {
    at(m, m) = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * at(m - 1, m - 1);
  }
  for (int m = 0; m < k_max; ++m) {
    at(m + 1, m) = std::sqrt(2.0 * m + 3.0) * x * at(m, m);
  }
  for (int m = 0; m <= k_max; ++m) {
    for (int k = m + 2; k <= k_max; ++k) {
      const double km = static_cast<double>(k - m);
      const double kp = static_cast<double>(k + m);
      const double a = std::sqrt((2.0 * k - 1.0) * (2.0 * k + 1.0) / (km * kp));
      const double b = std::sqrt((2.0 * k + 1.0) * (kp - 1.0) * (km - 1.0) /
                                 ((2.0 * k - 3.0) * kp * km));
      at(k, m) = a * x * at(k - 1, m) - b * at(k - 2, m);
    }
  }
  return p;
}

}  // namespace

int dim_harmonics(int n, int k) {
  require_dimension(n);
  if (k < 0) throw InvalidArgument("negative harmonic degree");
  if (k == 0) return 1;
  // (2k+n-2)(n+k-3)! / ((n-2)! k!)
  double ratio = 1.0;  // (n+k-3)! / k!
  for (int i = k + 1; i <= n + k - 3; ++i) ratio *= i;
  for (int i = n + k - 2; i <= k; ++i) ratio /= i;
  double fact_n2 = 1.0;
  for (int i = 2; i <= n - 2; ++i) fact_n2 *= i;
  return static_cast<int>(std::lround((2.0 * k + n - 2.0) * ratio / fact_n2));
}

bool is_valid_index(int n, HarmonicIndex idx) {
  if (n != 2 && n != 3) return false;
  if (idx.k < 0) return false;
  return idx.ell >= 1 && idx.ell <= dim_harmonics(n, idx.k);
}

void validate_index(int n, HarmonicIndex idx) {
  require_dimension(n);
  if (!is_valid_index(n, idx)) {
    throw InvalidArgument("invalid harmonic index (k=" + std::to_string(idx.k) +
                          ", ell=" + std::to_string(idx.ell) + ") for n=" +
                          std::to_string(n));
  }
}

std::vector<HarmonicIndex> harmonic_indices(int n, int k_max) {
  require_dimension(n);
  std::vector<HarmonicIndex> out;
  for (int k = 0; k <= k_max; ++k) {
    const int d = dim_harmonics(n, k);
    for (int ell = 1; ell <= d; ++ell) out.push_back({k, ell});
  }
  return out;
}

std::size_t flat_offset(int n, HarmonicIndex idx) {
  validate_index(n, idx);
  // sum_{k'<k} d_k' = k^2 (n=3) or 2k-1 (n=2, k>=1)
  std::size_t base = 0;
  if (n == 3) {
    base = static_cast<std::size_t>(idx.k * idx.k);
  } else {
    base = idx.k == 0 ? 0 : static_cast<std::size_t>(2 * idx.k - 1);
  }
  return base + static_cast<std::size_t>(idx.ell - 1);
}

SphereDirection::SphereDirection(int n, std::span<const double> coords) {
  require_dimension(n);
  if (coords.size() != static_cast<std::size_t>(n)) {
    throw InvalidArgument("direction has " + std::to_string(coords.size()) +
                          " coordinates, expected " + std::to_string(n));
  }
  double norm2 = 0.0;
  for (int i = 0; i < n; ++i) {
    c_[static_cast<std::size_t>(i)] = coords[static_cast<std::size_t>(i)];
    norm2 += coords[static_cast<std::size_t>(i)] * coords[static_cast<std::size_t>(i)];
  }
  if (!(std::abs(std::sqrt(norm2) - 1.0) <= 1e-12)) {
    throw InvalidArgument("sphere direction is not a unit vector");
  }
  n_ = n;
}

SphereDirection SphereDirection::normalized(int n, std::span<const double> v) {
  require_dimension(n);
  if (v.size() != static_cast<std::size_t>(n)) {
    throw InvalidArgument("direction has wrong number of coordinates");
  }
  double norm2 = 0.0;
  for (double c : v) norm2 += c * c;
  const double norm = std::sqrt(norm2);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw InvalidArgument("cannot normalize a zero or non-finite vector");
  }
  SphereDirection d;
  d.n_ = n;
  for (int i = 0; i < n; ++i) d.c_[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)] / norm;
  return d;
}

SphereDirection SphereDirection::from_angle(double phi) {
  SphereDirection d;
  d.n_ = 2;
  d.c_ = {std::cos(phi), std::sin(phi), 0.0};
  return d;
}

SphereDirection SphereDirection::from_angles(double polar, double azimuth) {
  SphereDirection d;
  d.n_ = 3;
  const double s = std::sin(polar);
  d.c_ = {s * std::cos(azimuth), s * std::sin(azimuth), std::cos(polar)};
  return d;
}

SphereDirection SphereDirection::antipode() const {
  SphereDirection d = *this;
  for (auto& c : d.c_) c = -c;
  return d;
}

double SphereDirection::dot(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(n_)) {
    throw InvalidArgument("dimension mismatch in dot product");
  }
  double s = 0.0;
  for (int i = 0; i < n_; ++i) s += c_[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
  return s;
}

std::vector<double> eval_harmonics_upto(int n, int k_max,
                                        const SphereDirection& theta) {
  require_dimension(n);
  if (theta.n() != n) throw InvalidArgument("direction dimension mismatch");
  if (k_max < 0) return {};
  const double sqrt2 = std::numbers::sqrt2;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n == 3 ? (k_max + 1) * (k_max + 1) : 2 * k_max + 1));
  if (n == 2) {
    const double c1 = theta[0];
    const double s1 = theta[1];
    double c = 1.0;
    double s = 0.0;
    out.push_back(1.0);
    for (int k = 1; k <= k_max; ++k) {
      const double cn = c * c1 - s * s1;
      const double sn = s * c1 + c * s1;
      c = cn;
      s = sn;
      out.push_back(sqrt2 * c);
      out.push_back(sqrt2 * s);
    }
    return out;
  }
  const double z = theta[2];
  const double rho = std::hypot(theta[0], theta[1]);
  const double cphi = rho > 0.0 ? theta[0] / rho : 1.0;
  const double sphi = rho > 0.0 ? theta[1] / rho : 0.0;
  const auto p = normalized_legendre(k_max, z, rho);
  std::vector<double> cm(static_cast<std::size_t>(k_max + 1));
  std::vector<double> sm(static_cast<std::size_t>(k_max + 1));
  cm[0] = 1.0;
  sm[0] = 0.0;
  for (int m = 1; m <= k_max; ++m) {
    cm[static_cast<std::size_t>(m)] = cm[static_cast<std::size_t>(m - 1)] * cphi - sm[static_cast<std::size_t>(m - 1)] * sphi;
    sm[static_cast<std::size_t>(m)] = sm[static_cast<std::size_t>(m - 1)] * cphi + cm[static_cast<std::size_t>(m - 1)] * sphi;
  }
  for (int k = 0; k <= k_max; ++k) {
    const std::size_t row = static_cast<std::size_t>(k * (k + 1) / 2);
    out.push_back(p[row]);
    for (int m = 1; m <= k; ++m) {
      const double v = sqrt2 * p[row + static_cast<std::size_t>(m)];
      out.push_back(v * cm[static_cast<std::size_t>(m)]);
      out.push_back(v * sm[static_cast<std::size_t>(m)]);
    }
  }
  return out;
}

double eval_harmonic(int n, HarmonicIndex idx, const SphereDirection& theta) {
  validate_index(n, idx);
  return eval_harmonics_upto(n, idx.k, theta)[flat_offset(n, idx)];
}

double eval_solid_harmonic(int n, HarmonicIndex idx, std::span<const double> x) {
  validate_index(n, idx);
  if (x.size() != static_cast<std::size_t>(n)) {
    throw InvalidArgument("point dimension mismatch");
  }
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  if (r2 == 0.0) return idx.k == 0 ? 1.0 : 0.0;
  const double r = std::sqrt(r2);
  return std::pow(r, idx.k) * eval_harmonic(n, idx, SphereDirection::normalized(n, x));
}

GaussLegendre gauss_legendre(int points) {
  if (points < 1) throw InvalidArgument("Gauss-Legendre needs at least one node");
  GaussLegendre gl;
  gl.nodes.resize(static_cast<std::size_t>(points));
  gl.weights.resize(static_cast<std::size_t>(points));
  const int half = (points + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= points; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int j = 2; j <= points; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = points * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    gl.nodes[static_cast<std::size_t>(i)] = -x;
    gl.nodes[static_cast<std::size_t>(points - 1 - i)] = x;
    gl.weights[static_cast<std::size_t>(i)] = w;
    gl.weights[static_cast<std::size_t>(points - 1 - i)] = w;
  }
  if (points % 2 == 1) gl.nodes[static_cast<std::size_t>(points / 2)] = 0.0;
  return gl;
}

SphereRule sphere_rule(int n, int degree) {
  require_dimension(n);
  if (degree < 0) throw InvalidArgument("negative quadrature degree");
  SphereRule rule;
  rule.n = n;
  rule.degree = degree;
  const int azimuthal = degree + 1;
  const double two_pi = 2.0 * std::numbers::pi;
  if (n == 2) {
    for (int i = 0; i < azimuthal; ++i) {
      rule.nodes.push_back(SphereDirection::from_angle(two_pi * i / azimuthal));
      rule.weights.push_back(1.0 / azimuthal);
    }
    return rule;
  }
  const auto gl = gauss_legendre(degree / 2 + 1);
  for (std::size_t a = 0; a < gl.nodes.size(); ++a) {
    const double polar = std::acos(gl.nodes[a]);
    for (int i = 0; i < azimuthal; ++i) {
      rule.nodes.push_back(SphereDirection::from_angles(polar, two_pi * i / azimuthal));
      rule.weights.push_back(0.5 * gl.weights[a] / azimuthal);
    }
  }
  return rule;
}

}  // namespace toda_kdq::sphere
