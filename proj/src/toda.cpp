#include "toda_kdq/toda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "toda_kdq/errors.hpp"

namespace toda_kdq::toda {

namespace {

bool all_finite(const FlaschkaState& s) {
  auto fin = [](double v) { return std::isfinite(v); };
  return std::all_of(s.a.begin(), s.a.end(), fin) && std::all_of(s.b.begin(), s.b.end(), fin);
}

void require_shape(const FlaschkaState& s) {
  if (s.b.empty() || s.a.size() + 1 != s.b.size()) {
    throw InvalidArgument("Flaschka state needs N >= 1 b's and N-1 a's");
  }
}

// s + h * d
FlaschkaState axpy(const FlaschkaState& s, double h, const FlaschkaState& d) {
  FlaschkaState out = s;
  for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] += h * d.a[i];
  for (std::size_t i = 0; i < out.b.size(); ++i) out.b[i] += h * d.b[i];
  return out;
}

}  // namespace

void validate(const FlaschkaState& s) {
  require_shape(s);
  if (!all_finite(s)) throw InvalidArgument("Flaschka state has non-finite entries");
  for (double a : s.a) {
    if (!(a > 0.0)) throw InvalidArgument("Flaschka state requires a_j > 0");
  }
}

double hamiltonian_xy(const PhysicalState& s) {
  if (s.x.size() != s.y.size()) throw InvalidArgument("x and y lengths differ");
  double h = 0.0;
  for (double y : s.y) h += 0.5 * y * y;
  for (std::size_t j = 0; j + 1 < s.x.size(); ++j) h += std::exp(s.x[j] - s.x[j + 1]);
  if (!std::isfinite(h)) throw OverflowError("Hamiltonian overflow (displacement gap too large)");
  return h;
}

FlaschkaState flaschka_map(const PhysicalState& s) {
  if (s.x.size() != s.y.size() || s.x.empty()) {
    throw InvalidArgument("physical state needs matching nonempty x and y");
  }
  FlaschkaState out;
  out.a.reserve(s.x.size() - 1);
  for (std::size_t j = 0; j + 1 < s.x.size(); ++j) {
    out.a.push_back(0.5 * std::exp(0.5 * (s.x[j] - s.x[j + 1])));
  }
  out.b.reserve(s.y.size());
  for (double y : s.y) out.b.push_back(-0.5 * y);
  return out;
}

PhysicalState flaschka_inverse(const FlaschkaState& s, double gauge) {
  validate(s);
  PhysicalState out;
  const double ln2 = std::numbers::ln2;
  out.x.push_back(gauge);
  double acc = 0.0;  // sum_{m<j} ln a_m
  for (std::size_t j = 1; j < s.b.size(); ++j) {
    acc += std::log(s.a[j - 1]);
    out.x.push_back(gauge - 2.0 * static_cast<double>(j) * ln2 - 2.0 * acc);
  }
  for (double b : s.b) out.y.push_back(-2.0 * b);
  return out;
}

double hamiltonian_ab(const FlaschkaState& s) {
  require_shape(s);
  double sa = 0.0;
  double sb = 0.0;
  for (double a : s.a) sa += a * a;
  for (double b : s.b) sb += b * b;
  return 4.0 * (sa + 0.5 * sb);
}

FlaschkaState toda_rhs(const FlaschkaState& s) {
  require_shape(s);
  const std::size_t n = s.b.size();
  FlaschkaState d;
  d.a.resize(n - 1);
  d.b.resize(n);
  for (std::size_t j = 0; j + 1 < n; ++j) d.a[j] = s.a[j] * (s.b[j + 1] - s.b[j]);
  for (std::size_t j = 0; j < n; ++j) {
    const double right = j + 1 < n ? s.a[j] * s.a[j] : 0.0;
    const double left = j > 0 ? s.a[j - 1] * s.a[j - 1] : 0.0;
    d.b[j] = 2.0 * (right - left);
  }
  return d;
}

FlaschkaState rk4_step(const FlaschkaState& s, double dt) {
  const auto k1 = toda_rhs(s);
  const auto k2 = toda_rhs(axpy(s, 0.5 * dt, k1));
  const auto k3 = toda_rhs(axpy(s, 0.5 * dt, k2));
  const auto k4 = toda_rhs(axpy(s, dt, k3));
  FlaschkaState out = s;
  for (std::size_t i = 0; i < out.a.size(); ++i) {
    out.a[i] += dt / 6.0 * (k1.a[i] + 2.0 * k2.a[i] + 2.0 * k3.a[i] + k4.a[i]);
  }
  for (std::size_t i = 0; i < out.b.size(); ++i) {
    out.b[i] += dt / 6.0 * (k1.b[i] + 2.0 * k2.b[i] + 2.0 * k3.b[i] + k4.b[i]);
  }
  return out;
}

Trajectory integrate_toda(const FlaschkaState& s0, double t_final, double dt) {
  validate(s0);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
    throw InvalidArgument("t_final must be nonnegative");
  }
  const auto steps = static_cast<long long>(std::ceil(t_final / dt - 1e-9));
  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(steps + 1));
  traj.states.reserve(static_cast<std::size_t>(steps + 1));
  traj.times.push_back(0.0);
  traj.states.push_back(s0);
  FlaschkaState s = s0;
  for (long long i = 1; i <= steps; ++i) {
    const double t_next = i == steps ? t_final : static_cast<double>(i) * dt;
    const double h = t_next - traj.times.back();
    s = rk4_step(s, h);
    if (!all_finite(s)) {
      throw NumericError("non-finite Toda state at t=" + std::to_string(t_next));
    }
    for (double a : s.a) {
      if (!(a > 0.0)) {
        throw PositivityError("a_j lost positivity at t=" + std::to_string(t_next) +
                              "; reduce dt");
      }
    }
    traj.times.push_back(t_next);
    traj.states.push_back(s);
  }
  return traj;
}

moment::JacobiMatrix lax_matrix(const FlaschkaState& s) {
  validate(s);
  return moment::JacobiMatrix(s.b, s.a);
}

LaxPair lax_matrices(const FlaschkaState& s) {
  auto L = lax_matrix(s);
  const int n = s.size();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j + 1 < n; ++j) {
    B(j, j + 1) = s.a[static_cast<std::size_t>(j)];
    B(j + 1, j) = -s.a[static_cast<std::size_t>(j)];
  }
  return {std::move(L), std::move(B)};
}

Eigen::MatrixXd lax_commutator(const LaxPair& lp) {
  const Eigen::MatrixXd L = lp.L.dense();
  return lp.B * L - L * lp.B;
}

FlaschkaState flaschka_from_jacobi(const moment::JacobiMatrix& L) {
  return {{L.offdiag().begin(), L.offdiag().end()}, {L.diag().begin(), L.diag().end()}};
}

moment::SpectralData evolve_spectral_data(const moment::SpectralData& sd0, double t) {
  moment::validate_spectral_data(sd0, 1e-10);
  const std::size_t n = sd0.eigenvalues.size();
  std::vector<double> expo(n);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    expo[j] = sd0.masses[j] > 0.0 ? std::log(sd0.masses[j]) - 2.0 * sd0.eigenvalues[j] * t
                                  : -std::numeric_limits<double>::infinity();
    top = std::max(top, expo[j]);
  }
  moment::SpectralData out;
  out.eigenvalues = sd0.eigenvalues;
  out.masses.resize(n);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    out.masses[j] = std::exp(expo[j] - top);
    total += out.masses[j];
  }
  for (auto& w : out.masses) w /= total;
  return out;
}

FlaschkaState spectral_solve(const FlaschkaState& s0, double t) {
  const auto sd0 = moment::spectral_data_from_jacobi(lax_matrix(s0));
  const auto sd = evolve_spectral_data(sd0, t);
  for (double w : sd.masses) {
    if (!(w > 0.0)) {
      throw NumericError("spectral mass underflow at t=" + std::to_string(t) +
                         "; |t| too large for this spectrum");
    }
  }
  return flaschka_from_jacobi(moment::jacobi_from_measure(moment::measure_from_spectral_data(sd)));
}

AsymptoticsReport asymptotics_check(const FlaschkaState& s0, double t_large) {
  if (!(t_large > 0.0)) throw InvalidArgument("t_large must be positive");
  const auto sd0 = moment::spectral_data_from_jacobi(lax_matrix(s0));
  AsymptoticsReport rep;
  rep.eigenvalues = sd0.eigenvalues;
  const auto plus = spectral_solve(s0, t_large);
  const auto minus = spectral_solve(s0, -t_large);
  auto max_of = [](const std::vector<double>& v) {
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  };
  rep.max_a_plus = max_of(plus.a);
  rep.max_a_minus = max_of(minus.a);
  rep.b_plus_sorted = plus.b;
  rep.b_minus_sorted = minus.b;
  std::sort(rep.b_plus_sorted.begin(), rep.b_plus_sorted.end());
  std::sort(rep.b_minus_sorted.begin(), rep.b_minus_sorted.end());
  double trace0 = 0.0;
  for (double b : s0.b) trace0 += b;
  double tp = 0.0;
  double tm = 0.0;
  for (std::size_t j = 0; j < rep.eigenvalues.size(); ++j) {
    rep.max_b_deviation = std::max({rep.max_b_deviation,
                                    std::abs(rep.b_plus_sorted[j] - rep.eigenvalues[j]),
                                    std::abs(rep.b_minus_sorted[j] - rep.eigenvalues[j])});
    tp += plus.b[j];
    tm += minus.b[j];
  }
  rep.trace_drift = std::max(std::abs(tp - trace0), std::abs(tm - trace0));
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < rep.eigenvalues.size(); ++j) {
    gap = std::min(gap, rep.eigenvalues[j] - rep.eigenvalues[j - 1]);
  }
  if (!std::isfinite(gap)) gap = 1.0;  // N = 1: nothing decays
  rep.rate = 0.5 * gap;
  rep.tolerance = std::exp(-rep.rate * t_large);
  const double scale = 1.0 + max_of(rep.eigenvalues) - std::min(0.0, rep.eigenvalues.front());
  rep.passed = rep.max_a_plus <= rep.tolerance && rep.max_a_minus <= rep.tolerance &&
               rep.max_b_deviation <= rep.tolerance &&
               rep.trace_drift <= 1e-10 * scale;
  return rep;
}

}  // namespace toda_kdq::toda
