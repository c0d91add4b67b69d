// Acceptance criteria.  With no argument every criterion runs; with a number
// only that one.  Prints one line per criterion and exits nonzero on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "toda_kdq/iso_flow.hpp"
#include "toda_kdq/kdq.hpp"
#include "toda_kdq/moment.hpp"
#include "toda_kdq/pseudo_toda.hpp"
#include "toda_kdq/toda.hpp"

using namespace toda_kdq;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 20 states with N cycling through 2..8.
std::vector<toda::FlaschkaState> ensemble() {
  std::mt19937_64 rng(20240101);
  std::vector<toda::FlaschkaState> out;
  for (int i = 0; i < 20; ++i) out.push_back(oracle::random_state(rng, 2 + i % 7));
  return out;
}

Outcome isospectrality() {
  const auto t0 = std::chrono::steady_clock::now();
  double drift = 0.0;
  for (const auto& s : ensemble()) {
    const auto tr = toda::integrate_toda(s, 5.0, 1e-3);
    const auto ev0 = oracle::eigen(toda::lax_matrix(s).dense()).values;
    for (const auto& st : tr.states) {
      const auto ev = oracle::eigen(toda::lax_matrix(st).dense()).values;
      drift = std::max(drift, (ev - ev0).cwiseAbs().maxCoeff());
    }
  }
  const double secs = seconds_since(t0);
  return {drift <= 1e-8 && secs < 10.0,
          fmt("max eigenvalue drift %.3e (tol 1e-8), runtime %.2f s (limit 10 s)", drift, secs)};
}

Outcome method_equivalence() {
  double diff = 0.0;
  for (const auto& s : ensemble()) {
    const auto tr = toda::integrate_toda(s, 5.0, 1e-3);
    for (std::size_t i = 0; i < tr.times.size(); i += 10) {
      const auto sp = toda::spectral_solve(s, tr.times[i]);
      for (std::size_t j = 0; j < sp.a.size(); ++j) diff = std::max(diff, std::abs(sp.a[j] - tr.states[i].a[j]));
      for (std::size_t j = 0; j < sp.b.size(); ++j) diff = std::max(diff, std::abs(sp.b[j] - tr.states[i].b[j]));
    }
  }
  const toda::FlaschkaState pair{{0.5}, {0.0, 0.0}};
  const auto tr = toda::integrate_toda(pair, 5.0, 1e-3);
  double closed = 0.0;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const double t = tr.times[i];
    const auto sp = toda::spectral_solve(pair, t);
    for (const auto* st : {&tr.states[i], &sp}) {
      closed = std::max({closed, std::abs(st->a[0] - 0.5 / std::cosh(t)),
                         std::abs(st->b[0] - 0.5 * std::tanh(t)),
                         std::abs(st->b[1] + 0.5 * std::tanh(t))});
    }
  }
  return {diff <= 1e-6 && closed <= 1e-6,
          fmt("spectral vs RK4 %.3e (tol 1e-6), N=2 closed form %.3e (tol 1e-6)", diff, closed)};
}

Outcome energy_trace() {
  double trace = 0.0, energy = 0.0;
  for (const auto& s : ensemble()) {
    const auto tr = toda::integrate_toda(s, 5.0, 1e-3);
    const double h0 = toda::hamiltonian_ab(s);
    for (const auto& st : tr.states) {
      const double h = toda::hamiltonian_ab(st);
      const Eigen::MatrixXd L = toda::lax_matrix(st).dense();
      trace = std::max(trace, std::abs((L * L).trace() - 0.5 * h));
      energy = std::max(energy, std::abs(h - h0));
    }
  }
  return {trace <= 1e-12 && energy <= 1e-8,
          fmt("|tr L^2 - H/2| %.3e (tol 1e-12), energy drift %.3e (tol 1e-8)", trace, energy)};
}

Outcome triple_agreement() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ux(-3.0, 3.0), uy(0.05, 2.0), sign(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto s = oracle::random_state(rng, 1 + i % 8);
    const moment::JacobiMatrix L(s.b, s.a);
    const moment::cplx z{ux(rng), (sign(rng) < 0 ? -1.0 : 1.0) * uy(rng)};
    const auto cf = moment::continued_fraction_eval(L, z);
    const auto rs = moment::resolvent_nn(L, z);
    const auto ev = oracle::eigen_resolvent_nn(L.dense(), z);
    const double scale = std::abs(ev);
    worst = std::max({worst, std::abs(cf - rs) / scale, std::abs(cf - ev) / scale,
                      std::abs(rs - ev) / scale});
  }
  return {worst <= 1e-11, fmt("max relative disagreement %.3e over 50 pairs (tol 1e-11)", worst)};
}

Outcome inverse_round_trip() {
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int N = 1; N <= 10; ++N) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto mu = oracle::random_measure(rng, N);
      const auto L = moment::jacobi_from_measure(mu);
      const auto back = moment::measure_from_spectral_data(moment::spectral_data_from_jacobi(L));
      if (back.size() != mu.size()) return {false, "atom count changed in round trip"};
      for (int i = 0; i < N; ++i) {
        worst = std::max({worst, std::abs(back.atoms()[i] - mu.atoms()[i]),
                          std::abs(back.weights()[i] - mu.weights()[i])});
      }
    }
  }
  return {worst <= 1e-10, fmt("max atom/weight error %.3e for N <= 10 (tol 1e-10)", worst)};
}

Outcome nevanlinna_limit() {
  std::mt19937_64 rng(6);
  const std::vector<double> ys{10.0, 100.0, 1000.0};
  bool monotone = true;
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto mu = oracle::random_measure(rng, 4);
    for (int N : {1, 2}) {
      const auto r = moment::nevanlinna_limit_check(mu, N, ys);
      monotone = monotone && r[1] < r[0] && r[2] < r[1];
      worst_ratio = std::max(worst_ratio, r[2] / r[0]);
    }
  }
  return {monotone && worst_ratio <= 1e-3,
          fmt("monotone %.0f, worst residual(1000)/residual(10) %.3e (tol 1e-3)",
              monotone ? 1.0 : 0.0, worst_ratio)};
}

Outcome hua_kernel() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int n = 2 + i % 2;
    auto dir = [&] {
      return n == 2 ? sphere::SphereDirection::from_angle(2 * std::numbers::pi * u(rng))
                    : sphere::SphereDirection::from_angles(std::acos(2 * u(rng) - 1),
                                                           2 * std::numbers::pi * u(rng));
    };
    const auto th = dir();
    const auto dx = dir();
    const double rx = 0.2 + 0.8 * u(rng);
    std::vector<double> x;
    for (int c = 0; c < n; ++c) x.push_back(rx * dx[c]);
    const kdq::cplx z = std::polar(rx * (2.0 + 2.0 * u(rng)), 2 * std::numbers::pi * u(rng));
    const auto ser = kdq::hua_kernel(kdq::KDQPoint(z, th), x, 40);
    const auto ref = kdq::hua_kernel_closed(kdq::KDQPoint(z, th), x);
    worst = std::max(worst, std::abs(ser.value - ref) / std::max(1.0, std::abs(ref)));
  }
  double aligned = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto th = sphere::SphereDirection::from_angle(0.3 * i);
    const double s = 0.05 * (i + 1);
    const std::vector<double> x{s * th[0], s * th[1]};
    const kdq::cplx z = std::polar(2.5, 0.7 * i);
    const auto want = z / ((z - s) * (z - s));
    aligned = std::max(aligned, std::abs(kdq::hua_kernel_closed(z, th, x) - want) / std::abs(want));
  }
  return {worst <= 1e-10 && aligned <= 1e-14,
          fmt("series vs closed form %.3e (tol 1e-10), aligned case %.3e", worst, aligned)};
}

Outcome cauchy_reproduction() {
  double worst = 0.0;
  int count = 0;
  for (int n : {2, 3}) {
    for (double rx : {0.25, 0.5}) {
      const auto e = n == 2 ? sphere::SphereDirection::from_angle(1.3 + rx)
                            : sphere::SphereDirection::from_angles(0.7 + rx, 2.1);
      std::vector<double> x;
      for (int c = 0; c < n; ++c) x.push_back(rx * e[c]);
      for (int j = 0; j <= 3; ++j) {
        for (const auto& idx : sphere::harmonic_indices(n, 4)) {
          const kdq::AlmansiPolynomial P(n, {{j, idx, 1.0}});
          worst = std::max(worst, std::abs(kdq::cauchy_reproduce(P, x) - P.eval(x)));
          ++count;
        }
      }
    }
  }
  return {worst <= 1e-8, fmt("max error %.3e over %.0f monomial/point pairs (tol 1e-8)", worst, count)};
}

Outcome pseudo_toda_state() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ul(0.2, 1.5), um(0.1, 1.0);
  pseudo_toda::PseudoTodaState::ComponentMap m;
  double power = 0.0;
  for (const auto& idx : sphere::harmonic_indices(3, 2)) {
    pseudo_toda::Component c;
    double total = 0.0;
    for (int j = 0; j < 4; ++j) {
      c.lambdas.push_back(ul(rng));
      c.masses_tilde.push_back(um(rng));
      total += c.masses_tilde.back();
      power += std::pow(c.lambdas.back(), 4);
    }
    for (double& v : c.masses_tilde) v /= total;
    m.emplace(idx, c);
  }
  const pseudo_toda::PseudoTodaState s(3, std::move(m));
  const double h0 = pseudo_toda::total_hamiltonian(s);
  double norm = 0.0;
  bool constant = true;
  for (double t : {0.0, 1.0, 10.0, 100.0}) {
    const auto st = pseudo_toda::evolve(s, t);
    norm = std::max(norm, pseudo_toda::normalization_invariant(st));
    constant = constant && pseudo_toda::total_hamiltonian(st) == h0;
  }
  const double hdev = std::abs(h0 - 2.0 * power) / h0;
  double ode = 0.0;
  for (const auto& [idx, c] : s.components()) {
    ode = std::max(ode, pseudo_toda::component_ode_residual(s, idx, 0.0, 1e-4));
  }
  const bool ok = s.components().size() == 9 && norm <= 1e-12 && constant && hdev <= 1e-14 &&
                  ode <= 1e-6;
  return {ok, fmt("9 components: normalization %.3e (tol 1e-12), H vs 2 sum lambda^4 %.3e, "
                  "Toda residual %.3e (tol 1e-6)",
                  norm, hdev, ode)};
}

Outcome multi_nevanlinna() {
  struct Fixture {
    int n;
    sphere::HarmonicIndex idx;
    std::vector<double> atoms, weights;
  };
  const std::vector<Fixture> fixtures{{3, {0, 1}, {0.5}, {1.0}},
                                      {3, {2, 3}, {0.3, 0.5}, {0.6, 0.4}},
                                      {2, {1, 2}, {0.4}, {0.8}}};
  double min_order = 1e300, final_res = 0.0;
  for (const auto& f : fixtures) {
    kdq::PseudoPositiveMeasure::ComponentMap m;
    m.emplace(f.idx, moment::DiscreteMeasure(f.atoms, f.weights, true));
    const kdq::PseudoPositiveMeasure mu(f.n, f.idx.k, std::move(m));
    std::vector<kdq::cplx> zs;
    for (double r : {4.0, 8.0, 16.0}) zs.push_back(std::polar(r, std::numbers::pi / 4));
    const auto res = kdq::multi_nevanlinna_check(mu, f.idx, 1, zs);
    for (std::size_t i = 1; i < res.size(); ++i) {
      min_order = std::min(min_order, std::log2(res[i - 1] / res[i]));
    }
    final_res = std::max(final_res, res.back());
  }
  return {min_order >= 1.8 && final_res <= 1e-4,
          fmt("observed decay order >= %.3f (want 2), final residual %.3e (tol 1e-4)", min_order,
              final_res)};
}

Outcome iso_monotonicity() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ul(0.3, 2.0), um(0.05, 1.0);
  std::uniform_int_distribution<int> natoms(1, 4);
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(0.25 * i);
  bool monotone = true;
  double deriv = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 2;
    iso_flow::IsoFlowState::ComponentMap m;
    for (const auto& idx : sphere::harmonic_indices(n, 3)) {
      iso_flow::Component c;
      for (int j = natoms(rng); j > 0; --j) {
        c.lambdas.push_back(ul(rng));
        c.masses.push_back(um(rng));
      }
      m[idx] = c;
    }
    const auto rep = iso_flow::monotonicity_check(iso_flow::IsoFlowState(n, m), grid);
    monotone = monotone && rep.monotone;
    deriv = std::max(deriv, rep.max_derivative_error);
  }
  return {monotone && deriv <= 1e-8,
          fmt("monotone %.0f, derivative identity error %.3e (tol 1e-8)", monotone ? 1.0 : 0.0,
              deriv)};
}

std::string run_capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    status = -1;
    return out;
  }
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  status = pclose(p);
  return out;
}

Outcome cli_determinism() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string cmd = std::string("\"") + TODA_KDQ_CLI + "\" verify-all";
  int s1 = 0, s2 = 0;
  const auto a = run_capture(cmd, s1);
  const auto b = run_capture(cmd, s2);
  const double secs = seconds_since(t0);
  const bool ok = s1 == 0 && s2 == 0 && a == b && !a.empty() && secs < 60.0;
  return {ok, fmt("exit codes %.0f/%.0f, outputs identical %.0f", s1, s2, a == b ? 1.0 : 0.0) +
                  fmt(", runtime %.2f s (limit 60 s)", secs)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"isospectrality", isospectrality},
      {"method equivalence", method_equivalence},
      {"energy and trace identity", energy_trace},
      {"moment/CF/resolvent agreement", triple_agreement},
      {"inverse spectral round trip", inverse_round_trip},
      {"Hamburger-Nevanlinna limit", nevanlinna_limit},
      {"Hua-Aronszajn kernel", hua_kernel},
      {"Cauchy-type reproduction", cauchy_reproduction},
      {"pseudo-positive Toda", pseudo_toda_state},
      {"multidimensional Nevanlinna", multi_nevanlinna},
      {"isospectral-class monotonicity", iso_monotonicity},
      {"CLI determinism", cli_determinism},
  };
  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i + 1) != only) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2zu [%s] %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL",
                criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
