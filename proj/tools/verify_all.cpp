#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "toda_kdq/errors.hpp"
#include "toda_kdq/io.hpp"
#include "toda_kdq/iso_flow.hpp"
#include "toda_kdq/kdq.hpp"
#include "toda_kdq/moment.hpp"
#include "toda_kdq/pseudo_toda.hpp"
#include "toda_kdq/toda.hpp"

namespace toda_kdq::cli {

namespace {

struct Row {
  std::string name;
  double observed;
  double tolerance;
  bool pass;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double max_eig_drift(const toda::Trajectory& tr, int stride) {
  const auto ev0 = moment::spectral_data_from_jacobi(toda::lax_matrix(tr.states.front())).eigenvalues;
  double drift = 0.0;
  for (std::size_t i = 0; i < tr.states.size(); i += static_cast<std::size_t>(stride)) {
    const auto ev = moment::spectral_data_from_jacobi(toda::lax_matrix(tr.states[i])).eigenvalues;
    for (std::size_t j = 0; j < ev.size(); ++j) drift = std::max(drift, std::abs(ev[j] - ev0[j]));
  }
  return drift;
}

void toda_rows(const std::filesystem::path& dir, std::vector<Row>& rows) {
  const auto pair = io::flaschka_state_from_json(io::read_json_file((dir / "toda_pair.json").string()));
  const auto tp = toda::integrate_toda(pair, 5.0, 1e-3);
  double cf = 0.0;
  for (std::size_t i = 0; i < tp.times.size(); ++i) {
    const double t = tp.times[i];
    cf = std::max({cf, std::abs(tp.states[i].a[0] - 0.5 / std::cosh(t)),
                   std::abs(tp.states[i].b[0] - 0.5 * std::tanh(t)),
                   std::abs(tp.states[i].b[1] + 0.5 * std::tanh(t))});
  }
  rows.push_back({"toda1d.closed_form_pair", cf, 1e-6, cf <= 1e-6});

  const auto chain = io::flaschka_state_from_json(io::read_json_file((dir / "toda_chain.json").string()));
  const auto tr = toda::integrate_toda(chain, 5.0, 1e-3);
  const double drift = max_eig_drift(tr, 50);
  rows.push_back({"toda1d.isospectrality", drift, 1e-8, drift <= 1e-8});

  double eq = 0.0;
  for (std::size_t i = 0; i < tr.times.size(); i += 100) {
    const auto sp = toda::spectral_solve(chain, tr.times[i]);
    for (std::size_t j = 0; j < sp.a.size(); ++j) eq = std::max(eq, std::abs(sp.a[j] - tr.states[i].a[j]));
    for (std::size_t j = 0; j < sp.b.size(); ++j) eq = std::max(eq, std::abs(sp.b[j] - tr.states[i].b[j]));
  }
  rows.push_back({"toda1d.spectral_vs_rk4", eq, 1e-6, eq <= 1e-6});

  double trace = 0.0, energy = 0.0;
  const double h0 = toda::hamiltonian_ab(chain);
  for (const auto& s : tr.states) {
    const double h = toda::hamiltonian_ab(s);
    trace = std::max(trace, std::abs(toda::lax_matrix(s).trace_of_square() - 0.5 * h));
    energy = std::max(energy, std::abs(h - h0));
  }
  rows.push_back({"toda1d.trace_identity", trace, 1e-12, trace <= 1e-12});
  rows.push_back({"toda1d.energy_conservation", energy, 1e-8, energy <= 1e-8});

  const auto L = toda::lax_matrix(chain);
  const auto sd = moment::spectral_data_from_jacobi(L);
  const auto mu = moment::measure_from_spectral_data(sd);
  double triple = 0.0;
  for (int i = 0; i < 12; ++i) {
    const moment::cplx z = std::polar(1.5 + 0.25 * i, 0.3 + 0.45 * i);
    const auto a = moment::continued_fraction_eval(L, z);
    const auto b = moment::resolvent_nn(L, z);
    const auto c = moment::stieltjes_transform(mu, z);
    triple = std::max({triple, std::abs(a - b) / std::abs(b), std::abs(a - c) / std::abs(c)});
  }
  rows.push_back({"moment.cf_resolvent_eigen", triple, 1e-11, triple <= 1e-11});
}

void moment_rows(const std::filesystem::path& dir, std::vector<Row>& rows) {
  const auto mu = io::measure_from_json(io::read_json_file((dir / "measure.json").string()));
  double total = mu.total_mass();
  std::vector<double> w(mu.weights().begin(), mu.weights().end());
  for (double& v : w) v /= total;
  const moment::DiscreteMeasure nu(std::vector<double>(mu.atoms().begin(), mu.atoms().end()), w);
  const auto back = moment::measure_from_spectral_data(
      moment::spectral_data_from_jacobi(moment::jacobi_from_measure(nu)));
  double rt = 0.0;
  for (int i = 0; i < nu.size(); ++i) {
    rt = std::max({rt, std::abs(back.atoms()[static_cast<std::size_t>(i)] - nu.atoms()[static_cast<std::size_t>(i)]),
                   std::abs(back.weights()[static_cast<std::size_t>(i)] - nu.weights()[static_cast<std::size_t>(i)])});
  }
  rows.push_back({"moment.inverse_round_trip", rt, 1e-10, rt <= 1e-10});

  const std::vector<double> ys{10.0, 100.0, 1000.0};
  double worst = 0.0;
  bool dec = true;
  for (int N : {1, 2}) {
    const auto r = moment::nevanlinna_limit_check(nu, N, ys);
    dec = dec && r[1] < r[0] && r[2] < r[1];
    worst = std::max(worst, r[2] / r[0]);
  }
  rows.push_back({"moment.nevanlinna_decreasing", worst, 1.0, dec});
}

void kdq_rows(std::vector<Row>& rows) {
  double err = 0.0;
  for (int n : {2, 3}) {
    for (int i = 0; i < 24; ++i) {
      const double a = 0.37 * i + 0.1, b = 0.61 * i + 0.2;
      const auto th = n == 2 ? sphere::SphereDirection::from_angle(a)
                             : sphere::SphereDirection::from_angles(std::fmod(a, std::numbers::pi), b);
      const auto dx = n == 2 ? sphere::SphereDirection::from_angle(b)
                             : sphere::SphereDirection::from_angles(std::fmod(b, std::numbers::pi), a);
      const double rx = 0.2 + 0.8 * std::fmod(0.173 * i, 1.0);
      std::vector<double> x;
      for (int c = 0; c < n; ++c) x.push_back(rx * dx[c]);
      const kdq::cplx z = std::polar(rx * (2.0 + std::fmod(0.29 * i, 2.0)), 0.83 * i);
      const auto ser = kdq::hua_kernel(z, th, x, 40);
      const auto ref = kdq::hua_kernel_closed(z, th, x);
      err = std::max(err, std::abs(ser.value - ref) / std::max(1.0, std::abs(ref)));
    }
  }
  rows.push_back({"kdq.hua_series_vs_closed", err, 1e-10, err <= 1e-10});

  double cauchy = 0.0;
  const auto e = sphere::SphereDirection::from_angles(0.9, 2.3);
  const std::vector<double> x{0.5 * e[0], 0.5 * e[1], 0.5 * e[2]};
  for (int j = 0; j <= 1; ++j) {
    for (const auto& idx : sphere::harmonic_indices(3, 2)) {
      const kdq::AlmansiPolynomial P(3, {{j, idx, 1.0}});
      cauchy = std::max(cauchy, std::abs(kdq::cauchy_reproduce(P, x) - P.eval(x)));
    }
  }
  rows.push_back({"kdq.cauchy_reproduction", cauchy, 1e-8, cauchy <= 1e-8});
}

void multi_rows(const std::filesystem::path& dir, std::vector<Row>& rows) {
  for (const char* name : {"nevanlinna_k0.json", "nevanlinna_k2.json"}) {
    const auto in = io::read_json_file((dir / name).string());
    const auto mu = io::pseudo_positive_measure_from_json(in);
    const sphere::HarmonicIndex idx{in.at("index").at("k").get<int>(), in.at("index").at("ell").get<int>()};
    std::vector<kdq::cplx> zs;
    for (double m : {4.0, 8.0, 16.0}) zs.push_back(std::polar(m, std::numbers::pi / 4));
    const auto r = kdq::multi_nevanlinna_check(mu, idx, in.value("N", 1), zs);
    double order = 1e300;
    for (std::size_t i = 1; i < r.size(); ++i) order = std::min(order, std::log2(r[i - 1] / r[i]));
    const bool ok = order >= 1.8 && r.back() <= 1e-4;
    rows.push_back({std::string("kdq.multi_nevanlinna_") + (idx.k == 0 ? "k0" : "k2"), r.back(), 1e-4, ok});
  }
}

void pseudo_rows(const std::filesystem::path& dir, std::vector<Row>& rows) {
  const auto s = io::pseudo_toda_state_from_json(io::read_json_file((dir / "pseudo_toda.json").string()));
  double norm = 0.0;
  bool h_exact = true;
  const double h0 = pseudo_toda::total_hamiltonian(s);
  double power = 0.0;
  for (const auto& [idx, c] : s.components()) {
    for (double l : c.lambdas) power += std::pow(l, 4);
  }
  for (double t : {0.0, 1.0, 10.0, 100.0}) {
    const auto st = pseudo_toda::evolve(s, t);
    norm = std::max(norm, pseudo_toda::normalization_invariant(st));
    h_exact = h_exact && pseudo_toda::total_hamiltonian(st) == h0;
  }
  rows.push_back({"pseudo.normalization", norm, 1e-12, norm <= 1e-12});
  const double hdev = std::abs(h0 - 2.0 * power);
  rows.push_back({"pseudo.total_hamiltonian", hdev, 1e-12, h_exact && hdev <= 1e-12});
  double ode = 0.0;
  for (const auto& [idx, c] : s.components()) {
    ode = std::max(ode, pseudo_toda::component_ode_residual(s, idx, 0.0, 1e-4));
  }
  rows.push_back({"pseudo.component_toda_residual", ode, 1e-6, ode <= 1e-6});
}

void iso_rows(const std::filesystem::path& dir, std::vector<Row>& rows) {
  const auto s = io::iso_flow_state_from_json(io::read_json_file((dir / "iso_flow.json").string()));
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(0.5 * i);
  const auto rep = iso_flow::monotonicity_check(s, grid);
  rows.push_back({"iso.monotone", rep.max_increase, 0.0, rep.monotone});
  rows.push_back({"iso.derivative_identity", rep.max_derivative_error, 1e-8,
                  rep.max_derivative_error <= 1e-8});
}

}  // namespace

int verify_all(const std::string& dir_name, std::ostream& out) {
  const std::filesystem::path dir(dir_name);
  if (!std::filesystem::is_directory(dir)) {
    throw InvalidArgument("fixture directory " + dir_name + " does not exist");
  }
  std::vector<Row> rows;
  toda_rows(dir, rows);
  moment_rows(dir, rows);
  kdq_rows(rows);
  multi_rows(dir, rows);
  pseudo_rows(dir, rows);
  iso_rows(dir, rows);

  std::size_t width = 5;
  for (const auto& r : rows) width = std::max(width, r.name.size());
  auto pad = [](std::string s, std::size_t w) {
    s.resize(std::max(s.size(), w), ' ');
    return s;
  };
  out << pad("check", width) << "  " << pad("observed", 10) << "  " << pad("tolerance", 10)
      << "  result\n";
  int passed = 0;
  for (const auto& r : rows) {
    out << pad(r.name, width) << "  " << pad(sci(r.observed), 10) << "  "
        << pad(sci(r.tolerance), 10) << "  " << (r.pass ? "PASS" : "FAIL") << '\n';
    passed += r.pass ? 1 : 0;
  }
  out << "summary: " << passed << "/" << rows.size() << " passed\n";
  return passed == static_cast<int>(rows.size()) ? kExitOk : kExitNumeric;
}

}  // namespace toda_kdq::cli
