#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "toda_kdq/errors.hpp"
#include "toda_kdq/io.hpp"
#include "toda_kdq/iso_flow.hpp"
#include "toda_kdq/kdq.hpp"
#include "toda_kdq/moment.hpp"
#include "toda_kdq/pseudo_toda.hpp"
#include "toda_kdq/toda.hpp"

#ifndef TODA_KDQ_FIXTURE_DIR
#define TODA_KDQ_FIXTURE_DIR "fixtures"
#endif

namespace toda_kdq::cli {

namespace {

using io::format_double;
using io::json;

const char* const kCommands[] = {"simulate-1d",      "spectral-solve", "simulate-pseudo",
                                 "transform-eval",   "nevanlinna-check", "iso-flow",
                                 "verify-all"};

double positive(const std::optional<double>& flag, const json& in, const char* key, double def,
                const char* name) {
  double v = def;
  if (flag) v = *flag;
  else if (in.is_object() && in.contains(key)) v = in.at(key).get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(std::string(name) + " must be positive");
  }
  return v;
}

json require_input(const RunConfig& cfg) {
  if (cfg.input.empty()) throw InvalidArgument(cfg.command + " needs --input");
  return io::read_json_file(cfg.input);
}

std::vector<double> sample_times(double t_final, double dt) {
  const auto steps = static_cast<long>(std::ceil(t_final / dt - 1e-9));
  std::vector<double> t;
  for (long i = 0; i < steps; ++i) t.push_back(static_cast<double>(i) * dt);
  t.push_back(t_final);
  return t;
}

std::vector<std::string> trajectory_header(int N) {
  std::vector<std::string> h{"t"};
  for (int j = 1; j < N; ++j) h.push_back("a_" + std::to_string(j));
  for (int j = 1; j <= N; ++j) h.push_back("b_" + std::to_string(j));
  h.push_back("H");
  for (int j = 1; j <= N; ++j) h.push_back("lambda_" + std::to_string(j));
  return h;
}

std::vector<std::string> trajectory_row(double t, const toda::FlaschkaState& s) {
  std::vector<std::string> row{format_double(t)};
  for (double v : s.a) row.push_back(format_double(v));
  for (double v : s.b) row.push_back(format_double(v));
  row.push_back(format_double(toda::hamiltonian_ab(s)));
  for (double v : moment::spectral_data_from_jacobi(toda::lax_matrix(s)).eigenvalues) {
    row.push_back(format_double(v));
  }
  return row;
}

int simulate_1d(const RunConfig& cfg, std::ostream& out) {
  const json in = require_input(cfg);
  const auto s0 = io::flaschka_state_from_json(in);
  const double tf = positive(cfg.t_final, in, "t_final", 5.0, "t-final");
  const double dt = positive(cfg.dt, in, "dt", 1e-3, "dt");
  const auto tr = toda::integrate_toda(s0, tf, dt);
  io::write_csv_row(out, trajectory_header(s0.size()));
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    io::write_csv_row(out, trajectory_row(tr.times[i], tr.states[i]));
  }
  return kExitOk;
}

int spectral_solve(const RunConfig& cfg, std::ostream& out) {
  const json in = require_input(cfg);
  const auto s0 = io::flaschka_state_from_json(in);
  const double tf = positive(cfg.t_final, in, "t_final", 5.0, "t-final");
  const double dt = positive(cfg.dt, in, "dt", 1e-2, "dt");
  io::write_csv_row(out, trajectory_header(s0.size()));
  for (double t : sample_times(tf, dt)) {
    io::write_csv_row(out, trajectory_row(t, toda::spectral_solve(s0, t)));
  }
  return kExitOk;
}

int simulate_pseudo(const RunConfig& cfg, std::ostream& out) {
  const json in = require_input(cfg);
  const auto s0 = io::pseudo_toda_state_from_json(in);
  const double tf = positive(cfg.t_final, in, "t_final", 10.0, "t-final");
  const double dt = positive(cfg.dt, in, "dt", 0.1, "dt");
  int N = 0;
  for (const auto& [idx, c] : s0.components()) N = std::max(N, c.size());
  std::vector<std::string> header{"t", "k", "ell", "H", "norm_deviation"};
  for (int j = 1; j < N; ++j) header.push_back("a_" + std::to_string(j));
  for (int j = 1; j <= N; ++j) header.push_back("b_" + std::to_string(j));
  io::write_csv_row(out, header);
  for (double t : sample_times(tf, dt)) {
    const auto st = pseudo_toda::evolve(s0, t);
    for (const auto& [idx, c] : st.components()) {
      const auto L = pseudo_toda::component_jacobi(st, idx);
      double sum = 0.0;
      for (double m : c.masses_tilde) sum += m;
      std::vector<std::string> row{format_double(t), std::to_string(idx.k),
                                   std::to_string(idx.ell),
                                   format_double(pseudo_toda::component_hamiltonian(st, idx)),
                                   format_double(std::abs(sum - 1.0))};
      for (int j = 0; j + 1 < N; ++j) {
        row.push_back(j < L.size() - 1 ? format_double(L.offdiag()[static_cast<std::size_t>(j)]) : "");
      }
      for (int j = 0; j < N; ++j) {
        row.push_back(j < L.size() ? format_double(L.diag()[static_cast<std::size_t>(j)]) : "");
      }
      io::write_csv_row(out, row);
    }
    std::vector<std::string> total{format_double(t), "total", "",
                                   format_double(pseudo_toda::total_hamiltonian(st)),
                                   format_double(pseudo_toda::normalization_invariant(st))};
    total.resize(header.size());
    io::write_csv_row(out, total);
  }
  return kExitOk;
}

kdq::PseudoPositiveMeasure truncated(const kdq::PseudoPositiveMeasure& mu, std::optional<int> k) {
  if (!k) return mu;
  if (*k < 0) throw InvalidArgument("kmax must be nonnegative");
  kdq::PseudoPositiveMeasure::ComponentMap comps;
  for (const auto& [idx, c] : mu.components()) {
    if (idx.k <= *k) comps.emplace(idx, c);
  }
  return kdq::PseudoPositiveMeasure(mu.n(), std::min(*k, mu.k_max()), std::move(comps));
}

int transform_eval(const RunConfig& cfg, std::ostream& out) {
  const json in = require_input(cfg);
  const auto mu = truncated(io::pseudo_positive_measure_from_json(in), cfg.k_max);
  if (!in.contains("points") || !in.at("points").is_array()) {
    throw InvalidArgument("transform-eval input needs a \"points\" array");
  }
  json results = json::array();
  for (const auto& p : in.at("points")) {
    if (!p.contains("zeta") || !p.contains("theta")) {
      throw InvalidArgument("each point needs \"zeta\" and \"theta\"");
    }
    const auto th = p.at("theta").get<std::vector<double>>();
    const kdq::KDQPoint pt(io::complex_from_json(p.at("zeta")),
                           sphere::SphereDirection(static_cast<int>(th.size()), th));
    const auto v = kdq::markov_stieltjes(mu, pt);
    results.push_back({{"zeta", p.at("zeta")},
                       {"theta", th},
                       {"value", io::to_json(v.value)},
                       {"tail_bound", v.tail_bound}});
  }
  out << json{{"schema", io::kSchemaVersion}, {"command", "transform-eval"}, {"results", results}}
             .dump(2)
      << '\n';
  return kExitOk;
}

bool decreasing(const std::vector<double>& r, double slack) {
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (r[i] > r[i - 1] + slack) return false;
  }
  return true;
}

int nevanlinna_check(const RunConfig& cfg, std::ostream& out) {
  const json in = require_input(cfg);
  const int N = in.value("N", 1);
  const double slack = cfg.tol.value_or(0.0);
  json report{{"schema", io::kSchemaVersion}, {"command", "nevanlinna-check"}, {"N", N}};
  std::vector<double> res;
  if (in.contains("n")) {
    const auto mu = io::pseudo_positive_measure_from_json(in);
    if (!in.contains("index")) throw InvalidArgument("multidimensional check needs \"index\"");
    const sphere::HarmonicIndex idx{in.at("index").at("k").get<int>(),
                                    in.at("index").at("ell").get<int>()};
    std::vector<kdq::cplx> zs;
    if (in.contains("zeta")) {
      for (const auto& z : in.at("zeta")) zs.push_back(io::complex_from_json(z));
    } else {
      for (double m : {4.0, 8.0, 16.0}) zs.push_back(std::polar(m, std::acos(-1.0) / 4));
    }
    res = kdq::multi_nevanlinna_check(mu, idx, N, zs, cfg.quad_degree.value_or(-1));
    json zj = json::array();
    for (auto z : zs) zj.push_back(io::to_json(z));
    report["zeta"] = zj;
    report["index"] = {{"k", idx.k}, {"ell", idx.ell}};
  } else {
    const auto mu = io::measure_from_json(in);
    const auto ys = in.value("y", std::vector<double>{10.0, 100.0, 1000.0});
    res = moment::nevanlinna_limit_check(mu, N, ys);
    report["y"] = ys;
  }
  report["residuals"] = res;
  report["decreasing"] = decreasing(res, slack);
  out << report.dump(2) << '\n';
  return kExitOk;
}

int iso_flow_cmd(const RunConfig& cfg, std::ostream& out) {
  const json in = require_input(cfg);
  const auto s0 = io::iso_flow_state_from_json(in);
  const double tf = positive(cfg.t_final, in, "t_final", 10.0, "t-final");
  const double dt = positive(cfg.dt, in, "dt", 0.5, "dt");
  const double tol = cfg.tol.value_or(1e-8);
  const auto grid = sample_times(tf, dt);
  const auto mono = iso_flow::monotonicity_check(s0, grid);
  const auto integ = iso_flow::integrability_check(s0);
  json comps = json::array();
  for (const auto& [idx, c] : s0.components()) {
    std::vector<double> S;
    for (double t : grid) S.push_back(iso_flow::integrability_functional(iso_flow::riccati_evolve(s0, t), idx));
    comps.push_back({{"k", idx.k}, {"ell", idx.ell}, {"S", S}});
  }
  json report{{"schema", io::kSchemaVersion},
              {"command", "iso-flow"},
              {"t", grid},
              {"components", comps},
              {"monotone", mono.monotone},
              {"max_derivative_error", mono.max_derivative_error},
              {"derivative_tolerance", tol},
              {"derivative_ok", mono.max_derivative_error <= tol},
              {"integrability",
               {{"total", integ.total},
                {"per_degree", integ.per_degree},
                {"ratio", integ.ratio},
                {"divergence_trend", integ.divergence_trend}}},
              {"final_state", io::to_json(iso_flow::riccati_evolve(s0, tf))}};
  out << report.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out) {
  if (cfg.command == "simulate-1d") return simulate_1d(cfg, out);
  if (cfg.command == "spectral-solve") return spectral_solve(cfg, out);
  if (cfg.command == "simulate-pseudo") return simulate_pseudo(cfg, out);
  if (cfg.command == "transform-eval") return transform_eval(cfg, out);
  if (cfg.command == "nevanlinna-check") return nevanlinna_check(cfg, out);
  if (cfg.command == "iso-flow") return iso_flow_cmd(cfg, out);
  if (cfg.command == "verify-all") {
    return verify_all(cfg.input.empty() ? TODA_KDQ_FIXTURE_DIR : cfg.input, out);
  }
  throw InvalidArgument("unknown command " + cfg.command);
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Toda lattice and Klein-Dirac quadric moment tools"};
  app.require_subcommand(1);
  RunConfig cfg;
  for (const char* name : kCommands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--input", cfg.input, "input JSON (verify-all: fixture directory)");
    sub->add_option("--output", cfg.output, "output file (default: stdout)");
    sub->add_option("--t-final", cfg.t_final, "final time");
    sub->add_option("--dt", cfg.dt, "time step or sampling interval");
    sub->add_option("--kmax", cfg.k_max, "harmonic degree cutoff");
    sub->add_option("--quad-degree", cfg.quad_degree, "sphere quadrature degree");
    sub->add_option("--tol", cfg.tol, "tolerance override");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (cfg.output.empty()) return run(cfg, out);
    std::ostringstream buf;
    const int code = run(cfg, buf);
    std::ofstream f(cfg.output, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write output file " + cfg.output);
    f << buf.str();
    return code;
  } catch (const InvalidArgument& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const json::exception& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace toda_kdq::cli
