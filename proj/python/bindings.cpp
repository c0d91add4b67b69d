#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "toda_kdq/errors.hpp"
#include "toda_kdq/io.hpp"
#include "toda_kdq/iso_flow.hpp"
#include "toda_kdq/kdq.hpp"
#include "toda_kdq/moment.hpp"
#include "toda_kdq/pseudo_toda.hpp"
#include "toda_kdq/sphere.hpp"
#include "toda_kdq/toda.hpp"

namespace py = pybind11;
using namespace toda_kdq;
using sphere::HarmonicIndex;
using sphere::SphereDirection;
using cplx = std::complex<double>;

// Harmonic indices cross the boundary as (k, ell) tuples.
namespace pybind11::detail {
template <>
struct type_caster<HarmonicIndex> {
  PYBIND11_TYPE_CASTER(HarmonicIndex, const_name("tuple[int, int]"));

  bool load(handle src, bool) {
    if (!py::isinstance<py::sequence>(src)) return false;
    const auto seq = py::reinterpret_borrow<py::sequence>(src);
    if (seq.size() != 2) return false;
    value.k = seq[0].cast<int>();
    value.ell = seq[1].cast<int>();
    return true;
  }

  static handle cast(const HarmonicIndex& idx, return_value_policy, handle) {
    return py::make_tuple(idx.k, idx.ell).release();
  }
};
}  // namespace pybind11::detail

namespace {

using Pair = std::pair<std::vector<double>, std::vector<double>>;

SphereDirection direction(const std::vector<double>& theta) {
  return SphereDirection::normalized(static_cast<int>(theta.size()), theta);
}

std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

kdq::PseudoPositiveMeasure make_measure(int n, const std::map<HarmonicIndex, Pair>& comps,
                                        int k_max) {
  kdq::PseudoPositiveMeasure::ComponentMap m;
  int top = 0;
  for (const auto& [idx, aw] : comps) {
    m.emplace(idx, moment::DiscreteMeasure(aw.first, aw.second, true));
    top = std::max(top, idx.k);
  }
  return {n, k_max < 0 ? top : k_max, std::move(m)};
}

std::map<HarmonicIndex, Pair> measure_components(const kdq::PseudoPositiveMeasure& mu) {
  std::map<HarmonicIndex, Pair> out;
  for (const auto& [idx, c] : mu.components()) out[idx] = {vec(c.atoms()), vec(c.weights())};
  return out;
}

py::dict series(const kdq::SeriesValue& v) {
  py::dict d;
  d["value"] = v.value;
  d["tail_bound"] = v.tail_bound;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Toda flows, spectral measures and kernels on the complex Kepler quadric";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto invalid = py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  auto numeric = py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  (void)base;
  (void)invalid;
  (void)numeric;

  // sphere
  m.def("dim_harmonics", &sphere::dim_harmonics, py::arg("n"), py::arg("k"));
  m.def("harmonic_indices", &sphere::harmonic_indices, py::arg("n"), py::arg("k_max"));
  m.def(
      "eval_harmonic",
      [](HarmonicIndex idx, const std::vector<double>& theta) {
        return sphere::eval_harmonic(static_cast<int>(theta.size()), idx, direction(theta));
      },
      py::arg("index"), py::arg("theta"));
  m.def(
      "sphere_rule",
      [](int n, int degree) {
        const auto rule = sphere::sphere_rule(n, degree);
        std::vector<std::vector<double>> nodes;
        for (const auto& p : rule.nodes) nodes.push_back(vec(p.coords()));
        return py::make_tuple(nodes, rule.weights);
      },
      py::arg("n"), py::arg("degree"));

  // one-dimensional moment problem
  m.def(
      "recurrence_coefficients",
      [](const std::vector<double>& atoms, const std::vector<double>& weights, int N) {
        const auto rc = moment::recurrence_coefficients({atoms, weights}, N);
        return py::make_tuple(rc.alpha, rc.beta);
      },
      py::arg("atoms"), py::arg("weights"), py::arg("N"));
  m.def(
      "jacobi_from_measure",
      [](const std::vector<double>& atoms, const std::vector<double>& weights) {
        const auto L = moment::jacobi_from_measure({atoms, weights});
        return py::make_tuple(vec(L.diag()), vec(L.offdiag()));
      },
      py::arg("atoms"), py::arg("weights"));
  m.def(
      "spectral_data",
      [](const std::vector<double>& diag, const std::vector<double>& offdiag) {
        const auto sd = moment::spectral_data_from_jacobi({diag, offdiag});
        return py::make_tuple(sd.eigenvalues, sd.masses);
      },
      py::arg("diag"), py::arg("offdiag"));
  m.def(
      "stieltjes_transform",
      [](const std::vector<double>& atoms, const std::vector<double>& weights, cplx z) {
        return moment::stieltjes_transform({atoms, weights}, z);
      },
      py::arg("atoms"), py::arg("weights"), py::arg("z"));
  m.def(
      "continued_fraction",
      [](const std::vector<double>& diag, const std::vector<double>& offdiag, cplx z) {
        return moment::continued_fraction_eval({diag, offdiag}, z);
      },
      py::arg("diag"), py::arg("offdiag"), py::arg("z"));
  m.def(
      "nevanlinna_limit_check",
      [](const std::vector<double>& atoms, const std::vector<double>& weights, int N,
         const std::vector<double>& ys) {
        return moment::nevanlinna_limit_check({atoms, weights}, N, ys);
      },
      py::arg("atoms"), py::arg("weights"), py::arg("N"), py::arg("ys"));

  // Toda lattice in Flaschka variables
  py::class_<toda::FlaschkaState>(m, "FlaschkaState")
      .def(py::init([](std::vector<double> a, std::vector<double> b) {
             toda::FlaschkaState s{std::move(a), std::move(b)};
             toda::validate(s);
             return s;
           }),
           py::arg("a"), py::arg("b"))
      .def_readonly("a", &toda::FlaschkaState::a)
      .def_readonly("b", &toda::FlaschkaState::b)
      .def_property_readonly("size", &toda::FlaschkaState::size)
      .def("__repr__", [](const toda::FlaschkaState& s) {
        return "FlaschkaState(N=" + std::to_string(s.size()) + ")";
      });
  m.def(
      "flaschka_map",
      [](std::vector<double> x, std::vector<double> y) {
        return toda::flaschka_map({std::move(x), std::move(y)});
      },
      py::arg("x"), py::arg("y"));
  m.def("hamiltonian", &toda::hamiltonian_ab, py::arg("state"));
  m.def("toda_rhs", &toda::toda_rhs, py::arg("state"));
  m.def(
      "integrate_toda",
      [](const toda::FlaschkaState& s0, double t_final, double dt) {
        auto tr = toda::integrate_toda(s0, t_final, dt);
        return py::make_tuple(std::move(tr.times), std::move(tr.states));
      },
      py::arg("state"), py::arg("t_final"), py::arg("dt"));
  m.def("spectral_solve", &toda::spectral_solve, py::arg("state"), py::arg("t"));
  m.def(
      "lax_eigenvalues",
      [](const toda::FlaschkaState& s) {
        return moment::spectral_data_from_jacobi(toda::lax_matrix(s)).eigenvalues;
      },
      py::arg("state"));

  // kernels on the quadric
  m.def(
      "hua_kernel",
      [](cplx zeta, const std::vector<double>& theta, const std::vector<double>& x, int k_max) {
        return series(kdq::hua_kernel(zeta, direction(theta), x, k_max));
      },
      py::arg("zeta"), py::arg("theta"), py::arg("x"), py::arg("k_max"));
  m.def(
      "hua_kernel_closed",
      [](cplx zeta, const std::vector<double>& theta, const std::vector<double>& x) {
        return kdq::hua_kernel_closed(zeta, direction(theta), x);
      },
      py::arg("zeta"), py::arg("theta"), py::arg("x"));

  py::class_<kdq::PseudoPositiveMeasure>(m, "PseudoPositiveMeasure")
      .def(py::init(&make_measure), py::arg("n"), py::arg("components"), py::arg("k_max") = -1)
      .def_static("from_json", [](const std::string& text) {
        return io::pseudo_positive_measure_from_json(io::json::parse(text));
      })
      .def("to_json", [](const kdq::PseudoPositiveMeasure& mu) { return io::to_json(mu).dump(); })
      .def_property_readonly("n", &kdq::PseudoPositiveMeasure::n)
      .def_property_readonly("k_max", &kdq::PseudoPositiveMeasure::k_max)
      .def_property_readonly("components", &measure_components)
      .def_property_readonly("max_radius", &kdq::PseudoPositiveMeasure::max_radius);
  m.def("multi_moment", &kdq::multi_moment, py::arg("measure"), py::arg("index"), py::arg("j"));
  m.def(
      "growth_condition",
      [](const kdq::PseudoPositiveMeasure& mu) {
        const auto g = kdq::growth_condition_check(mu);
        return py::make_tuple(g.ok, g.C, g.D);
      },
      py::arg("measure"));
  m.def(
      "markov_stieltjes",
      [](const kdq::PseudoPositiveMeasure& mu, cplx zeta, const std::vector<double>& theta) {
        return series(kdq::markov_stieltjes(mu, kdq::KDQPoint(zeta, direction(theta))));
      },
      py::arg("measure"), py::arg("zeta"), py::arg("theta"));
  m.def(
      "multi_nevanlinna_check",
      [](const kdq::PseudoPositiveMeasure& mu, HarmonicIndex idx, int N,
         const std::vector<cplx>& zetas, int quad_degree) {
        return kdq::multi_nevanlinna_check(mu, idx, N, zetas, quad_degree);
      },
      py::arg("measure"), py::arg("index"), py::arg("N"), py::arg("zetas"),
      py::arg("quad_degree") = -1);

  // pseudo-positive Toda flow
  py::class_<pseudo_toda::PseudoTodaState>(m, "PseudoTodaState")
      .def(py::init([](int n, const std::map<HarmonicIndex, Pair>& comps, double t) {
             pseudo_toda::PseudoTodaState::ComponentMap cm;
             for (const auto& [idx, lm] : comps) cm.emplace(idx, pseudo_toda::Component{lm.first, lm.second});
             return pseudo_toda::PseudoTodaState(n, std::move(cm), t);
           }),
           py::arg("n"), py::arg("components"), py::arg("t") = 0.0)
      .def_static("from_json", [](const std::string& text) {
        return io::pseudo_toda_state_from_json(io::json::parse(text));
      })
      .def("to_json", [](const pseudo_toda::PseudoTodaState& s) { return io::to_json(s).dump(); })
      .def_property_readonly("n", &pseudo_toda::PseudoTodaState::n)
      .def_property_readonly("time", &pseudo_toda::PseudoTodaState::time)
      .def_property_readonly("components", [](const pseudo_toda::PseudoTodaState& s) {
        std::map<HarmonicIndex, Pair> out;
        for (const auto& [idx, c] : s.components()) out[idx] = {c.lambdas, c.masses_tilde};
        return out;
      });
  m.def("evolve", &pseudo_toda::evolve, py::arg("state"), py::arg("t"));
  m.def("component_hamiltonian", &pseudo_toda::component_hamiltonian, py::arg("state"),
        py::arg("index"));
  m.def("total_hamiltonian", &pseudo_toda::total_hamiltonian, py::arg("state"));
  m.def(
      "component_flaschka",
      [](const pseudo_toda::PseudoTodaState& s, HarmonicIndex idx) {
        const auto L = pseudo_toda::component_jacobi(s, idx);
        return toda::flaschka_from_jacobi(L);
      },
      py::arg("state"), py::arg("index"));
  m.def("associated_measure", &pseudo_toda::associated_measure, py::arg("state"));

  // isospectral Riccati flow
  py::class_<iso_flow::IsoFlowState>(m, "IsoFlowState")
      .def(py::init([](int n, const std::map<HarmonicIndex, Pair>& comps, double t) {
             iso_flow::IsoFlowState::ComponentMap cm;
             for (const auto& [idx, lm] : comps) cm.emplace(idx, iso_flow::Component{lm.first, lm.second});
             return iso_flow::IsoFlowState(n, std::move(cm), t);
           }),
           py::arg("n"), py::arg("components"), py::arg("t") = 0.0)
      .def_static("from_measure", &iso_flow::IsoFlowState::from_measure)
      .def_property_readonly("time", &iso_flow::IsoFlowState::time)
      .def_property_readonly("components", [](const iso_flow::IsoFlowState& s) {
        std::map<HarmonicIndex, Pair> out;
        for (const auto& [idx, c] : s.components()) out[idx] = {c.lambdas, c.masses};
        return out;
      });
  m.def("blow_up_time", &iso_flow::blow_up_time, py::arg("state"));
  m.def("riccati_evolve", &iso_flow::riccati_evolve, py::arg("state"), py::arg("t"));
  m.def("integrability_functional", &iso_flow::integrability_functional, py::arg("state"),
        py::arg("index"));
  m.def(
      "monotonicity_check",
      [](const iso_flow::IsoFlowState& s, const std::vector<double>& grid) {
        const auto r = iso_flow::monotonicity_check(s, grid);
        return py::make_tuple(r.monotone, r.max_increase, r.max_derivative_error);
      },
      py::arg("state"), py::arg("t_grid"));
}
