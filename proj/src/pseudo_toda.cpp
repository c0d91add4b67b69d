#include "toda_kdq/pseudo_toda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "toda_kdq/errors.hpp"
#include "toda_kdq/parallel.hpp"
#include "toda_kdq/toda.hpp"

namespace toda_kdq::pseudo_toda {

namespace {

constexpr double kNormTolerance = 1e-12;

std::string index_name(HarmonicIndex idx) {
  return "(" + std::to_string(idx.k) + "," + std::to_string(idx.ell) + ")";
}

// Appends one partial sum per degree as the ascending (k, ell) walk crosses
// degree boundaries.
void close_degree(SurfaceValue& sv, int& current_k, int next_k) {
  while (current_k < next_k) {
    if (current_k >= 0) sv.partial_sums.push_back(sv.value);
    ++current_k;
  }
}

}  // namespace

PseudoTodaState::PseudoTodaState(int n, ComponentMap components, double time)
    : n_(n), components_(std::move(components)), time_(time) {
  if (n != 2 && n != 3) throw InvalidArgument("dimension must be 2 or 3");
  if (!std::isfinite(time)) throw InvalidArgument("time must be finite");
  for (const auto& [idx, c] : components_) {
    sphere::validate_index(n, idx);
    const std::string name = index_name(idx);
    if (c.lambdas.empty() || c.lambdas.size() != c.masses_tilde.size()) {
      throw InvalidArgument("component " + name + " needs matching nonempty lambdas and masses");
    }
    double sum = 0.0;
    for (int j = 0; j < c.size(); ++j) {
      const double l = c.lambdas[static_cast<std::size_t>(j)];
      const double m = c.masses_tilde[static_cast<std::size_t>(j)];
      if (!std::isfinite(l) || l < 0.0) {
        throw InvalidArgument("component " + name + " has a negative or non-finite lambda");
      }
      if (!std::isfinite(m) || m <= 0.0) {
        throw InvalidArgument("component " + name + " has a nonpositive tilde mass");
      }
      sum += m;
    }
    if (std::abs(sum - 1.0) > kNormTolerance) {
      throw InvalidArgument("component " + name + " tilde masses do not sum to 1");
    }
  }
}

PseudoTodaState::PseudoTodaState(Unchecked, int n, ComponentMap components, double time)
    : n_(n), components_(std::move(components)), time_(time) {}

const Component& PseudoTodaState::component(HarmonicIndex idx) const {
  auto it = components_.find(idx);
  if (it == components_.end()) {
    throw InvalidArgument("state has no component " + index_name(idx));
  }
  return it->second;
}

int PseudoTodaState::common_size() const {
  int N = -1;
  for (const auto& [idx, c] : components_) {
    if (N < 0) N = c.size();
    else if (N != c.size()) return -1;
  }
  return N;
}

TildeData tilde_transform(int k, const std::vector<double>& lambdas,
                          const std::vector<double>& masses) {
  if (k < 0) throw InvalidArgument("degree must be nonnegative");
  if (lambdas.size() != masses.size()) throw InvalidArgument("lambdas and masses differ in length");
  TildeData out;
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    const double l = lambdas[j];
    const double m = masses[j];
    if (!(l >= 0.0) || !(m > 0.0)) {
      throw InvalidArgument("tilde transform needs lambda >= 0 and r^2 > 0");
    }
    out.lambda_tilde.push_back(l * l);
    out.masses_tilde.push_back(m * std::pow(l, k));
    if (k > 0 && l == 0.0) {
      out.warnings.push_back("atom " + std::to_string(j) + " at lambda = 0 loses its mass for k = " +
                             std::to_string(k));
    }
  }
  return out;
}

std::vector<double> inverse_tilde_masses(int k, const std::vector<double>& lambdas,
                                         const std::vector<double>& masses_tilde) {
  if (lambdas.size() != masses_tilde.size()) {
    throw InvalidArgument("lambdas and masses differ in length");
  }
  std::vector<double> out;
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    if (k > 0 && !(lambdas[j] > 0.0)) {
      throw InvalidArgument("inverse tilde transform needs lambda > 0 for k > 0");
    }
    out.push_back(masses_tilde[j] / std::pow(lambdas[j], k));
  }
  return out;
}

PseudoTodaState evolve(const PseudoTodaState& s, double t) {
  if (!std::isfinite(t)) throw InvalidArgument("time must be finite");
  std::vector<std::pair<HarmonicIndex, Component>> items(s.components().begin(),
                                                         s.components().end());
  parallel_for(items.size(), [&](std::size_t i) {
    Component& c = items[i].second;
    std::vector<double> e(c.lambdas.size());
    double shift = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < e.size(); ++j) {
      const double lt = c.lambdas[j] * c.lambdas[j];
      e[j] = std::log(c.masses_tilde[j]) - 2.0 * lt * t;
      shift = std::max(shift, e[j]);
    }
    double sum = 0.0;
    for (double& v : e) {
      v = std::exp(v - shift);
      sum += v;
    }
    for (std::size_t j = 0; j < e.size(); ++j) c.masses_tilde[j] = e[j] / sum;
  });
  PseudoTodaState::ComponentMap out(items.begin(), items.end());
  return PseudoTodaState(PseudoTodaState::Unchecked{}, s.n(), std::move(out), s.time() + t);
}

moment::DiscreteMeasure component_measure(const PseudoTodaState& s, HarmonicIndex idx) {
  const Component& c = s.component(idx);
  std::vector<double> rho;
  for (double l : c.lambdas) rho.push_back(l * l);
  return moment::DiscreteMeasure(std::move(rho), c.masses_tilde, true);
}

moment::JacobiMatrix component_jacobi(const PseudoTodaState& s, HarmonicIndex idx) {
  return moment::jacobi_from_measure(component_measure(s, idx));
}

double component_hamiltonian(const PseudoTodaState& s, HarmonicIndex idx) {
  double h = 0.0;
  for (double l : s.component(idx).lambdas) h += std::pow(l, 4);
  return 2.0 * h;
}

double component_hamiltonian_jacobi(const PseudoTodaState& s, HarmonicIndex idx) {
  return 2.0 * component_jacobi(s, idx).trace_of_square();
}

double total_hamiltonian(const PseudoTodaState& s) {
  double h = 0.0;
  for (const auto& [idx, c] : s.components()) h += component_hamiltonian(s, idx);
  return h;
}

double normalization_invariant(const PseudoTodaState& s) {
  double dev = 0.0;
  for (const auto& [idx, c] : s.components()) {
    double sum = 0.0;
    for (double m : c.masses_tilde) sum += m;
    dev = std::max(dev, std::abs(sum - 1.0));
  }
  return dev;
}

double component_ode_residual(const PseudoTodaState& s, HarmonicIndex idx, double t, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (s.component(idx).size() < 2) throw InvalidArgument("component needs at least two atoms");
  const auto at = [&](double tt) {
    return toda::flaschka_from_jacobi(component_jacobi(evolve(s, tt), idx));
  };
  const auto mid = at(t);
  const auto plus = at(t + dt);
  const auto minus = at(t - dt);
  if (plus.size() != mid.size() || minus.size() != mid.size()) {
    throw NumericError("component changed size between samples");
  }
  const auto rhs = toda::toda_rhs(mid);
  double res = 0.0;
  for (std::size_t j = 0; j < mid.a.size(); ++j) {
    res = std::max(res, std::abs((plus.a[j] - minus.a[j]) / (2.0 * dt) - rhs.a[j]));
  }
  for (std::size_t j = 0; j < mid.b.size(); ++j) {
    res = std::max(res, std::abs((plus.b[j] - minus.b[j]) / (2.0 * dt) - rhs.b[j]));
  }
  return res;
}

SurfacePair flaschka_surfaces(const PseudoTodaState& s, int j, const SphereDirection& theta) {
  if (theta.n() != s.n()) throw InvalidArgument("direction dimension mismatch");
  const int N = s.common_size();
  if (s.components().empty()) return {};
  if (N < 0) throw InvalidArgument("Flaschka surfaces need a common atom count");
  if (j < 1 || j > N) throw InvalidArgument("site index out of range");
  SurfacePair out;
  int ka = -1;
  int kb = -1;
  for (const auto& [idx, c] : s.components()) {
    const auto L = component_jacobi(s, idx);
    if (L.size() != N) throw NumericError("component " + index_name(idx) + " degenerated");
    const double y = sphere::eval_harmonic(s.n(), idx, theta);
    close_degree(out.first, ka, idx.k);
    close_degree(out.second, kb, idx.k);
    if (j < N) out.first.value += L.offdiag()[static_cast<std::size_t>(j - 1)] * y;
    out.second.value += L.diag()[static_cast<std::size_t>(j - 1)] * y;
  }
  out.first.partial_sums.push_back(out.first.value);
  out.second.partial_sums.push_back(out.second.value);
  return out;
}

kdq::PseudoPositiveMeasure associated_measure(const PseudoTodaState& s) {
  kdq::PseudoPositiveMeasure::ComponentMap comps;
  int kmax = 0;
  for (const auto& [idx, c] : s.components()) {
    kmax = std::max(kmax, idx.k);
    comps.emplace(idx, moment::DiscreteMeasure(
                           c.lambdas, inverse_tilde_masses(idx.k, c.lambdas, c.masses_tilde), true));
  }
  return kdq::PseudoPositiveMeasure(s.n(), kmax, std::move(comps));
}

double surface_gauge(int n, int k) {
  return (n - 2) * std::log(static_cast<double>(std::max(k, 1)));
}

SurfacePair physical_surfaces(const PseudoTodaState& s, int j, const SphereDirection& theta) {
  if (theta.n() != s.n()) throw InvalidArgument("direction dimension mismatch");
  if (j < 1) throw InvalidArgument("site index out of range");
  SurfacePair out;
  int kx = -1;
  int ky = -1;
  for (const auto& [idx, c] : s.components()) {
    const auto L = component_jacobi(s, idx);
    if (L.size() < j) {
      throw InvalidArgument("component " + index_name(idx) + " has fewer than j sites");
    }
    const double y = sphere::eval_harmonic(s.n(), idx, theta);
    double prod = std::exp(-surface_gauge(s.n(), idx.k));
    for (int m = 0; m < j - 1; ++m) {
      const double a = L.offdiag()[static_cast<std::size_t>(m)];
      prod *= 4.0 * a * a;
    }
    close_degree(out.first, kx, idx.k);
    close_degree(out.second, ky, idx.k);
    out.first.value += prod * y;
    out.second.value += -2.0 * L.diag()[static_cast<std::size_t>(j - 1)] * y;
  }
  out.first.partial_sums.push_back(out.first.value);
  out.second.partial_sums.push_back(out.second.value);
  return out;
}

}  // namespace toda_kdq::pseudo_toda
