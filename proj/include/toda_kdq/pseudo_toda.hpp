#pragma once

#include <map>
#include <string>
#include <vector>

#include "toda_kdq/kdq.hpp"
#include "toda_kdq/moment.hpp"
#include "toda_kdq/sphere.hpp"

namespace toda_kdq::pseudo_toda {

using sphere::HarmonicIndex;
using sphere::SphereDirection;

// One (k, ell) component: radial eigenvalues lambda_j >= 0 (fixed in time)
// and tilde masses r~_j^2 = r_j^2 lambda_j^k, which sum to 1.
struct Component {
  std::vector<double> lambdas;
  std::vector<double> masses_tilde;

  int size() const { return static_cast<int>(lambdas.size()); }
};

class PseudoTodaState {
 public:
  using ComponentMap = std::map<HarmonicIndex, Component>;

  // Throws InvalidArgument unless every component has matching lengths,
  // lambda >= 0, masses > 0 and sum r~^2 = 1 within 1e-12.
  PseudoTodaState(int n, ComponentMap components, double time = 0.0);

  int n() const { return n_; }
  double time() const { return time_; }
  const ComponentMap& components() const { return components_; }
  const Component& component(HarmonicIndex idx) const;
  // Common atom count, or -1 when the components differ.
  int common_size() const;

 private:
  struct Unchecked {};
  PseudoTodaState(Unchecked, int n, ComponentMap components, double time);
  friend PseudoTodaState evolve(const PseudoTodaState&, double);

  int n_;
  ComponentMap components_;
  double time_;
};

struct TildeData {
  std::vector<double> lambda_tilde;  // lambda^2
  std::vector<double> masses_tilde;  // r^2 lambda^k
  std::vector<std::string> warnings;
};

// r~^2 = r^2 lambda^k, lambda~ = lambda^2.  A lambda = 0 atom with k > 0
// loses its mass; that is reported in `warnings`.
TildeData tilde_transform(int k, const std::vector<double>& lambdas,
                          const std::vector<double>& masses);

// r^2 = r~^2 / lambda^k; requires lambda > 0 when k > 0.
std::vector<double> inverse_tilde_masses(int k, const std::vector<double>& lambdas,
                                         const std::vector<double>& masses_tilde);

// r~_j^2(t) proportional to r~_j^2(0) e^{-2 lambda~_j t}, renormalized.
PseudoTodaState evolve(const PseudoTodaState& s, double t);

// sum_j r~^2 delta(rho - lambda~_j) on the half-line.
moment::DiscreteMeasure component_measure(const PseudoTodaState& s, HarmonicIndex idx);

moment::JacobiMatrix component_jacobi(const PseudoTodaState& s, HarmonicIndex idx);

// H_{k,ell} = 2 sum lambda~^2.
double component_hamiltonian(const PseudoTodaState& s, HarmonicIndex idx);
// 4 (sum a~^2 + 1/2 sum b~^2) from the component Jacobi matrix.
double component_hamiltonian_jacobi(const PseudoTodaState& s, HarmonicIndex idx);
// Sum over components in ascending (k, ell).
double total_hamiltonian(const PseudoTodaState& s);

// max over components of |sum r~^2 - 1|.
double normalization_invariant(const PseudoTodaState& s);

// Central-difference derivative of (a~, b~) at time t versus the Toda
// right-hand side; returns the max residual.
double component_ode_residual(const PseudoTodaState& s, HarmonicIndex idx, double t,
                              double dt);

struct SurfaceValue {
  double value = 0.0;
  // Cumulative sums after each degree k = 0..k_max present in the state.
  std::vector<double> partial_sums;
};

struct SurfacePair {
  SurfaceValue first;
  SurfaceValue second;
};

// A_j(theta) = sum a~_{k,ell;j} Y_{k,ell}(theta) (zero for j = N) and
// B_j(theta) = sum b~_{k,ell;j} Y_{k,ell}(theta), j = 1..N.
SurfacePair flaschka_surfaces(const PseudoTodaState& s, int j, const SphereDirection& theta);

// X_j(theta) = 4^{j-1} sum (prod_{m<j} a~_{k,ell;m}^2) e^{-x_{k,ell;1}} Y_{k,ell}(theta)
// with the gauge e^{-x_{k,ell;1}} = max(k,1)^{-(n-2)}, and
// Y_j(theta) = sum (-2 b~_{k,ell;j}) Y_{k,ell}(theta).
SurfacePair physical_surfaces(const PseudoTodaState& s, int j, const SphereDirection& theta);

// Radial components with atoms lambda and weights r^2 = r~^2 / lambda^k, so
// that int r^k dmu_{k,ell} = sum r~^2.  Needs lambda > 0 wherever k > 0.
kdq::PseudoPositiveMeasure associated_measure(const PseudoTodaState& s);

// Gauge value x_{k,ell;1} = (n-2) ln max(k,1).
double surface_gauge(int n, int k);

}  // namespace toda_kdq::pseudo_toda
