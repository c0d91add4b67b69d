#pragma once

#include <map>
#include <vector>

#include "toda_kdq/kdq.hpp"
#include "toda_kdq/sphere.hpp"

namespace toda_kdq::iso_flow {

using sphere::HarmonicIndex;

// Atoms lambda_j >= 0 (fixed) carrying masses r_j^2 >= 0.
struct Component {
  std::vector<double> lambdas;
  std::vector<double> masses;

  int size() const { return static_cast<int>(lambdas.size()); }
};

class IsoFlowState {
 public:
  using ComponentMap = std::map<HarmonicIndex, Component>;

  // Throws InvalidArgument on length mismatch, negative or non-finite
  // entries, or lambda = 0 carrying mass in a component with k > 0.
  IsoFlowState(int n, ComponentMap components, double time = 0.0);

  // Components of a pseudo-positive measure: atoms become lambdas, weights masses.
  static IsoFlowState from_measure(const kdq::PseudoPositiveMeasure& mu);

  int n() const { return n_; }
  double time() const { return time_; }
  const ComponentMap& components() const { return components_; }
  const Component& component(HarmonicIndex idx) const;

 private:
  int n_;
  ComponentMap components_;
  double time_;
};

// Earliest t < 0 at which some r(t) = r0/(1 + lambda r0 t) blows up, or
// -infinity when no atom has lambda r0 > 0.
double blow_up_time(const IsoFlowState& s);

// r(t) = r0 / (1 + lambda r0 t) for every atom (solution of r' = -lambda r^2).
// Throws NumericError when t reaches the backward blow-up time.
IsoFlowState riccati_evolve(const IsoFlowState& s, double t);

// S_{k,ell} = sum r^2 / lambda^k.  Throws InvalidArgument at lambda = 0 with
// positive mass and k > 0.
double integrability_functional(const IsoFlowState& s, HarmonicIndex idx);

// dS/dt = -2 sum r^3 / lambda^{k-1}.
double integrability_derivative(const IsoFlowState& s, HarmonicIndex idx);

struct IntegrabilityReport {
  double total = 0.0;
  std::vector<double> per_degree;  // sum over ell of S_{k,ell}, k = 0..max degree
  double ratio = 0.0;              // observed per-degree decay ratio (0 if undetermined)
  bool divergence_trend = false;   // ratio >= 1
  bool passed = true;
};

IntegrabilityReport integrability_check(const IsoFlowState& s);

struct MonotonicityReport {
  bool monotone = true;
  double max_increase = 0.0;          // largest S(t_{i+1}) - S(t_i) observed
  double max_derivative_error = 0.0;  // identity vs central difference, over grid and components
  double step = 0.0;                  // central-difference half-width
};

MonotonicityReport monotonicity_check(const IsoFlowState& s0, const std::vector<double>& t_grid,
                                      double step = 1e-5);

}  // namespace toda_kdq::iso_flow
