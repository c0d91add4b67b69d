#include "toda_kdq/iso_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "toda_kdq/errors.hpp"

namespace toda_kdq::iso_flow {

IsoFlowState::IsoFlowState(int n, ComponentMap components, double time)
    : n_(n), components_(std::move(components)), time_(time) {
  if (n != 2 && n != 3) throw InvalidArgument("dimension must be 2 or 3");
  if (!std::isfinite(time)) throw InvalidArgument("time must be finite");
  for (const auto& [idx, c] : components_) {
    sphere::validate_index(n, idx);
    if (c.lambdas.size() != c.masses.size()) {
      throw InvalidArgument("lambdas and masses differ in length");
    }
    for (int j = 0; j < c.size(); ++j) {
      const double l = c.lambdas[static_cast<std::size_t>(j)];
      const double m = c.masses[static_cast<std::size_t>(j)];
      if (!std::isfinite(l) || !std::isfinite(m) || l < 0.0 || m < 0.0) {
        throw InvalidArgument("lambdas and masses must be finite and nonnegative");
      }
      if (idx.k > 0 && l == 0.0 && m > 0.0) {
        throw InvalidArgument("lambda = 0 carries mass in a component with k > 0");
      }
    }
  }
}

IsoFlowState IsoFlowState::from_measure(const kdq::PseudoPositiveMeasure& mu) {
  ComponentMap comps;
  for (const auto& [idx, m] : mu.components()) {
    comps[idx] = {std::vector<double>(m.atoms().begin(), m.atoms().end()),
                  std::vector<double>(m.weights().begin(), m.weights().end())};
  }
  return IsoFlowState(mu.n(), std::move(comps));
}

const Component& IsoFlowState::component(HarmonicIndex idx) const {
  auto it = components_.find(idx);
  if (it == components_.end()) throw InvalidArgument("state has no such component");
  return it->second;
}

double blow_up_time(const IsoFlowState& s) {
  double tb = -std::numeric_limits<double>::infinity();
  for (const auto& [idx, c] : s.components()) {
    for (int j = 0; j < c.size(); ++j) {
      const double lr = c.lambdas[static_cast<std::size_t>(j)] *
                        std::sqrt(c.masses[static_cast<std::size_t>(j)]);
      if (lr > 0.0) tb = std::max(tb, -1.0 / lr);
    }
  }
  return tb;
}

IsoFlowState riccati_evolve(const IsoFlowState& s, double t) {
  if (!std::isfinite(t)) throw InvalidArgument("time must be finite");
  if (t <= blow_up_time(s)) {
    throw NumericError("backward evolution reaches the blow-up time " +
                       std::to_string(blow_up_time(s)));
  }
  IsoFlowState::ComponentMap out = s.components();
  for (auto& [idx, c] : out) {
    for (int j = 0; j < c.size(); ++j) {
      auto& m = c.masses[static_cast<std::size_t>(j)];
      const double q = 1.0 + c.lambdas[static_cast<std::size_t>(j)] * std::sqrt(m) * t;
      m /= q * q;
    }
  }
  return IsoFlowState(s.n(), std::move(out), s.time() + t);
}

double integrability_functional(const IsoFlowState& s, HarmonicIndex idx) {
  const Component& c = s.component(idx);
  double sum = 0.0;
  for (int j = 0; j < c.size(); ++j) {
    const double l = c.lambdas[static_cast<std::size_t>(j)];
    const double m = c.masses[static_cast<std::size_t>(j)];
    if (m == 0.0) continue;
    if (idx.k > 0 && l == 0.0) throw InvalidArgument("division by lambda = 0");
    sum += m / std::pow(l, idx.k);
  }
  return sum;
}

double integrability_derivative(const IsoFlowState& s, HarmonicIndex idx) {
  const Component& c = s.component(idx);
  double sum = 0.0;
  for (int j = 0; j < c.size(); ++j) {
    const double l = c.lambdas[static_cast<std::size_t>(j)];
    const double m = c.masses[static_cast<std::size_t>(j)];
    if (m == 0.0) continue;
    sum += std::pow(m, 1.5) * std::pow(l, 1 - idx.k);
  }
  return -2.0 * sum;
}

IntegrabilityReport integrability_check(const IsoFlowState& s) {
  IntegrabilityReport rep;
  for (const auto& [idx, c] : s.components()) {
    if (static_cast<int>(rep.per_degree.size()) <= idx.k) {
      rep.per_degree.resize(static_cast<std::size_t>(idx.k + 1), 0.0);
    }
    const double v = integrability_functional(s, idx);
    rep.per_degree[static_cast<std::size_t>(idx.k)] += v;
    rep.total += v;
  }
  // Ratio of the last two nonzero per-degree terms, normalized per degree.
  int last = -1;
  int prev = -1;
  for (int k = static_cast<int>(rep.per_degree.size()) - 1; k >= 0 && prev < 0; --k) {
    if (rep.per_degree[static_cast<std::size_t>(k)] > 0.0) {
      if (last < 0) last = k;
      else prev = k;
    }
  }
  if (prev >= 0) {
    rep.ratio = std::pow(rep.per_degree[static_cast<std::size_t>(last)] /
                             rep.per_degree[static_cast<std::size_t>(prev)],
                         1.0 / (last - prev));
    rep.divergence_trend = rep.ratio >= 1.0;
  }
  rep.passed = std::isfinite(rep.total);
  return rep;
}

MonotonicityReport monotonicity_check(const IsoFlowState& s0, const std::vector<double>& t_grid,
                                      double step) {
  if (!(step > 0.0)) throw InvalidArgument("step must be positive");
  MonotonicityReport rep;
  rep.step = step;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] < 0.0 || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw InvalidArgument("time grid must be nonnegative and increasing");
    }
  }
  for (const auto& [idx, c] : s0.components()) {
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (double t : t_grid) {
      const auto st = riccati_evolve(s0, t);
      const double S = integrability_functional(st, idx);
      if (!std::isnan(prev) && S > prev) {
        rep.monotone = false;
        rep.max_increase = std::max(rep.max_increase, S - prev);
      }
      prev = S;
      const double sp = integrability_functional(riccati_evolve(s0, t + step), idx);
      const double sm = integrability_functional(riccati_evolve(s0, t - step), idx);
      const double fd = (sp - sm) / (2.0 * step);
      rep.max_derivative_error =
          std::max(rep.max_derivative_error, std::abs(fd - integrability_derivative(st, idx)));
    }
  }
  return rep;
}

}  // namespace toda_kdq::iso_flow
