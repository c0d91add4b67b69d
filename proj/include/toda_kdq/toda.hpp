#pragma once

#include <vector>

#include <Eigen/Dense>

#include "toda_kdq/moment.hpp"

namespace toda_kdq::toda {

// Displacements x_1..x_N and momenta y_1..y_N.  Meaningful only up to the
// shift x -> x + c (a configuration).
struct PhysicalState {
  std::vector<double> x;
  std::vector<double> y;
};

// Flaschka variables a_1..a_{N-1} (> 0) and b_1..b_N; a_0 = a_N = 0.
struct FlaschkaState {
  std::vector<double> a;
  std::vector<double> b;

  int size() const { return static_cast<int>(b.size()); }
};

// Throws InvalidArgument on shape mismatch, non-finite entries, or a_j <= 0.
void validate(const FlaschkaState& s);

// H = 1/2 sum y_j^2 + sum exp(x_j - x_{j+1}).  Throws OverflowError.
double hamiltonian_xy(const PhysicalState& s);

// a_j = exp((x_j - x_{j+1})/2)/2, b_j = -y_j/2.
FlaschkaState flaschka_map(const PhysicalState& s);

// x_1 = gauge, x_j = x_1 - 2(j-1) ln 2 - 2 sum_{m<j} ln a_m, y_j = -2 b_j.
PhysicalState flaschka_inverse(const FlaschkaState& s, double gauge);

// H = 4 (sum a_j^2 + 1/2 sum b_j^2) = 2 tr(L^2).
double hamiltonian_ab(const FlaschkaState& s);

// a_j' = a_j (b_{j+1} - b_j),  b_j' = 2 (a_j^2 - a_{j-1}^2).
FlaschkaState toda_rhs(const FlaschkaState& s);

// One classical RK4 step.
FlaschkaState rk4_step(const FlaschkaState& s, double dt);

struct Trajectory {
  std::vector<double> times;
  std::vector<FlaschkaState> states;
};

// Fixed-step RK4 from t = 0 to t_final, sampled at every step (the last step
// is shortened to land on t_final).  Throws PositivityError if some a_j
// becomes nonpositive, NumericError on non-finite state.
Trajectory integrate_toda(const FlaschkaState& s0, double t_final, double dt);

moment::JacobiMatrix lax_matrix(const FlaschkaState& s);

struct LaxPair {
  moment::JacobiMatrix L;
  // Antisymmetric tridiagonal: B(j, j+1) = a_j, B(j+1, j) = -a_j.
  Eigen::MatrixXd B;
};
LaxPair lax_matrices(const FlaschkaState& s);

// BL - LB, which equals dL/dt along the flow.
Eigen::MatrixXd lax_commutator(const LaxPair& lp);

FlaschkaState flaschka_from_jacobi(const moment::JacobiMatrix& L);

// r_j^2(t) = r_j^2(0) e^{-2 lambda_j t} / sum_m r_m^2(0) e^{-2 lambda_m t},
// computed with a max-shift in the exponent.
moment::SpectralData evolve_spectral_data(const moment::SpectralData& sd0, double t);

// Explicit solution at time t via the spectral measure of L(0).
FlaschkaState spectral_solve(const FlaschkaState& s0, double t);

struct AsymptoticsReport {
  std::vector<double> eigenvalues;    // spectrum of L(0), ascending
  std::vector<double> b_plus_sorted;  // b(t_large), sorted ascending
  std::vector<double> b_minus_sorted; // b(-t_large), sorted ascending
  double max_a_plus = 0.0;
  double max_a_minus = 0.0;
  double max_b_deviation = 0.0;  // multiset distance of b(+-t_large) to the spectrum
  double trace_drift = 0.0;      // max |sum b(+-t) - tr L(0)|
  double rate = 0.0;             // c in the tolerance exp(-c t_large)
  double tolerance = 0.0;
  bool passed = false;
};

// Scattering limit: a_j(+-t) -> 0 and b(+-t) -> spectrum of L(0) as sets.
AsymptoticsReport asymptotics_check(const FlaschkaState& s0, double t_large);

}  // namespace toda_kdq::toda
