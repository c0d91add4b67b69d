#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace toda_kdq::moment {

using cplx = std::complex<double>;

// Atoms closer than this are merged (weights summed) on construction.
inline constexpr double kAtomMergeTolerance = 1e-12;

// Finite atomic measure sum_m w_m delta(u - u_m) on the line or half-line.
// Atoms are stored sorted ascending; zero weights are dropped.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  DiscreteMeasure(std::vector<double> atoms, std::vector<double> weights,
                  bool half_line = false);

  std::span<const double> atoms() const { return atoms_; }
  std::span<const double> weights() const { return weights_; }
  bool half_line() const { return half_line_; }
  int size() const { return static_cast<int>(atoms_.size()); }
  bool empty() const { return atoms_.empty(); }
  double total_mass() const;
  double max_abs_atom() const;

 private:
  std::vector<double> atoms_;
  std::vector<double> weights_;
  bool half_line_ = false;
};

// s_j = sum_m w_m u_m^j, j = 0..jmax.
std::vector<double> moments(const DiscreteMeasure& mu, int jmax);

// f(lambda) = sum_m w_m / (lambda - u_m).  Throws PoleError at an atom.
cplx stieltjes_transform(const DiscreteMeasure& mu, cplx lambda);

// Three-term recurrence of the orthonormal polynomials of mu:
//   sqrt(beta_{i+1}) p_{i+1} = (x - alpha_i) p_i - sqrt(beta_i) p_{i-1}.
// alpha has N entries, beta has N-1 (beta[i] holds beta_{i+1}).
struct RecurrenceCoefficients {
  std::vector<double> alpha;
  std::vector<double> beta;
};

// Lanczos on diag(atoms) started from (sqrt w_m)/sqrt(s_0), with full
// reorthogonalization.  Throws RankDeficiencyError if N exceeds the atom count.
RecurrenceCoefficients recurrence_coefficients(const DiscreteMeasure& mu, int N);

// Unreduced symmetric tridiagonal matrix: b_1..b_N on the diagonal,
// a_1..a_{N-1} > 0 off the diagonal.  Indices below are 0-based.
class JacobiMatrix {
 public:
  JacobiMatrix(std::vector<double> diag, std::vector<double> offdiag);

  int size() const { return static_cast<int>(diag_.size()); }
  std::span<const double> diag() const { return diag_; }
  std::span<const double> offdiag() const { return offdiag_; }
  Eigen::MatrixXd dense() const;
  // tr(L^2) = sum b^2 + 2 sum a^2.
  double trace_of_square() const;

 private:
  std::vector<double> diag_;
  std::vector<double> offdiag_;
};

// Eigenvalues (ascending) and squared last components of the unit
// eigenvectors, i.e. the spectral measure of L at e_N.
struct SpectralData {
  std::vector<double> eigenvalues;
  std::vector<double> masses;
};

// Throws InvalidArgument unless eigenvalues increase strictly, masses are
// nonnegative and sum to 1 within `tol`.
void validate_spectral_data(const SpectralData& sd, double tol = 1e-12);

// Fills L from the bottom-right corner: b_N = alpha_0, a_{N-1} = sqrt(beta_1),
// b_{N-1} = alpha_1, ...  so that <(lambda - L)^{-1} e_N, e_N> is the
// Stieltjes transform of mu.  mu must have unit mass.
JacobiMatrix jacobi_from_measure(const DiscreteMeasure& mu);
JacobiMatrix jacobi_from_recurrence(const RecurrenceCoefficients& rc);

// Implicit QL on the tridiagonal matrix, tracking only the last row of the
// eigenvector matrix.
SpectralData spectral_data_from_jacobi(const JacobiMatrix& L);

DiscreteMeasure measure_from_spectral_data(const SpectralData& sd,
                                           bool half_line = false);

// 1/(lambda - b_N - a_{N-1}^2/(lambda - b_{N-1} - ... - a_1^2/(lambda - b_1))),
// evaluated from the innermost level outward.
cplx continued_fraction_eval(const JacobiMatrix& L, cplx lambda);

// Solves (lambda I - L) v = rhs by eliminating from the last row upward.
std::vector<cplx> solve_shifted(const JacobiMatrix& L, cplx lambda,
                                std::span<const cplx> rhs);

// <(lambda I - L)^{-1} e_N, e_N>.
cplx resolvent_nn(const JacobiMatrix& L, cplx lambda);

// Orthonormal polynomial P_N of mu at x.  When N equals the atom count the
// missing normalization sqrt(beta_N) is taken as 1, so P_N is proportional to
// prod (x - u_m).
double orthonormal_poly(const DiscreteMeasure& mu, int N, double x);

// Q_N(tau) = sum_m w_m (P_N(tau) - P_N(u_m)) / (tau - u_m), using P_N'(tau)
// for atoms coinciding with tau.
double second_kind_poly(const DiscreteMeasure& mu, int N, double tau);

// For z = i y: | z^{2N+1} ( f(z) + sum_{j<2N} s_j z^{-j-1} ) + s_{2N} | with
// f(z) = int dmu(u)/(u - z) = -stieltjes_transform(mu, z).  Evaluated in
// extended precision since the bracket cancels down to O(z^{-2N-1}).
std::vector<double> nevanlinna_limit_check(const DiscreteMeasure& mu, int N,
                                           std::span<const double> y_list);

}  // namespace toda_kdq::moment
