#include "toda_kdq/moment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "toda_kdq/errors.hpp"

namespace toda_kdq::moment {

DiscreteMeasure::DiscreteMeasure(std::vector<double> atoms,
                                 std::vector<double> weights, bool half_line)
    : half_line_(half_line) {
  if (atoms.size() != weights.size()) {
    throw InvalidArgument("measure has " + std::to_string(atoms.size()) +
                          " atoms but " + std::to_string(weights.size()) +
                          " weights");
  }
  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!std::isfinite(atoms[i]) || !std::isfinite(weights[i])) {
      throw InvalidArgument("measure contains a non-finite atom or weight");
    }
    if (weights[i] < 0.0) throw InvalidArgument("measure has a negative weight");
    if (half_line && atoms[i] < 0.0) {
      throw InvalidArgument("half-line measure has a negative atom");
    }
  }
  std::sort(order.begin(), order.end(),
            [&](std::size_t l, std::size_t r) { return atoms[l] < atoms[r]; });
  for (std::size_t i : order) {
    if (weights[i] == 0.0) continue;
    if (!atoms_.empty() && atoms[i] - atoms_.back() <= kAtomMergeTolerance) {
      const double w = weights_.back() + weights[i];
      atoms_.back() = (atoms_.back() * weights_.back() + atoms[i] * weights[i]) / w;
      weights_.back() = w;
      continue;
    }
    atoms_.push_back(atoms[i]);
    weights_.push_back(weights[i]);
  }
}

double DiscreteMeasure::total_mass() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

double DiscreteMeasure::max_abs_atom() const {
  double m = 0.0;
  for (double a : atoms_) m = std::max(m, std::abs(a));
  return m;
}

std::vector<double> moments(const DiscreteMeasure& mu, int jmax) {
  if (jmax < 0) throw InvalidArgument("jmax must be nonnegative");
  std::vector<double> s(static_cast<std::size_t>(jmax + 1), 0.0);
  for (int m = 0; m < mu.size(); ++m) {
    const double u = mu.atoms()[static_cast<std::size_t>(m)];
    double p = mu.weights()[static_cast<std::size_t>(m)];
    for (auto& sj : s) {
      sj += p;
      p *= u;
    }
  }
  return s;
}

cplx stieltjes_transform(const DiscreteMeasure& mu, cplx lambda) {
  cplx f{0.0, 0.0};
  for (int m = 0; m < mu.size(); ++m) {
    const cplx d = lambda - mu.atoms()[static_cast<std::size_t>(m)];
    if (d == cplx{0.0, 0.0}) {
      throw PoleError("Stieltjes transform evaluated at an atom");
    }
    f += mu.weights()[static_cast<std::size_t>(m)] / d;
  }
  if (!std::isfinite(f.real()) || !std::isfinite(f.imag())) {
    throw PoleError("Stieltjes transform overflowed next to an atom");
  }
  return f;
}

RecurrenceCoefficients recurrence_coefficients(const DiscreteMeasure& mu, int N) {
  if (N < 1) throw InvalidArgument("recurrence needs N >= 1");
  const int M = mu.size();
  if (N > M) {
    throw RankDeficiencyError("requested " + std::to_string(N) +
                              " recurrence coefficients from a measure with " +
                              std::to_string(M) + " distinct atoms");
  }
  const auto atoms = mu.atoms();
  const double mass = mu.total_mass();
  const auto um = static_cast<std::size_t>(M);

  std::vector<std::vector<double>> q;
  q.reserve(static_cast<std::size_t>(N));
  std::vector<double> q0(um);
  for (std::size_t m = 0; m < um; ++m) q0[m] = std::sqrt(mu.weights()[m] / mass);
  q.push_back(std::move(q0));

  RecurrenceCoefficients rc;
  rc.alpha.reserve(static_cast<std::size_t>(N));
  rc.beta.reserve(static_cast<std::size_t>(N - 1));
  std::vector<double> r(um);
  for (int i = 0; i < N; ++i) {
    const auto& qi = q.back();
    double alpha = 0.0;
    for (std::size_t m = 0; m < um; ++m) alpha += atoms[m] * qi[m] * qi[m];
    rc.alpha.push_back(alpha);
    if (i + 1 == N) break;

    for (std::size_t m = 0; m < um; ++m) r[m] = atoms[m] * qi[m];
    // Two passes of classical Gram-Schmidt against every Lanczos vector.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& qj : q) {
        double h = 0.0;
        for (std::size_t m = 0; m < um; ++m) h += qj[m] * r[m];
        for (std::size_t m = 0; m < um; ++m) r[m] -= h * qj[m];
      }
    }
    double norm2 = 0.0;
    for (double v : r) norm2 += v * v;
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
      throw RankDeficiencyError("Lanczos breakdown at step " + std::to_string(i + 1));
    }
    rc.beta.push_back(norm2);
    const double norm = std::sqrt(norm2);
    std::vector<double> next(um);
    for (std::size_t m = 0; m < um; ++m) next[m] = r[m] / norm;
    q.push_back(std::move(next));
  }
  return rc;
}

JacobiMatrix::JacobiMatrix(std::vector<double> diag, std::vector<double> offdiag)
    : diag_(std::move(diag)), offdiag_(std::move(offdiag)) {
  if (diag_.empty()) throw InvalidArgument("Jacobi matrix must be at least 1x1");
  if (offdiag_.size() + 1 != diag_.size()) {
    throw InvalidArgument("Jacobi matrix needs N-1 off-diagonal entries");
  }
  for (double b : diag_) {
    if (!std::isfinite(b)) throw InvalidArgument("non-finite Jacobi diagonal");
  }
  for (double a : offdiag_) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw InvalidArgument("Jacobi off-diagonal entries must be positive and finite");
    }
  }
}

Eigen::MatrixXd JacobiMatrix::dense() const {
  const int n = size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = diag_[static_cast<std::size_t>(i)];
  for (int i = 0; i + 1 < n; ++i) {
    m(i, i + 1) = offdiag_[static_cast<std::size_t>(i)];
    m(i + 1, i) = offdiag_[static_cast<std::size_t>(i)];
  }
  return m;
}

double JacobiMatrix::trace_of_square() const {
  double t = 0.0;
  for (double b : diag_) t += b * b;
  for (double a : offdiag_) t += 2.0 * a * a;
  return t;
}

void validate_spectral_data(const SpectralData& sd, double tol) {
  if (sd.eigenvalues.size() != sd.masses.size() || sd.eigenvalues.empty()) {
    throw InvalidArgument("spectral data needs matching, nonempty eigenvalues and masses");
  }
  for (std::size_t j = 1; j < sd.eigenvalues.size(); ++j) {
    if (!(sd.eigenvalues[j] > sd.eigenvalues[j - 1])) {
      throw InvalidArgument("spectral data eigenvalues must increase strictly");
    }
  }
  double total = 0.0;
  for (double w : sd.masses) {
    if (!(w >= 0.0)) throw InvalidArgument("spectral masses must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > tol) {
    throw InvalidArgument("spectral masses must sum to 1");
  }
}

JacobiMatrix jacobi_from_recurrence(const RecurrenceCoefficients& rc) {
  const std::size_t n = rc.alpha.size();
  if (n == 0 || rc.beta.size() + 1 != n) {
    throw InvalidArgument("recurrence coefficients have inconsistent lengths");
  }
  std::vector<double> diag(n);
  std::vector<double> off(n - 1);
  for (std::size_t i = 0; i < n; ++i) diag[n - 1 - i] = rc.alpha[i];
  for (std::size_t i = 0; i + 1 < n; ++i) off[n - 2 - i] = std::sqrt(rc.beta[i]);
  return JacobiMatrix(std::move(diag), std::move(off));
}

JacobiMatrix jacobi_from_measure(const DiscreteMeasure& mu) {
  if (mu.empty()) throw InvalidArgument("cannot build a Jacobi matrix from the zero measure");
  if (std::abs(mu.total_mass() - 1.0) > 1e-10) {
    throw InvalidArgument("jacobi_from_measure requires a unit-mass measure");
  }
  return jacobi_from_recurrence(recurrence_coefficients(mu, mu.size()));
}

SpectralData spectral_data_from_jacobi(const JacobiMatrix& L) {
  const int n = L.size();
  std::vector<double> d(L.diag().begin(), L.diag().end());
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  std::copy(L.offdiag().begin(), L.offdiag().end(), e.begin());
  std::vector<double> z(static_cast<std::size_t>(n), 0.0);
  z[static_cast<std::size_t>(n - 1)] = 1.0;
  const double eps = std::numeric_limits<double>::epsilon();
  auto D = [&](int i) -> double& { return d[static_cast<std::size_t>(i)]; };
  auto E = [&](int i) -> double& { return e[static_cast<std::size_t>(i)]; };
  auto Z = [&](int i) -> double& { return z[static_cast<std::size_t>(i)]; };

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(D(m)) + std::abs(D(m + 1));
        if (std::abs(E(m)) <= eps * dd) break;
      }
      if (m != l) {
        if (++iter > 60) throw ConvergenceError("QL iteration did not converge");
        double g = (D(l + 1) - D(l)) / (2.0 * E(l));
        double r = std::hypot(g, 1.0);
        g = D(m) - D(l) + E(l) / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i = m - 1;
        bool deflated = false;
        for (; i >= l; --i) {
          const double f = s * E(i);
          const double b = c * E(i);
          r = std::hypot(f, g);
          E(i + 1) = r;
          if (r == 0.0) {
            D(i + 1) -= p;
            E(m) = 0.0;
            deflated = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = D(i + 1) - p;
          r = (D(i) - g) * s + 2.0 * c * b;
          p = s * r;
          D(i + 1) = g + p;
          g = c * r - b;
          const double zf = Z(i + 1);
          Z(i + 1) = s * Z(i) + c * zf;
          Z(i) = c * Z(i) - s * zf;
        }
        if (deflated) continue;
        D(l) -= p;
        E(l) = g;
        E(m) = 0.0;
      }
    } while (m != l);
  }

  std::vector<std::size_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  SpectralData sd;
  sd.eigenvalues.reserve(order.size());
  sd.masses.reserve(order.size());
  for (std::size_t j : order) {
    sd.eigenvalues.push_back(d[j]);
    sd.masses.push_back(z[j] * z[j]);
  }
  return sd;
}

DiscreteMeasure measure_from_spectral_data(const SpectralData& sd, bool half_line) {
  return DiscreteMeasure(sd.eigenvalues, sd.masses, half_line);
}

cplx continued_fraction_eval(const JacobiMatrix& L, cplx lambda) {
  const auto b = L.diag();
  const auto a = L.offdiag();
  cplx t = lambda - b[0];
  for (std::size_t j = 1; j < b.size(); ++j) {
    if (t == cplx{0.0, 0.0}) {
      throw PoleError("continued fraction hits a pole of a convergent");
    }
    t = lambda - b[j] - a[j - 1] * a[j - 1] / t;
  }
  if (t == cplx{0.0, 0.0}) throw PoleError("lambda is an eigenvalue of L");
  return 1.0 / t;
}

std::vector<cplx> solve_shifted(const JacobiMatrix& L, cplx lambda,
                                std::span<const cplx> rhs) {
  const auto b = L.diag();
  const auto a = L.offdiag();
  const std::size_t n = b.size();
  if (rhs.size() != n) throw InvalidArgument("right-hand side has the wrong length");
  std::vector<cplx> e(n);
  std::vector<cplx> g(n);
  e[n - 1] = lambda - b[n - 1];
  g[n - 1] = rhs[n - 1];
  for (std::size_t jj = n - 1; jj-- > 0;) {
    if (e[jj + 1] == cplx{0.0, 0.0}) throw SingularSystemError("lambda I - L is singular");
    const cplx factor = -a[jj] / e[jj + 1];
    e[jj] = lambda - b[jj] + factor * a[jj];
    g[jj] = rhs[jj] - factor * g[jj + 1];
  }
  std::vector<cplx> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (e[j] == cplx{0.0, 0.0}) throw SingularSystemError("lambda I - L is singular");
    const cplx coupling = j == 0 ? cplx{0.0, 0.0} : a[j - 1] * v[j - 1];
    v[j] = (g[j] + coupling) / e[j];
  }
  for (const auto& x : v) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
      throw SingularSystemError("resolvent overflowed; lambda is (numerically) in the spectrum");
    }
  }
  return v;
}

cplx resolvent_nn(const JacobiMatrix& L, cplx lambda) {
  std::vector<cplx> rhs(static_cast<std::size_t>(L.size()), cplx{0.0, 0.0});
  rhs.back() = 1.0;
  return solve_shifted(L, lambda, rhs).back();
}

namespace {

// Recurrence data for P_0..P_N; sqrt_beta[k] multiplies p_{k+1}.
struct PolyRecurrence {
  std::vector<double> alpha;
  std::vector<double> sqrt_beta;
  double p0 = 1.0;
};

PolyRecurrence poly_recurrence(const DiscreteMeasure& mu, int N) {
  if (N < 0) throw InvalidArgument("polynomial degree must be nonnegative");
  if (mu.empty()) throw InvalidArgument("orthogonal polynomials of the zero measure");
  const int M = mu.size();
  if (N > M) {
    throw RankDeficiencyError("degree " + std::to_string(N) + " exceeds the atom count " +
                              std::to_string(M));
  }
  PolyRecurrence pr;
  pr.p0 = 1.0 / std::sqrt(mu.total_mass());
  if (N == 0) return pr;
  const auto rc = recurrence_coefficients(mu, std::min(N + 1, M));
  pr.alpha = rc.alpha;
  for (double b : rc.beta) pr.sqrt_beta.push_back(std::sqrt(b));
  if (static_cast<int>(pr.sqrt_beta.size()) < N) pr.sqrt_beta.push_back(1.0);
  return pr;
}

}  // namespace

double orthonormal_poly(const DiscreteMeasure& mu, int N, double x) {
  const auto pr = poly_recurrence(mu, N);
  double prev = 0.0;
  double cur = pr.p0;
  for (int k = 0; k < N; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const double back = k == 0 ? 0.0 : pr.sqrt_beta[uk - 1] * prev;
    const double next = ((x - pr.alpha[uk]) * cur - back) / pr.sqrt_beta[uk];
    prev = cur;
    cur = next;
  }
  return cur;
}

double second_kind_poly(const DiscreteMeasure& mu, int N, double tau) {
  const auto pr = poly_recurrence(mu, N);
  double q = 0.0;
  for (int m = 0; m < mu.size(); ++m) {
    const double u = mu.atoms()[static_cast<std::size_t>(m)];
    // Divided differences D_k = (p_k(tau) - p_k(u)) / (tau - u):
    //   sqrt(beta_{k+1}) D_{k+1} = (tau - alpha_k) D_k + p_k(u) - sqrt(beta_k) D_{k-1}.
    double p_prev = 0.0;
    double p_cur = pr.p0;
    double d_prev = 0.0;
    double d_cur = 0.0;
    for (int k = 0; k < N; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      const double sb_back = k == 0 ? 0.0 : pr.sqrt_beta[uk - 1];
      const double d_next = ((tau - pr.alpha[uk]) * d_cur + p_cur - sb_back * d_prev) /
                            pr.sqrt_beta[uk];
      const double p_next = ((u - pr.alpha[uk]) * p_cur - sb_back * p_prev) / pr.sqrt_beta[uk];
      d_prev = d_cur;
      d_cur = d_next;
      p_prev = p_cur;
      p_cur = p_next;
    }
    q += mu.weights()[static_cast<std::size_t>(m)] * d_cur;
  }
  return q;
}

std::vector<double> nevanlinna_limit_check(const DiscreteMeasure& mu, int N,
                                           std::span<const double> y_list) {
  if (N < 0) throw InvalidArgument("N must be nonnegative");
  using lcplx = std::complex<long double>;
  const int top = 2 * N;
  std::vector<long double> s(static_cast<std::size_t>(top + 1), 0.0L);
  for (int m = 0; m < mu.size(); ++m) {
    long double p = mu.weights()[static_cast<std::size_t>(m)];
    const long double u = mu.atoms()[static_cast<std::size_t>(m)];
    for (auto& sj : s) {
      sj += p;
      p *= u;
    }
  }
  std::vector<double> residuals;
  residuals.reserve(y_list.size());
  for (double y : y_list) {
    if (!(y > 0.0)) throw InvalidArgument("Nevanlinna check needs positive y");
    const lcplx z{0.0L, static_cast<long double>(y)};
    lcplx f{0.0L, 0.0L};
    for (int m = 0; m < mu.size(); ++m) {
      f += static_cast<long double>(mu.weights()[static_cast<std::size_t>(m)]) /
           (static_cast<long double>(mu.atoms()[static_cast<std::size_t>(m)]) - z);
    }
    // sum_{j<2N} s_j z^{-j-1} by Horner in w = 1/z.
    const lcplx w = 1.0L / z;
    lcplx series{0.0L, 0.0L};
    for (int j = top - 1; j >= 0; --j) series = (series + s[static_cast<std::size_t>(j)]) * w;
    lcplx scale{1.0L, 0.0L};
    for (int j = 0; j < top + 1; ++j) scale *= z;
    const lcplx value = scale * (f + series) + s[static_cast<std::size_t>(top)];
    residuals.push_back(static_cast<double>(std::abs(value)));
  }
  return residuals;
}

}  // namespace toda_kdq::moment
