#pragma once

// Reference implementations used only by the tests.  Each one takes a route
// independent of the library code it checks.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "toda_kdq/moment.hpp"
#include "toda_kdq/toda.hpp"

namespace oracle {

// Modified Chebyshev algorithm with monic Legendre polynomials as the
// auxiliary basis, in extended precision.  Returns (alpha_0..alpha_{N-1}, beta_1..beta_{N-1}).
inline toda_kdq::moment::RecurrenceCoefficients modified_chebyshev(
    const toda_kdq::moment::DiscreteMeasure& mu, int N) {
  const int L = 2 * N;
  auto a = [](int) { return 0.0; };
  auto b = [](int k) { return k == 0 ? 2.0 : (long double)k * k / (4.0L * k * k - 1.0L); };
  std::vector<long double> m(L, 0.0);
  for (int i = 0; i < mu.size(); ++i) {
    const long double u = mu.atoms()[i];
    long double p0 = 1.0, p1 = u;
    m[0] += mu.weights()[i];
    if (L > 1) m[1] += mu.weights()[i] * p1;
    for (int l = 1; l + 1 < L; ++l) {
      const long double p2 = (u - a(l)) * p1 - b(l) * p0;
      m[l + 1] += mu.weights()[i] * p2;
      p0 = p1;
      p1 = p2;
    }
  }
  std::vector<long double> alpha(N), beta(N);
  std::vector<long double> sig_prev(L, 0.0), sig(m);
  alpha[0] = a(0) + m[1] / m[0];
  beta[0] = m[0];
  for (int k = 1; k < N; ++k) {
    std::vector<long double> next(L, 0.0);
    for (int l = k; l < L - k; ++l) {
      next[l] = sig[l + 1] - (alpha[k - 1] - a(l)) * sig[l] - beta[k - 1] * sig_prev[l] +
                b(l) * sig[l - 1];
    }
    alpha[k] = a(k) + next[k + 1] / next[k] - sig[k] / sig[k - 1];
    beta[k] = next[k] / sig[k - 1];
    sig_prev = sig;
    sig = next;
  }
  return {std::vector<double>(alpha.begin(), alpha.end()),
          std::vector<double>(beta.begin() + 1, beta.end())};
}

struct Eig {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

inline Eig eigen(const Eigen::MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  return {es.eigenvalues(), es.eigenvectors()};
}

// sum_j z_j^2 / (lambda - mu_j) from a dense eigen-decomposition.
inline std::complex<double> eigen_resolvent_nn(const Eigen::MatrixXd& A, std::complex<double> z) {
  const auto e = eigen(A);
  const int n = static_cast<int>(A.rows());
  std::complex<double> s = 0.0;
  for (int j = 0; j < n; ++j) {
    const double w = e.vectors(n - 1, j) * e.vectors(n - 1, j);
    s += w / (z - e.values(j));
  }
  return s;
}

inline toda_kdq::toda::FlaschkaState random_state(std::mt19937_64& rng, int N) {
  std::uniform_real_distribution<double> ua(0.2, 1.0), ub(-1.0, 1.0);
  toda_kdq::toda::FlaschkaState s;
  for (int j = 0; j + 1 < N; ++j) s.a.push_back(ua(rng));
  for (int j = 0; j < N; ++j) s.b.push_back(ub(rng));
  return s;
}

inline toda_kdq::moment::DiscreteMeasure random_measure(std::mt19937_64& rng, int M,
                                                        double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> ux(lo, hi), uw(0.1, 1.0);
  std::vector<double> x, w;
  double total = 0.0;
  for (int i = 0; i < M; ++i) {
    x.push_back(ux(rng));
    w.push_back(uw(rng));
    total += w.back();
  }
  for (double& v : w) v /= total;
  return toda_kdq::moment::DiscreteMeasure(x, w);
}

}  // namespace oracle
