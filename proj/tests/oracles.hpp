#pragma once

// Test-only oracles, independent of the library implementation paths they
// cross-check: finite differences for derivatives, a Hermitian-eigensolve
// matrix exponential for the half-pi rotation, a long-double Pochhammer
// series for Jacobi values, and seeded random model generators.

#include <cmath>
#include <random>

#include "qib/core.hpp"
#include "qib/states.hpp"

namespace oracles {

using qib::Complex;
using qib::Matrix;
using qib::RealVector;
using qib::Vector;

// raw-engine uniform doubles; keeps corpora identical across library versions
struct Rng {
  std::mt19937_64 engine;

  explicit Rng(std::uint64_t seed) : engine(seed) {}

  double unit() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }
  double range(double lo, double hi) { return lo + (hi - lo) * unit(); }
  int index(int n) { return static_cast<int>(engine() % static_cast<std::uint64_t>(n)); }
};

// J_y for j = (M-1)/2 in the ascending-m eigenbasis of J_z (hbar = 1)
inline Matrix spin_jy(int m) {
  const double j = 0.5 * (m - 1);
  Matrix jy = Matrix::Zero(m, m);
  for (int i = 0; i < m - 1; ++i) {
    const double mz = -j + i;
    const double c = std::sqrt(j * (j + 1) - mz * (mz + 1));
    jy(i + 1, i) += Complex(0.0, -0.5) * c;  // J_+ / (2i)
    jy(i, i + 1) += Complex(0.0, 0.5) * c;   // -J_- / (2i)
  }
  return jy;
}

// <m'| e^{+i (pi/2) J_y} |m> via Hermitian eigendecomposition
inline Eigen::MatrixXd exp_jy_half_pi(int m) {
  const Matrix jy = spin_jy(m);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(jy);
  Vector phases(m);
  for (int i = 0; i < m; ++i) {
    phases[i] = std::polar(1.0, 0.5 * M_PI * solver.eigenvalues()[i]);
  }
  const Matrix u = solver.eigenvectors() * phases.asDiagonal() *
                   solver.eigenvectors().adjoint();
  return u.real();
}

// brute-force series for P_n^{(a,b)}(0): sum_s binom(n+a, n-s) binom(n+b, s) (-1)^s / 2^n,
// generalized binomials via Pochhammer products in long double; the sign
// alternation cancels catastrophically at large parameters, so the term
// magnitude is reported for cancellation-aware tolerances
struct JacobiSeries {
  double value;
  double termMagnitude;  // sum of |term| / 2^n
};

inline JacobiSeries jacobi_series_at_zero(int n, int a, int b) {
  auto gbin = [](long top, int k) -> long double {
    long double v = 1.0L;
    for (int t = 0; t < k; ++t) v *= static_cast<long double>(top - t) / (t + 1);
    return v;
  };
  long double sum = 0.0L;
  long double mag = 0.0L;
  for (int s = 0; s <= n; ++s) {
    const long double term = gbin(n + a, n - s) * gbin(n + b, s);
    sum += (s % 2 == 0) ? term : -term;
    mag += std::abs(term);
  }
  return {static_cast<double>(std::ldexp(sum, -n)),
          static_cast<double>(std::ldexp(mag, -n))};
}

// exact-integer route for the same series: signed Pascal-triangle binomials
// and the alternating sum carried in __int128 (no rounding anywhere for the
// d-matrix index ranges)
inline double jacobi_exact_at_zero(int n, int a, int b) {
  auto choose = [](long top, int k) -> __int128 {
    if (k < 0) return 0;
    long sign = 1;
    if (top < 0) {  // C(m,k) = (-1)^k C(k-m-1, k)
      top = k - top - 1;
      sign = (k % 2 == 0) ? 1 : -1;
    }
    if (k > top) return 0;
    // Pascal row by row
    std::vector<__int128> row(static_cast<std::size_t>(k) + 1, 0);
    row[0] = 1;
    for (long r = 1; r <= top; ++r) {
      for (long c = std::min<long>(r, k); c >= 1; --c) row[c] += row[c - 1];
    }
    return sign * row[k];
  };
  __int128 sum = 0;
  for (int s = 0; s <= n; ++s) {
    const __int128 term = choose(n + a, n - s) * choose(n + b, s);
    sum += (s % 2 == 0) ? term : -term;
  }
  return std::ldexp(static_cast<double>(sum), -n);
}

// the textbook three-term recurrence in degree at x = 0; well-posed only
// for a+b >= -1, used to cross-check the library on that domain
inline double jacobi_recurrence_at_zero(int n, int a, int b) {
  if (n == 0) return 1.0;
  double pm2 = 1.0;
  double pm1 = 0.5 * (a - b);
  if (n == 1) return pm1;
  for (int q = 2; q <= n; ++q) {
    const double apb = a + b;
    const double lead = 2.0 * q * (q + apb) * (2.0 * q + apb - 2.0);
    const double mid = (2.0 * q + apb - 1.0) *
                       (static_cast<double>(a) * a - static_cast<double>(b) * b);
    const double tail = 2.0 * (q + a - 1.0) * (q + b - 1.0) * (2.0 * q + apb);
    const double p = (mid * pm1 - tail * pm2) / lead;
    pm2 = pm1;
    pm1 = p;
  }
  return pm1;
}

// central finite difference of the outcome probabilities
inline RealVector fd_probability_derivatives(const qib::ProbeState& state,
                                             const qib::Generator& gen,
                                             const qib::MeasurementBasis& basis,
                                             double epsilon, double step = 1e-5) {
  const RealVector hi = qib::probabilities(state, gen, basis, epsilon + step);
  const RealVector lo = qib::probabilities(state, gen, basis, epsilon - step);
  return (hi - lo) / (2.0 * step);
}

// Haar-like random unitary from QR of a complex Gaussian matrix
inline Matrix random_unitary(int m, Rng& rng) {
  Matrix g(m, m);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) {
      // Box-Muller
      const double u1 = std::max(rng.unit(), 1e-300);
      const double u2 = rng.unit();
      const double u3 = std::max(rng.unit(), 1e-300);
      const double u4 = rng.unit();
      g(r, c) = Complex(std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2),
                        std::sqrt(-2.0 * std::log(u3)) * std::cos(2.0 * M_PI * u4));
    }
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < m; ++i) {
    const Complex d = r(i, i);
    q.col(i) *= (std::abs(d) > 0.0) ? d / std::abs(d) : Complex(1.0, 0.0);
  }
  return q;
}

// random unit vector (not admissible in general)
inline Vector random_state_vector(int m, Rng& rng) {
  Vector v(m);
  for (int i = 0; i < m; ++i) {
    v[i] = std::polar(rng.range(0.05, 1.0), rng.range(0.0, 2.0 * M_PI));
  }
  return v / v.norm();
}

// spectrum symmetric about `mean` with random gaps, plus the center level
// for odd M
inline RealVector random_symmetric_spectrum(int m, double mean, Rng& rng) {
  const int half = m / 2;
  std::vector<double> offsets;
  double acc = 0.0;
  for (int l = 0; l < half; ++l) {
    acc += rng.range(0.3, 1.5);
    offsets.push_back(acc);
  }
  RealVector eigs(m);
  for (int l = 0; l < half; ++l) {
    eigs[l] = mean - offsets[half - 1 - l];
    eigs[m - 1 - l] = mean + offsets[half - 1 - l];
  }
  if (m % 2 != 0) eigs[m / 2] = mean;
  return eigs;
}

// balanced moduli (pairs share a weight drawn away from zero) and free phases
struct CertifiedSample {
  qib::Generator gen;
  qib::ProbeState state;
};

inline CertifiedSample random_certified_state(int m, double mean, Rng& rng) {
  RealVector eigs = random_symmetric_spectrum(m, mean, rng);
  const int half = (m + 1) / 2;
  RealVector weights(half);
  double total = 0.0;
  for (int l = 0; l < half; ++l) {
    weights[l] = rng.range(0.5, 1.5);
    const bool center = (m % 2 != 0) && l == half - 1;
    total += (center ? 1.0 : 2.0) * weights[l];
  }
  RealVector moduli = (weights / total).cwiseSqrt();
  RealVector phases(m);
  for (int l = 0; l < m; ++l) phases[l] = rng.range(0.0, 2.0 * M_PI);
  qib::Generator gen(eigs);
  qib::ProbeState state = qib::build_symmetric_state(gen, moduli, phases, mean);
  return {std::move(gen), std::move(state)};
}

}  // namespace oracles
