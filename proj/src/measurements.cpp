#include "qib/measurements.hpp"

#include <cmath>

namespace qib {

namespace {

constexpr double kZeroModulus = 1e-14;

// C(m, k) for non-negative integers, exact while the result fits the
// long double mantissa; every intermediate is itself a binomial.
long double binom(int m, int k) {
  if (k < 0 || k > m) return 0.0L;
  if (k > m - k) k = m - k;
  long double v = 1.0L;
  for (int t = 1; t <= k; ++t) v = v * (m - k + t) / t;
  return v;
}

// generalized binomial C(m, k) for integer m of either sign
long double gbinom(long m, int k) {
  if (k < 0) return 0.0L;
  if (m >= 0) return binom(static_cast<int>(m), k);
  const long double v = binom(static_cast<int>(k - m - 1), k);
  return (k % 2 == 0) ? v : -v;
}

}  // namespace

FourierBasisSpec FourierBasisSpec::canonical(int M) {
  return FourierBasisSpec{M, canonical_beta(M), RealVector::Zero(M)};
}

FourierBasisSpec FourierBasisSpec::matched_to(const ProbeState& state) {
  return FourierBasisSpec{state.dim(), canonical_beta(state.dim()), state.phases()};
}

long fourier_f(int l, int M) {
  if (M < 2) throw dimension_error("fourier_f: M must be >= 2");
  if (l < 1 || l > M) throw dimension_error("fourier_f: l out of range");
  if (M % 2 == 0) {
    // [(-1)^l + 1](M-1)/2 is M-1 for even l, 0 for odd l
    return (l - 1) + ((l % 2 == 0) ? static_cast<long>(M - 1) : 0);
  }
  return static_cast<long>(l - 1) * (1 - M);
}

double canonical_beta(int M) {
  if (M < 2) throw dimension_error("canonical_beta: M must be >= 2");
  if (M % 2 == 0) return -M_PI * (M - 1);
  return M_PI * static_cast<double>(M - 1) * (M - 1) / 2.0;
}

MeasurementBasis fourier_basis(const FourierBasisSpec& spec) {
  const int m = spec.M;
  if (m < 2) throw dimension_error("fourier_basis: M must be >= 2");
  if (static_cast<int>(spec.etaPhases.size()) != m) {
    throw dimension_error("fourier_basis: need M free phases");
  }
  const double invRoot = 1.0 / std::sqrt(static_cast<double>(m));
  Matrix coeff(m, m);
  for (int j = 1; j <= m; ++j) {
    for (int l = 1; l <= m; ++l) {
      const double theta = (j * M_PI / m) * static_cast<double>(fourier_f(l, m)) +
                           j * spec.beta / m + spec.etaPhases[l - 1];
      coeff(j - 1, l - 1) = std::polar(invRoot, theta);
    }
  }
  return MeasurementBasis(std::move(coeff));
}

double jacobi_at_zero(int n, int a, int b) {
  if (n < 0) throw dimension_error("jacobi_at_zero: degree must be >= 0");
  long double sum = 0.0L;
  for (int t = 0; t <= n; ++t) {
    const long double term = gbinom(n + a, n - t) * gbinom(n + b, t);
    sum += (t % 2 == 0) ? term : -term;
  }
  return static_cast<double>(std::ldexp(sum, -n));
}

RealMatrix wigner_d_half_pi(int M) {
  if (M < 2) throw dimension_error("wigner_d_half_pi: M must be >= 2");
  RealMatrix d(M, M);
  for (int l = 1; l <= M; ++l) {
    const double halfPow = std::exp2(-(l - 0.5 * (M + 1)));
    for (int j = 1; j <= M; ++j) {
      const double pref = std::exp(0.5 * (std::lgamma(M - l + 1.0) + std::lgamma(l) -
                                          std::lgamma(j) - std::lgamma(M - j + 1.0)));
      d(l - 1, j - 1) = pref * halfPow * jacobi_at_zero(M - l, l - j, l + j - (M + 1));
    }
  }
  return d;
}

MeasurementBasis wigner_basis(const WignerBasisSpec& spec) {
  const int m = spec.M;
  const RealMatrix d = wigner_d_half_pi(m);
  Matrix coeff(m, m);
  for (int j = 1; j <= m; ++j) {
    for (int l = 1; l <= m; ++l) {
      // b_{j,l} = e^{i m' vartheta} d_{m',m} with m' = l - (M+1)/2, m = j - (M+1)/2
      coeff(j - 1, l - 1) =
          std::polar(1.0, (l - 0.5 * (m + 1)) * spec.vartheta) * d(l - 1, j - 1);
    }
  }
  return MeasurementBasis(std::move(coeff));
}

double check_balance(const MeasurementBasis& basis) {
  const int m = basis.dim();
  double worst = 0.0;
  for (int j = 0; j < m; ++j) {
    for (int l = 0; l < (m + 1) / 2; ++l) {
      const double lhs = std::abs(basis.coefficients()(j, l));
      const double rhs = std::abs(basis.coefficients()(j, m - 1 - l));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

PhaseConditionResult check_phase_condition(const ProbeState& state,
                                           const MeasurementBasis& basis,
                                           double tolerance,
                                           const std::optional<RealVector>& pinnedXi) {
  const int m = state.dim();
  if (basis.dim() != m) {
    throw dimension_error("check_phase_condition: state/basis dimension mismatch");
  }
  if (pinnedXi && static_cast<int>(pinnedXi->size()) != m) {
    throw dimension_error("check_phase_condition: pinned xi must have M entries");
  }
  const int half = (m + 1) / 2;
  const RealVector thetaState = state.phases();
  const RealVector modState = state.moduli();
  PhaseConditionResult result;
  result.xi = RealVector::Zero(m);
  for (int j = 0; j < m; ++j) {
    std::vector<double> sums;
    sums.reserve(half);
    for (int l = 0; l < half; ++l) {
      const int d = m - 1 - l;
      const Complex bl = basis.coefficients()(j, l);
      const Complex bd = basis.coefficients()(j, d);
      if (std::abs(bl) < kZeroModulus || std::abs(bd) < kZeroModulus ||
          modState[l] < kZeroModulus || modState[d] < kZeroModulus) {
        result.excluded.emplace_back(j, l);
        continue;
      }
      sums.push_back((thetaState[l] - std::arg(bl)) + (thetaState[d] - std::arg(bd)));
    }
    if (sums.empty()) continue;
    double xi;
    if (pinnedXi) {
      xi = (*pinnedXi)[j];
    } else {
      Complex mean(0.0, 0.0);
      for (double s : sums) mean += std::polar(1.0, s);
      xi = std::arg(mean);
    }
    result.xi[j] = xi;
    for (double s : sums) {
      result.maxResidual = std::max(result.maxResidual, std::abs(wrap_angle(s - xi)));
    }
  }
  result.satisfied = result.maxResidual <= tolerance;
  return result;
}

RealVector wigner_pinned_xi(const MeasurementBasis& basis) {
  const int m = basis.dim();
  RealVector xi = RealVector::Zero(m);
  for (int j = 0; j < m; ++j) {
    for (int l = 0; l < (m + 1) / 2; ++l) {
      const Complex bl = basis.coefficients()(j, l);
      const Complex bd = basis.coefficients()(j, m - 1 - l);
      if (std::abs(bl) < kZeroModulus || std::abs(bd) < kZeroModulus) continue;
      xi[j] = wrap_angle(-(std::arg(bl) + std::arg(bd)));
      break;
    }
  }
  return xi;
}

Matrix shift_operator(const MeasurementBasis& basis, double beta) {
  const int m = basis.dim();
  Matrix v = Matrix::Zero(m, m);
  for (int j = 0; j < m - 1; ++j) {
    v += basis.outcome_vector(j + 1) * basis.outcome_vector(j).adjoint();
  }
  v += std::polar(1.0, beta) * basis.outcome_vector(0) * basis.outcome_vector(m - 1).adjoint();
  return v;
}

}  // namespace qib
