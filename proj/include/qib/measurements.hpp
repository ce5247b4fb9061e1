#pragma once

#include <optional>
#include <utility>

#include "qib/core.hpp"

namespace qib {

/// Parameters of the equal-modulus (shift-operator) measurement family:
/// b_{j,l} = e^{i theta_{j,l}}/sqrt(M) with
/// theta_{j,l} = (j pi / M) f_l + j beta / M + etaPhases[l], j = 1..M.
struct FourierBasisSpec {
  int M = 2;
  double beta = 0.0;
  RealVector etaPhases;  // the free phase function h(A_l), one entry per l

  /// Canonical beta and zero free phases.
  static FourierBasisSpec canonical(int M);
  /// Canonical beta with the free phases set to the state phases, so the
  /// pairwise phase condition holds with xi_j = 0.
  static FourierBasisSpec matched_to(const ProbeState& state);
};

/// Parameters of the Wigner-d (Jacobi) measurement family; vartheta is the
/// free angle multiplying the eigenvalue index in the coefficient phases.
struct WignerBasisSpec {
  int M = 2;
  double vartheta = 0.0;
};

/// Outcome of the pairwise phase-condition check: per-outcome constants
/// xi_j (mod 2pi), the worst circular deviation from them, and the (j,l)
/// pairs skipped because a coefficient modulus was below 1e-14 (the phase
/// of a zero amplitude is undefined).
struct PhaseConditionResult {
  RealVector xi;
  double maxResidual = 0.0;
  bool satisfied = false;
  std::vector<std::pair<int, int>> excluded;
};

/// Integer exponents f_l of the shift-operator eigenphases, 1 <= l <= M.
long fourier_f(int l, int M);

/// The beta for which the phase condition can be met with xi_j = 0:
/// -pi(M-1) for even M, pi(M-1)^2/2 for odd M.
double canonical_beta(int M);

MeasurementBasis fourier_basis(const FourierBasisSpec& spec);

/// Jacobi polynomial P_n^{(a,b)} at argument 0 for integer parameters.
/// Evaluated by the binomial-convolution expansion, which is exact integer
/// arithmetic in double precision for the index ranges used here
/// (n + max(a,b,0) <= ~56); the three-term recurrence in n divides by zero
/// whenever a + b <= -2 and n >= -(a+b), which the d-matrix index map hits.
double jacobi_at_zero(int n, int a, int b);

/// d^j_{m',m}(pi/2) = <j,m'|e^{i pi J_y / 2}|j,m> for j = (M-1)/2, as a real
/// orthogonal matrix with both indices ascending (row = m', column = m).
RealMatrix wigner_d_half_pi(int M);

MeasurementBasis wigner_basis(const WignerBasisSpec& spec);

/// Worst violation of the mirror balance |b_{j,l}| = |b_{j,M-1-l}|.
double check_balance(const MeasurementBasis& basis);

/// By default each xi_j is free (circular mean of the pair sums), so the
/// check only asks that the sums be constant per outcome.  Passing pinnedXi
/// instead measures the deviations against prescribed constants;
/// wigner_pinned_xi supplies the values the d-matrix sign structure
/// determines, under which the state pair sums must vanish mod 2pi.
PhaseConditionResult check_phase_condition(const ProbeState& state,
                                           const MeasurementBasis& basis,
                                           double tolerance = tol::residual,
                                           const std::optional<RealVector>& pinnedXi = std::nullopt);

/// The xi_j determined by a balanced basis's own phase pair sums
/// (xi_j = -(theta_{j,l} + theta_{j,delta(l)}) mod 2pi, constant in l).
RealVector wigner_pinned_xi(const MeasurementBasis& basis);

/// Shift operator V over the basis (V|psi_j> = |psi_{j+1}>,
/// V|psi_M> = e^{i beta}|psi_1>) expressed in the generator eigenbasis.
Matrix shift_operator(const MeasurementBasis& basis, double beta);

}  // namespace qib
