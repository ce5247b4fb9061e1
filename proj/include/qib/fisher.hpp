#pragma once

#include <optional>

#include "qib/core.hpp"

namespace qib {

/// The family of symmetric-logarithmic-derivative operators at epsilon = 0.
/// `particular` is the rank-2 member sqrt(F_Q)(|+><-| + |-><+|); adding any
/// Hermitian block on the orthogonal complement (columns 3..M of orthoBasis)
/// gives another solution of the same Sylvester equation.
struct SLDFamily {
  Matrix particular;
  std::optional<Matrix> freeBlock;  // (M-2) x (M-2) Hermitian
  Matrix orthoBasis;                // columns: |phi_+>, |phi_->, completion

  /// particular + C * freeBlock * C^+ with C = orthoBasis columns 3..M.
  Matrix assembled() const;
};

SLDFamily sld_assemble(const ProbeState& state, const Generator& gen,
                       const std::optional<Matrix>& freeBlock = std::nullopt);

/// lambda_j = sqrt(F_Q) w_j / z_j for outcomes with p_j above the
/// probability floor; others are reported unsupported with value 0.
struct LambdaValues {
  Vector values;
  std::vector<bool> supported;
  double maxAbsImag = 0.0;  // over supported outcomes
};

LambdaValues lambda_values(const ProbeState& state, const Generator& gen,
                           const MeasurementBasis& basis, double epsilon);

/// Analytic dp_j/deps = 2 Re[zdot_j z_j^*], zdot_j = -i<psi_j|(A-<A>)|phi_+(eps)>.
RealVector probability_derivatives(const ProbeState& state, const Generator& gen,
                                   const MeasurementBasis& basis, double epsilon);

double classical_fisher(const ProbeState& state, const Generator& gen,
                        const MeasurementBasis& basis, double epsilon);

/// max_j |Im[w_j z_j^*]|; zero exactly when CFI = F_Q at this epsilon.
double saturation_residual(const ProbeState& state, const Generator& gen,
                           const MeasurementBasis& basis, double epsilon);

/// max_j |LHS - RHS| of the off-diagonal cosine-sum saturation identity,
/// with v_{j,j'} = <psi_j|A|psi_j'>.  Requires every p_j above the floor.
double rewritten_condition_check(const ProbeState& state, const Generator& gen,
                                 const MeasurementBasis& basis, double epsilon);

struct SweepOptions {
  double saturationRelTol = tol::saturation_rel;
  double residualTol = tol::residual;
  double probabilityFloor = tol::probability_floor;
};

struct SaturationReport {
  RealVector epsilons;
  RealVector cfi;
  double qfi = 0.0;
  RealVector imResidual;      // max_j |Im[w_j z_j^*]| per grid point
  RealVector lambdaImagMax;   // max_j |Im lambda_j| over supported outcomes
  std::vector<bool> flagged;  // conditioning warning at this grid point
  bool saturated = false;

  double maxRelativeGap() const;
  double maxImResidual() const;
};

SaturationReport saturation_sweep(const ProbeState& state, const Generator& gen,
                                  const MeasurementBasis& basis, const RealVector& grid,
                                  const SweepOptions& options = {});

/// Uniform grid with both endpoints included (count >= 2) or {lo} (count 1).
RealVector uniform_grid(double lo, double hi, int count);

/// Default sweep grid: when the mean-shifted spectrum is commensurate with
/// gcd-like spacing g, `count` points over one period [0, 2pi/g); otherwise
/// `count` points over [-pi, pi].
RealVector default_epsilon_grid(const RealVector& eigenvalues, const Vector& amplitudes,
                                int count = 101);
RealVector default_epsilon_grid(const ProbeState& state, const Generator& gen,
                                int count = 101);

/// Raw-spectrum overloads for direct-sum compositions.
double classical_fisher(const RealVector& eigenvalues, const Vector& amplitudes,
                        const Matrix& basisCoefficients, double epsilon);
double saturation_residual(const RealVector& eigenvalues, const Vector& amplitudes,
                           const Matrix& basisCoefficients, double epsilon);
SaturationReport saturation_sweep(const RealVector& eigenvalues, const Vector& amplitudes,
                                  const Matrix& basisCoefficients, const RealVector& grid,
                                  const SweepOptions& options = {});

}  // namespace qib
