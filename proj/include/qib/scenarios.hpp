#pragma once

#include <cstdint>
#include <optional>

#include "qib/fisher.hpp"
#include "qib/measurements.hpp"
#include "qib/states.hpp"

namespace qib {

/// Grid request: explicit range or the commensurate default grid.
struct GridSpec {
  int count = 101;
  std::optional<std::pair<double, double>> range;  // inclusive endpoints

  RealVector materialize(const RealVector& eigenvalues, const Vector& amplitudes) const;
};

struct InterferometerConfig {
  int twoJplus1 = 3;
  std::optional<Vector> amplitudes;  // default: uniform 1/sqrt(M)
  double vartheta = 0.0;
  std::vector<double> rotationAngles = {0.0, 0.4, 1.3};
  GridSpec grid;
  SweepOptions sweep;
};

struct InterferometerResult {
  SaturationReport report;  // rotation angle 0
  std::vector<double> rotationAngles;
  std::vector<SaturationReport> rotated;
  double meanJz = 0.0;
  double qfi = 0.0;
  double maxCfiRotationDeviation = 0.0;  // pointwise vs the unrotated sweep
  bool passed = false;
};

/// Spin probe (A = J_z) measured in the rotated eigenbasis family
/// e^{-i phi J_z}|j, m_x>; saturation must hold for every rotation angle.
InterferometerResult interferometer_scenario(const InterferometerConfig& config);

struct BlockSpec {
  int twoJplus1 = 2;
  Vector amplitudes;  // conjugate symmetric within the block
  double weight = 1.0;
};

struct BlockDiagonalConfig {
  std::vector<BlockSpec> blocks;
  double vartheta = 0.0;
  GridSpec grid;
  SweepOptions sweep;
};

struct BlockDiagonalResult {
  SaturationReport report;
  double blockwiseQfi = 0.0;  // weighted second-moment formula
  bool passed = false;
};

/// Fluctuating photon number: direct sum of spin blocks, measured blockwise
/// in the rotated J_x eigenbases.  Eigenvalues may repeat across blocks, so
/// the Fisher quantities run on the raw direct-sum spectrum.
BlockDiagonalResult block_diagonal_scenario(const BlockDiagonalConfig& config);

struct BosonicConfig {
  int nbar = 20;
  double theta = 0.0;         // phase slope of the probe amplitudes
  double genericSlope = 0.3;  // slope used to exhibit Wigner-family failure
  GridSpec grid;
  SweepOptions sweep;
  double fidelityFloor = 0.98;
  double poissonResidualFloor = 1e-3;
};

struct BosonicResult {
  SaturationReport symmetrized;
  SaturationReport poisson;
  double fidelity = 0.0;            // vs the exact coherent state
  double poissonMaxResidual = 0.0;  // max Im[w z^*] over the Poisson sweep
  PhaseConditionResult wignerPhaseCheck;  // at the generic slope; must fail
  bool passed = false;
};

/// Number-operator probe: the symmetrized Gaussian state saturates with the
/// matched Fourier basis, the exact Poisson state does not, and the Wigner
/// family is ruled out by the phase condition at a generic slope.
BosonicResult bosonic_scenario(const BosonicConfig& config);

struct HeisenbergComparisonConfig {
  RealVector eigenvalues;  // default 0..10
  double meanA = 2.0;
  int samples = 1000;
  std::uint64_t seed = 1;

  HeisenbergComparisonConfig();
};

struct HeisenbergComparisonResult {
  double bound = 0.0;          // 4 (meanA - A_0)^2
  double analyticQfi = 0.0;    // of heisenberg_state
  double maxSampledQfi = 0.0;
  std::optional<Probe> bestSample;  // the maximizing sampled state
  int samples = 0;
  bool passed = false;
};

/// Samples random admissible states at fixed mean and verifies none exceeds
/// the analytic bound, which heisenberg_state attains exactly.
HeisenbergComparisonResult heisenberg_comparison(const HeisenbergComparisonConfig& config);

/// One random admissible probe on a symmetric sub-support about meanA
/// (random pair subset, random weights, uniform phases).  Shared by the
/// comparison scenario and the test corpora.
Probe sample_admissible_state(const Generator& gen, double meanA, std::uint64_t seed);

}  // namespace qib
