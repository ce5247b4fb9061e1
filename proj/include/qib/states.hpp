#pragma once

#include "qib/core.hpp"

namespace qib {

/// Admissibility data for a probe state: the mirror pairing l <-> M-1-l
/// (0-based), the state mean, and the worst-case violations of the
/// spectrum-symmetry and equal-pair-moduli conditions.
struct SymmetryCertificate {
  std::vector<int> pairing;  // pairing[l] = M-1-l for l = 0..ceil(M/2)-1
  double meanA = 0.0;
  double spectrumResidual = 0.0;  // max_l |A_l + A_{pair(l)} - 2 meanA|
  double moduliResidual = 0.0;    // max_l | |c_l| - |c_{pair(l)}| |
  bool admissible = false;
};

SymmetryCertificate certify(const ProbeState& state, const Generator& gen,
                            double tolerance = tol::admissibility);

/// Build an admissible state on a spectrum symmetric about meanA.  `moduli`
/// has ceil(M/2) strictly positive entries: one per mirror pair, plus the
/// center weight as the last entry when M is odd.  Squared moduli (mirrored
/// onto partners) must sum to 1 within 1e-9.  `phases` has M entries and is
/// unconstrained.
ProbeState build_symmetric_state(const Generator& gen, const RealVector& moduli,
                                 const RealVector& phases, double meanA);

/// Third standardized moment of A in the state; zero for admissible states.
double skewness(const ProbeState& state, const Generator& gen);

/// A state together with the generator it lives on.
struct Probe {
  Generator generator;
  ProbeState state;
};

/// (|A_0> + e^{i thetaK}|A_k>)/sqrt(2) with A_k = 2 meanA - A_0, returned on
/// the two-eigenvalue sub-generator {A_0, A_k}.  Throws symmetry_error when
/// the mirrored eigenvalue is absent, degenerate_state_error when meanA = A_0.
Probe heisenberg_state(const Generator& gen, double meanA, double thetaK);

/// Largest QFI over admissible states at fixed mean: 4 (meanA - A_0)^2.
double heisenberg_qfi(const Generator& gen, double meanA);

/// Gaussian-weight approximation of a coherent state with mean photon
/// number nbar, on the number spectrum 0..2*nbar.  The weights are mirror
/// symmetrized before normalization so admissibility is exact, and the
/// amplitude phases follow the linear slope theta (arg of the coherent
/// amplitude).
Probe truncated_coherent_state(int nbar, double theta = 0.0);

/// Exact Poisson-weight state with mean nbar, renormalized on 0..nmax, with
/// phase slope theta.  Not admissible; used as a negative control.
Probe poisson_state(double nbar, int nmax, double theta = 0.0);

/// Spin spectrum {-j..j} with M = 2j+1 levels (units hbar = 1).
Generator spin_generator(int twoJplus1);

/// Spin state over {-j..j} satisfying the conjugate-amplitude condition
/// c_m = conj(c_{-m}) within 1e-10 (index map m = l - (M+1)/2).  The result
/// has mean 0 and mirror-opposite phases.
Probe spin_symmetric_state(int twoJplus1, const Vector& amplitudes);

}  // namespace qib
