#include "qib/states.hpp"

#include <cmath>

namespace qib {

namespace {

constexpr double kWeightSumTol = 1e-9;

int mirror(int l, int m) { return m - 1 - l; }

}  // namespace

SymmetryCertificate certify(const ProbeState& state, const Generator& gen,
                            double tolerance) {
  if (gen.dim() != state.dim()) {
    throw dimension_error("certify: state/generator dimension mismatch");
  }
  const int m = gen.dim();
  const int half = (m + 1) / 2;
  SymmetryCertificate cert;
  cert.pairing.resize(half);
  cert.meanA = mean_A(state, gen);
  const RealVector& a = gen.eigenvalues();
  const RealVector mod = state.moduli();
  for (int l = 0; l < half; ++l) {
    const int d = mirror(l, m);
    cert.pairing[l] = d;
    cert.spectrumResidual =
        std::max(cert.spectrumResidual, std::abs(a[l] + a[d] - 2.0 * cert.meanA));
    cert.moduliResidual = std::max(cert.moduliResidual, std::abs(mod[l] - mod[d]));
  }
  bool positive = true;
  for (int l = 0; l < m; ++l) positive = positive && mod[l] > 0.0;
  cert.admissible = positive && cert.spectrumResidual <= tolerance &&
                    cert.moduliResidual <= tolerance;
  // odd M additionally needs the center eigenvalue on the mean; this is the
  // l = half-1 self-pair above, so no extra check is required.
  return cert;
}

ProbeState build_symmetric_state(const Generator& gen, const RealVector& moduli,
                                 const RealVector& phases, double meanA) {
  const int m = gen.dim();
  const int half = (m + 1) / 2;
  const bool odd = (m % 2) != 0;
  if (static_cast<int>(moduli.size()) != half) {
    throw dimension_error("build_symmetric_state: need ceil(M/2) moduli");
  }
  if (static_cast<int>(phases.size()) != m) {
    throw dimension_error("build_symmetric_state: need M phases");
  }
  const RealVector& a = gen.eigenvalues();
  for (int l = 0; l < m / 2; ++l) {
    if (std::abs(a[l] + a[mirror(l, m)] - 2.0 * meanA) > tol::admissibility) {
      throw symmetry_error("build_symmetric_state: spectrum not symmetric about meanA");
    }
  }
  if (odd && std::abs(a[half - 1] - meanA) > tol::admissibility) {
    throw symmetry_error("build_symmetric_state: center eigenvalue differs from meanA");
  }
  double sum = 0.0;
  for (int l = 0; l < half; ++l) {
    if (!(moduli[l] > 0.0)) {
      throw normalization_error("build_symmetric_state: moduli must be strictly positive");
    }
    const bool center = odd && l == half - 1;
    sum += (center ? 1.0 : 2.0) * moduli[l] * moduli[l];
  }
  if (std::abs(sum - 1.0) > kWeightSumTol) {
    throw normalization_error("build_symmetric_state: squared moduli sum to " +
                              std::to_string(sum));
  }
  const double scale = 1.0 / std::sqrt(sum);
  Vector amps(m);
  for (int l = 0; l < half; ++l) {
    const int d = mirror(l, m);
    amps[l] = std::polar(moduli[l] * scale, phases[l]);
    amps[d] = std::polar(moduli[l] * scale, phases[d]);
  }
  return ProbeState(std::move(amps));
}

double skewness(const ProbeState& state, const Generator& gen) {
  const double var4 = qfi(state, gen);
  if (var4 <= tol::qfi_floor) {
    throw degenerate_state_error("skewness: zero-variance state");
  }
  const double mean = mean_A(state, gen);
  const double var = var4 / 4.0;
  const RealVector p = state.amplitudes().cwiseAbs2();
  const double m3 = p.dot(gen.eigenvalues().cwiseProduct(
      gen.eigenvalues().cwiseProduct(gen.eigenvalues())));
  return (m3 - mean * mean * mean - 3.0 * mean * var) / std::pow(var, 1.5);
}

Probe heisenberg_state(const Generator& gen, double meanA, double thetaK) {
  const RealVector& a = gen.eigenvalues();
  const double a0 = a[0];
  if (std::abs(meanA - a0) <= tol::admissibility) {
    throw degenerate_state_error("heisenberg_state: meanA = A_0 gives zero variance");
  }
  const double target = 2.0 * meanA - a0;
  int partner = -1;
  for (int i = 0; i < gen.dim(); ++i) {
    if (std::abs(a[i] - target) <= tol::admissibility) partner = i;
  }
  if (partner < 0) {
    throw symmetry_error("heisenberg_state: mirrored eigenvalue 2*meanA - A_0 not in spectrum");
  }
  RealVector sub(2);
  sub << a0, a[partner];
  Vector amps(2);
  amps << Complex(1.0 / std::sqrt(2.0), 0.0), std::polar(1.0 / std::sqrt(2.0), thetaK);
  return Probe{Generator(sub, {gen.labels()[0], gen.labels()[partner]}),
               ProbeState(std::move(amps))};
}

double heisenberg_qfi(const Generator& gen, double meanA) {
  const double a0 = gen.eigenvalues()[0];
  if (meanA < a0) {
    throw symmetry_error("heisenberg_qfi: meanA below the lowest eigenvalue");
  }
  const double d = meanA - a0;
  return 4.0 * d * d;
}

Probe truncated_coherent_state(int nbar, double theta) {
  if (nbar < 1) throw dimension_error("truncated_coherent_state: nbar must be >= 1");
  const int m = 2 * nbar + 1;
  RealVector g(m);
  for (int n = 0; n < m; ++n) {
    const double d = static_cast<double>(n - nbar);
    g[n] = std::exp(-d * d / (2.0 * nbar));
  }
  // exact mirror symmetrization; the Gaussian is already symmetric about
  // nbar on this support, this removes the last rounding asymmetry
  for (int n = 0; n < m / 2; ++n) {
    const double avg = 0.5 * (g[n] + g[m - 1 - n]);
    g[n] = g[m - 1 - n] = avg;
  }
  g /= g.sum();
  RealVector eigs = RealVector::LinSpaced(m, 0.0, static_cast<double>(m - 1));
  Vector amps(m);
  for (int n = 0; n < m; ++n) amps[n] = std::polar(std::sqrt(g[n]), n * theta);
  return Probe{Generator(std::move(eigs)), ProbeState(std::move(amps))};
}

Probe poisson_state(double nbar, int nmax, double theta) {
  if (!(nbar > 0.0)) throw dimension_error("poisson_state: nbar must be positive");
  if (nmax < 1) throw dimension_error("poisson_state: nmax must be >= 1");
  const int m = nmax + 1;
  RealVector logp(m);
  for (int n = 0; n < m; ++n) {
    logp[n] = -nbar + n * std::log(nbar) - std::lgamma(n + 1.0);
  }
  RealVector p = logp.array().exp();
  p /= p.sum();
  RealVector eigs = RealVector::LinSpaced(m, 0.0, static_cast<double>(nmax));
  Vector amps(m);
  for (int n = 0; n < m; ++n) amps[n] = std::polar(std::sqrt(p[n]), n * theta);
  return Probe{Generator(std::move(eigs)), ProbeState(std::move(amps))};
}

Generator spin_generator(int twoJplus1) {
  if (twoJplus1 < 2) throw dimension_error("spin_generator: need M >= 2");
  const double j = 0.5 * (twoJplus1 - 1);
  RealVector eigs(twoJplus1);
  for (int l = 0; l < twoJplus1; ++l) eigs[l] = -j + l;
  return Generator(std::move(eigs));
}

Probe spin_symmetric_state(int twoJplus1, const Vector& amplitudes) {
  Generator gen = spin_generator(twoJplus1);
  if (static_cast<int>(amplitudes.size()) != twoJplus1) {
    throw dimension_error("spin_symmetric_state: amplitude count != M");
  }
  for (int l = 0; l < (twoJplus1 + 1) / 2; ++l) {
    const int d = mirror(l, twoJplus1);
    if (std::abs(amplitudes[l] - std::conj(amplitudes[d])) > tol::admissibility) {
      throw symmetry_error("spin_symmetric_state: c_m != conj(c_{-m}) at m = " +
                           std::to_string(l - 0.5 * (twoJplus1 - 1)));
    }
  }
  const double n2 = amplitudes.squaredNorm();
  if (std::abs(n2 - 1.0) > kWeightSumTol) {
    throw normalization_error("spin_symmetric_state: amplitudes not normalized");
  }
  return Probe{std::move(gen), ProbeState(amplitudes / std::sqrt(n2))};
}

}  // namespace qib
