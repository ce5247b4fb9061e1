#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qib {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

/// Absolute tolerances used throughout.  All are overridable where a
/// function takes an explicit tolerance argument.
namespace tol {
inline constexpr double norm = 1e-12;           // state normalization
inline constexpr double unitarity = 1e-12;      // basis unitarity
inline constexpr double admissibility = 1e-10;  // symmetry certification
inline constexpr double residual = 1e-10;       // saturation residuals
inline constexpr double saturation_rel = 1e-8;  // relative CFI gap
inline constexpr double probability_floor = 1e-14;
inline constexpr double qfi_floor = 1e-18;      // below this a state counts as degenerate
}  // namespace tol

struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct degenerate_state_error : std::domain_error {
  using std::domain_error::domain_error;
};
struct symmetry_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct normalization_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Discrete spectrum of the Hermitian generator restricted to the working
/// subspace: M >= 2 strictly increasing eigenvalues with integer labels.
/// Degenerate eigenvalues are rejected; direct sums with repetitions are
/// handled by the block-diagonal scenario on raw spectra instead.
class Generator {
 public:
  explicit Generator(RealVector eigenvalues);
  Generator(RealVector eigenvalues, std::vector<long> labels);

  int dim() const { return static_cast<int>(eigenvalues_.size()); }
  const RealVector& eigenvalues() const { return eigenvalues_; }
  const std::vector<long>& labels() const { return labels_; }

 private:
  RealVector eigenvalues_;
  std::vector<long> labels_;
};

/// Complex amplitudes of a pure probe state in the generator eigenbasis.
/// Unit norm within tol::norm is enforced at construction.
class ProbeState {
 public:
  explicit ProbeState(Vector amplitudes);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }
  RealVector moduli() const { return amplitudes_.cwiseAbs(); }
  RealVector phases() const;

 private:
  Vector amplitudes_;
};

/// M x M coefficient matrix of a projective measurement basis.  Entry (j,l)
/// is b_{j,l} = <A_l|psi_j>, i.e. row j holds the expansion of outcome j in
/// the generator eigenbasis.  Unitarity within tol::unitarity is enforced.
class MeasurementBasis {
 public:
  explicit MeasurementBasis(Matrix coefficients);

  int dim() const { return static_cast<int>(coefficients_.rows()); }
  const Matrix& coefficients() const { return coefficients_; }
  /// |psi_j> as a column vector in the generator eigenbasis.
  Vector outcome_vector(int j) const { return coefficients_.row(j).transpose(); }

 private:
  Matrix coefficients_;
};

/// Map an angle difference into (-pi, pi].
double wrap_angle(double angle);

double mean_A(const ProbeState& state, const Generator& gen);

/// Quantum Fisher information of the unitary family: 4 Var(A).
double qfi(const ProbeState& state, const Generator& gen);

/// e^{-i(A - <A>)eps}|phi>: entrywise phase rotation about the state mean.
ProbeState evolve(const ProbeState& state, const Generator& gen, double epsilon);

/// Auxiliary state |phi_-> = (-2i/sqrt(F_Q)) (A - <A>) |phi_+>.  Unit norm,
/// orthogonal to the input.  Throws degenerate_state_error when F_Q ~ 0.
ProbeState phi_minus(const ProbeState& state, const Generator& gen);

struct InnerProducts {
  Vector z;  // z_j = <psi_j|phi_+(eps)>
  Vector w;  // w_j = <psi_j|phi_-(eps)>
};

InnerProducts inner_products(const ProbeState& state, const Generator& gen,
                             const MeasurementBasis& basis, double epsilon);

RealVector probabilities(const ProbeState& state, const Generator& gen,
                         const MeasurementBasis& basis, double epsilon);

/// Apply the eigenvalue-dependent phase map e^{ih(A)} to a basis: column l
/// of the coefficient matrix picks up e^{i phases[l]}.
MeasurementBasis phase_mapped(const MeasurementBasis& basis, const RealVector& phases);

/// Raw-spectrum overloads.  These skip the Generator invariants so that
/// direct-sum compositions with repeated eigenvalues can reuse the same
/// arithmetic.  The eigenvalue vector and amplitude vector must have equal
/// length; nothing else is assumed.
double mean_A(const RealVector& eigenvalues, const Vector& amplitudes);
double qfi(const RealVector& eigenvalues, const Vector& amplitudes);
Vector evolved_amplitudes(const RealVector& eigenvalues, const Vector& amplitudes,
                          double epsilon);
InnerProducts inner_products(const RealVector& eigenvalues, const Vector& amplitudes,
                             const Matrix& basisCoefficients, double epsilon);

}  // namespace qib
