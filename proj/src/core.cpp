#include "qib/core.hpp"

#include <cmath>

namespace qib {

namespace {

void check_same_dim(int a, int b, const char* what) {
  if (a != b) {
    throw dimension_error(std::string(what) + ": dimension mismatch (" +
                          std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

Generator::Generator(RealVector eigenvalues)
    : Generator(std::move(eigenvalues), {}) {}

Generator::Generator(RealVector eigenvalues, std::vector<long> labels)
    : eigenvalues_(std::move(eigenvalues)), labels_(std::move(labels)) {
  const int m = static_cast<int>(eigenvalues_.size());
  if (m < 2) throw dimension_error("Generator: need at least two eigenvalues");
  for (int i = 1; i < m; ++i) {
    if (!(eigenvalues_[i] > eigenvalues_[i - 1])) {
      throw symmetry_error("Generator: eigenvalues must be strictly increasing");
    }
  }
  if (labels_.empty()) {
    labels_.resize(m);
    for (int i = 0; i < m; ++i) labels_[i] = i;
  } else {
    if (static_cast<int>(labels_.size()) != m) {
      throw dimension_error("Generator: labels/eigenvalues size mismatch");
    }
    for (int i = 1; i < m; ++i) {
      if (labels_[i] <= labels_[i - 1]) {
        throw symmetry_error("Generator: labels must be strictly increasing");
      }
    }
  }
}

ProbeState::ProbeState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw dimension_error("ProbeState: empty amplitude vector");
  const double n2 = amplitudes_.squaredNorm();
  if (std::abs(n2 - 1.0) > tol::norm) {
    throw normalization_error("ProbeState: |norm^2 - 1| = " + std::to_string(std::abs(n2 - 1.0)));
  }
}

RealVector ProbeState::phases() const {
  RealVector th(amplitudes_.size());
  for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) th[i] = std::arg(amplitudes_[i]);
  return th;
}

MeasurementBasis::MeasurementBasis(Matrix coefficients)
    : coefficients_(std::move(coefficients)) {
  if (coefficients_.rows() < 2 || coefficients_.rows() != coefficients_.cols()) {
    throw dimension_error("MeasurementBasis: coefficient matrix must be square, M >= 2");
  }
  const Matrix gram = coefficients_.adjoint() * coefficients_;
  const double dev =
      (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (dev > tol::unitarity) {
    throw normalization_error("MeasurementBasis: not unitary, max |B^+B - I| = " +
                              std::to_string(dev));
  }
}

double wrap_angle(double angle) {
  double a = std::remainder(angle, 2.0 * M_PI);  // (-pi, pi], remainder gives [-pi, pi]
  if (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

double mean_A(const RealVector& eigenvalues, const Vector& amplitudes) {
  check_same_dim(static_cast<int>(eigenvalues.size()), static_cast<int>(amplitudes.size()),
                 "mean_A");
  return amplitudes.cwiseAbs2().dot(eigenvalues);
}

double qfi(const RealVector& eigenvalues, const Vector& amplitudes) {
  const double mean = mean_A(eigenvalues, amplitudes);
  const RealVector shifted = eigenvalues.array() - mean;
  return 4.0 * amplitudes.cwiseAbs2().dot(shifted.cwiseAbs2());
}

Vector evolved_amplitudes(const RealVector& eigenvalues, const Vector& amplitudes,
                          double epsilon) {
  const double mean = mean_A(eigenvalues, amplitudes);
  Vector out(amplitudes.size());
  for (Eigen::Index l = 0; l < amplitudes.size(); ++l) {
    out[l] = std::polar(1.0, -(eigenvalues[l] - mean) * epsilon) * amplitudes[l];
  }
  return out;
}

InnerProducts inner_products(const RealVector& eigenvalues, const Vector& amplitudes,
                             const Matrix& basisCoefficients, double epsilon) {
  check_same_dim(static_cast<int>(basisCoefficients.cols()),
                 static_cast<int>(amplitudes.size()), "inner_products");
  const double fq = qfi(eigenvalues, amplitudes);
  if (fq <= tol::qfi_floor) {
    throw degenerate_state_error("inner_products: zero-variance state (F_Q = 0)");
  }
  const double mean = mean_A(eigenvalues, amplitudes);
  const Vector evolved = evolved_amplitudes(eigenvalues, amplitudes, epsilon);
  const Complex scale(0.0, -2.0 / std::sqrt(fq));
  const Vector minus =
      scale * (eigenvalues.array() - mean).matrix().cast<Complex>().cwiseProduct(evolved);
  InnerProducts ip;
  ip.z = basisCoefficients.conjugate() * evolved;
  ip.w = basisCoefficients.conjugate() * minus;
  return ip;
}

double mean_A(const ProbeState& state, const Generator& gen) {
  return mean_A(gen.eigenvalues(), state.amplitudes());
}

double qfi(const ProbeState& state, const Generator& gen) {
  return qfi(gen.eigenvalues(), state.amplitudes());
}

ProbeState evolve(const ProbeState& state, const Generator& gen, double epsilon) {
  check_same_dim(gen.dim(), state.dim(), "evolve");
  return ProbeState(evolved_amplitudes(gen.eigenvalues(), state.amplitudes(), epsilon));
}

ProbeState phi_minus(const ProbeState& state, const Generator& gen) {
  check_same_dim(gen.dim(), state.dim(), "phi_minus");
  const double fq = qfi(state, gen);
  if (fq <= tol::qfi_floor) {
    throw degenerate_state_error("phi_minus: zero-variance state (F_Q = 0)");
  }
  const double mean = mean_A(state, gen);
  const Complex scale(0.0, -2.0 / std::sqrt(fq));
  const Vector amps = scale * (gen.eigenvalues().array() - mean)
                                  .matrix()
                                  .cast<Complex>()
                                  .cwiseProduct(state.amplitudes());
  return ProbeState(amps);
}

InnerProducts inner_products(const ProbeState& state, const Generator& gen,
                             const MeasurementBasis& basis, double epsilon) {
  check_same_dim(gen.dim(), state.dim(), "inner_products");
  return inner_products(gen.eigenvalues(), state.amplitudes(), basis.coefficients(),
                        epsilon);
}

RealVector probabilities(const ProbeState& state, const Generator& gen,
                         const MeasurementBasis& basis, double epsilon) {
  check_same_dim(gen.dim(), state.dim(), "probabilities");
  check_same_dim(basis.dim(), state.dim(), "probabilities");
  const Vector evolved =
      evolved_amplitudes(gen.eigenvalues(), state.amplitudes(), epsilon);
  return (basis.coefficients().conjugate() * evolved).cwiseAbs2();
}

MeasurementBasis phase_mapped(const MeasurementBasis& basis, const RealVector& phases) {
  check_same_dim(basis.dim(), static_cast<int>(phases.size()), "phase_mapped");
  Matrix coeff = basis.coefficients();
  for (Eigen::Index l = 0; l < coeff.cols(); ++l) {
    coeff.col(l) *= std::polar(1.0, phases[l]);
  }
  return MeasurementBasis(std::move(coeff));
}

}  // namespace qib
