#include "qib/fisher.hpp"

#include <cmath>

namespace qib {

namespace {

constexpr double kDerivativeNoise = 1e-12;

struct PointDiagnostics {
  double cfi = 0.0;
  double imResidual = 0.0;
  bool flagged = false;
};

// One grid point from the inner products: CFI terms are
// F_Q Re[w_j z_j^*]^2 / p_j, since dp_j/deps = sqrt(F_Q) Re[w_j z_j^*].
// At nodes of p_j the term tends to F_Q |w_j|^2 (w_j is parallel to
// zdot_j by construction), which is used whenever p_j is below the floor;
// if Re[w z^*] is not negligible there the point is flagged.
PointDiagnostics point_diagnostics(const InnerProducts& ip, double fq, double floor) {
  PointDiagnostics out;
  for (Eigen::Index j = 0; j < ip.z.size(); ++j) {
    const Complex wz = ip.w[j] * std::conj(ip.z[j]);
    const double p = std::norm(ip.z[j]);
    out.imResidual = std::max(out.imResidual, std::abs(wz.imag()));
    if (p >= floor) {
      out.cfi += fq * wz.real() * wz.real() / p;
    } else {
      out.cfi += fq * std::norm(ip.w[j]);
      if (std::abs(std::sqrt(fq) * wz.real() / 2.0) > kDerivativeNoise) out.flagged = true;
    }
  }
  return out;
}

double require_positive_qfi(const RealVector& eigenvalues, const Vector& amplitudes,
                            const char* what) {
  const double fq = qfi(eigenvalues, amplitudes);
  if (fq <= tol::qfi_floor) {
    throw degenerate_state_error(std::string(what) + ": zero-variance state");
  }
  return fq;
}

}  // namespace

Matrix SLDFamily::assembled() const {
  if (!freeBlock) return particular;
  const Eigen::Index m = particular.rows();
  const Matrix completion = orthoBasis.rightCols(m - 2);
  return particular + completion * (*freeBlock) * completion.adjoint();
}

SLDFamily sld_assemble(const ProbeState& state, const Generator& gen,
                       const std::optional<Matrix>& freeBlock) {
  if (gen.dim() != state.dim()) {
    throw dimension_error("sld_assemble: state/generator dimension mismatch");
  }
  const int m = state.dim();
  const double fq = qfi(state, gen);
  if (fq <= tol::qfi_floor) {
    throw degenerate_state_error("sld_assemble: zero-variance state");
  }
  if (freeBlock) {
    if (freeBlock->rows() != m - 2 || freeBlock->cols() != m - 2) {
      throw dimension_error("sld_assemble: free block must be (M-2) x (M-2)");
    }
    if ((*freeBlock - freeBlock->adjoint()).cwiseAbs().maxCoeff() > tol::norm) {
      throw symmetry_error("sld_assemble: free block must be Hermitian");
    }
  }
  const Vector plus = state.amplitudes();
  const Vector minus = phi_minus(state, gen).amplitudes();

  SLDFamily family;
  family.particular = std::sqrt(fq) * (plus * minus.adjoint() + minus * plus.adjoint());
  family.freeBlock = freeBlock;
  family.orthoBasis = Matrix(m, m);
  family.orthoBasis.col(0) = plus;
  family.orthoBasis.col(1) = minus;
  if (m > 2) {
    // complete with the orthonormal eigenvectors of the complement projector
    Matrix projector = Matrix::Identity(m, m) - plus * plus.adjoint() - minus * minus.adjoint();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(projector);
    // eigenvalues ascend; the last M-2 are 1
    family.orthoBasis.rightCols(m - 2) = solver.eigenvectors().rightCols(m - 2);
  }
  return family;
}

LambdaValues lambda_values(const ProbeState& state, const Generator& gen,
                           const MeasurementBasis& basis, double epsilon) {
  const double fq = qfi(state, gen);
  if (fq <= tol::qfi_floor) {
    throw degenerate_state_error("lambda_values: zero-variance state");
  }
  const InnerProducts ip = inner_products(state, gen, basis, epsilon);
  LambdaValues out;
  out.values = Vector::Zero(ip.z.size());
  out.supported.assign(ip.z.size(), false);
  const double root = std::sqrt(fq);
  for (Eigen::Index j = 0; j < ip.z.size(); ++j) {
    if (std::norm(ip.z[j]) < tol::probability_floor) continue;
    out.values[j] = root * ip.w[j] / ip.z[j];
    out.supported[j] = true;
    out.maxAbsImag = std::max(out.maxAbsImag, std::abs(out.values[j].imag()));
  }
  return out;
}

RealVector probability_derivatives(const ProbeState& state, const Generator& gen,
                                   const MeasurementBasis& basis, double epsilon) {
  const double fq = require_positive_qfi(gen.eigenvalues(), state.amplitudes(),
                                         "probability_derivatives");
  const InnerProducts ip = inner_products(state, gen, basis, epsilon);
  RealVector dp(ip.z.size());
  for (Eigen::Index j = 0; j < ip.z.size(); ++j) {
    dp[j] = std::sqrt(fq) * (ip.w[j] * std::conj(ip.z[j])).real();
  }
  return dp;
}

double classical_fisher(const RealVector& eigenvalues, const Vector& amplitudes,
                        const Matrix& basisCoefficients, double epsilon) {
  const double fq = require_positive_qfi(eigenvalues, amplitudes, "classical_fisher");
  const InnerProducts ip = inner_products(eigenvalues, amplitudes, basisCoefficients, epsilon);
  return point_diagnostics(ip, fq, tol::probability_floor).cfi;
}

double classical_fisher(const ProbeState& state, const Generator& gen,
                        const MeasurementBasis& basis, double epsilon) {
  if (gen.dim() != state.dim() || basis.dim() != state.dim()) {
    throw dimension_error("classical_fisher: dimension mismatch");
  }
  return classical_fisher(gen.eigenvalues(), state.amplitudes(), basis.coefficients(),
                          epsilon);
}

double saturation_residual(const RealVector& eigenvalues, const Vector& amplitudes,
                           const Matrix& basisCoefficients, double epsilon) {
  const double fq = require_positive_qfi(eigenvalues, amplitudes, "saturation_residual");
  const InnerProducts ip = inner_products(eigenvalues, amplitudes, basisCoefficients, epsilon);
  return point_diagnostics(ip, fq, tol::probability_floor).imResidual;
}

double saturation_residual(const ProbeState& state, const Generator& gen,
                           const MeasurementBasis& basis, double epsilon) {
  if (gen.dim() != state.dim() || basis.dim() != state.dim()) {
    throw dimension_error("saturation_residual: dimension mismatch");
  }
  return saturation_residual(gen.eigenvalues(), state.amplitudes(), basis.coefficients(),
                             epsilon);
}

double rewritten_condition_check(const ProbeState& state, const Generator& gen,
                                 const MeasurementBasis& basis, double epsilon) {
  const int m = state.dim();
  if (gen.dim() != m || basis.dim() != m) {
    throw dimension_error("rewritten_condition_check: dimension mismatch");
  }
  require_positive_qfi(gen.eigenvalues(), state.amplitudes(), "rewritten_condition_check");
  const InnerProducts ip = inner_products(state, gen, basis, epsilon);
  for (int j = 0; j < m; ++j) {
    if (std::norm(ip.z[j]) < tol::probability_floor) {
      throw degenerate_state_error(
          "rewritten_condition_check: outcome probability below floor at j = " +
          std::to_string(j + 1));
    }
  }
  const double mean = mean_A(state, gen);
  const Matrix v = basis.coefficients().conjugate() *
                   gen.eigenvalues().cast<Complex>().asDiagonal() *
                   basis.coefficients().transpose();
  double worst = 0.0;
  for (int j = 0; j < m; ++j) {
    const double alphaJ = std::arg(ip.z[j]);
    const double absZj = std::abs(ip.z[j]);
    double lhs = 0.0;
    for (int jp = 0; jp < m; ++jp) {
      if (jp == j) continue;
      lhs += std::abs(v(j, jp)) * (std::abs(ip.z[jp]) / absZj) *
             std::cos(std::arg(ip.z[jp]) - alphaJ + std::arg(v(j, jp)));
    }
    const double rhs = mean - v(j, j).real();
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double SaturationReport::maxRelativeGap() const {
  double gap = 0.0;
  for (Eigen::Index i = 0; i < cfi.size(); ++i) {
    gap = std::max(gap, (qfi - cfi[i]) / qfi);
  }
  return gap;
}

double SaturationReport::maxImResidual() const {
  return imResidual.size() == 0 ? 0.0 : imResidual.maxCoeff();
}

SaturationReport saturation_sweep(const RealVector& eigenvalues, const Vector& amplitudes,
                                  const Matrix& basisCoefficients, const RealVector& grid,
                                  const SweepOptions& options) {
  if (grid.size() == 0) throw dimension_error("saturation_sweep: empty grid");
  const double fq = require_positive_qfi(eigenvalues, amplitudes, "saturation_sweep");
  const double root = std::sqrt(fq);
  SaturationReport report;
  report.qfi = fq;
  report.epsilons = grid;
  report.cfi.resize(grid.size());
  report.imResidual.resize(grid.size());
  report.lambdaImagMax.resize(grid.size());
  report.flagged.assign(grid.size(), false);
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const InnerProducts ip =
        inner_products(eigenvalues, amplitudes, basisCoefficients, grid[i]);
    const PointDiagnostics diag =
        point_diagnostics(ip, fq, options.probabilityFloor);
    report.cfi[i] = diag.cfi;
    report.imResidual[i] = diag.imResidual;
    report.flagged[i] = diag.flagged;
    double lambdaImag = 0.0;
    for (Eigen::Index j = 0; j < ip.z.size(); ++j) {
      if (std::norm(ip.z[j]) < options.probabilityFloor) continue;
      lambdaImag = std::max(lambdaImag, std::abs((root * ip.w[j] / ip.z[j]).imag()));
    }
    report.lambdaImagMax[i] = lambdaImag;
  }
  report.saturated = report.maxRelativeGap() <= options.saturationRelTol;
  return report;
}

SaturationReport saturation_sweep(const ProbeState& state, const Generator& gen,
                                  const MeasurementBasis& basis, const RealVector& grid,
                                  const SweepOptions& options) {
  if (gen.dim() != state.dim() || basis.dim() != state.dim()) {
    throw dimension_error("saturation_sweep: dimension mismatch");
  }
  return saturation_sweep(gen.eigenvalues(), state.amplitudes(), basis.coefficients(),
                          grid, options);
}

RealVector uniform_grid(double lo, double hi, int count) {
  if (count < 1) throw dimension_error("uniform_grid: count must be >= 1");
  if (count == 1) {
    RealVector g(1);
    g[0] = lo;
    return g;
  }
  return RealVector::LinSpaced(count, lo, hi);
}

RealVector default_epsilon_grid(const RealVector& eigenvalues, const Vector& amplitudes,
                                int count) {
  if (count < 1) throw dimension_error("default_epsilon_grid: count must be >= 1");
  const double mean = mean_A(eigenvalues, amplitudes);
  std::vector<double> shifts;
  double scale = 0.0;
  for (Eigen::Index l = 0; l < eigenvalues.size(); ++l) {
    scale = std::max(scale, std::abs(eigenvalues[l] - mean));
  }
  for (Eigen::Index l = 0; l < eigenvalues.size(); ++l) {
    const double s = std::abs(eigenvalues[l] - mean);
    if (s > 1e-12 * std::max(scale, 1.0)) shifts.push_back(s);
  }
  if (!shifts.empty()) {
    // gcd-like common spacing via Euclid on reals
    const double cutoff = 1e-9 * scale;
    double g = shifts[0];
    for (double s : shifts) {
      double a = std::max(g, s), b = std::min(g, s);
      while (b > cutoff) {
        const double r = std::fmod(a, b);
        a = b;
        b = r;
      }
      g = a;
    }
    bool commensurate = g > cutoff;
    for (double s : shifts) {
      const double q = s / g;
      if (std::abs(q - std::round(q)) > 1e-6) commensurate = false;
    }
    if (commensurate) {
      const double period = 2.0 * M_PI / g;
      RealVector grid(count);
      for (int i = 0; i < count; ++i) grid[i] = period * i / count;
      return grid;
    }
  }
  return uniform_grid(-M_PI, M_PI, count);
}

RealVector default_epsilon_grid(const ProbeState& state, const Generator& gen, int count) {
  return default_epsilon_grid(gen.eigenvalues(), state.amplitudes(), count);
}

}  // namespace qib
