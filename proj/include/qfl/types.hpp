#pragma once

#include <complex>

#include <Eigen/Core>

namespace qfl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

// Numerical thresholds shared by every module. Each field is surfaced as a
// CLI flag; reports echo the values actually used.
struct Tolerances {
  // Structural validation, relative to the matrix max-norm.
  double structural = 1e-9;
  // Reconstruction residuals and restricted-operator checks.
  double numeric = 1e-10;
  // Relative pivot below which the vectorized Lyapunov operator is singular.
  double singular_pivot = 1e-12;
  // Safety factor in the numerical-rank threshold n * eps * sigma_max * factor.
  double rank_factor = 64.0;
  // Eigenvalues of T_S closer than this belong to one cluster.
  double cluster_gap = 1e-8;
  // Covariance eigenvalues within this distance of 1 count as pinned empty.
  double pin = 1e-7;
};

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace qfl
