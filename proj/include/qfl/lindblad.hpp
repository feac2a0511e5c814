#pragma once

#include <optional>

#include "qfl/quasifree.hpp"

namespace qfl {

// (T_S, Theta, M_B) with drift G = -i T_S - 1/2 Theta Theta^* and
// inhomogeneity P = Theta M_B Theta^*, all held in the Majorana basis.
// The covariance flow is dM/dt = G M + M G^* + P.
class SemigroupSpec {
 public:
  SemigroupSpec(const HamiltonianMatrix& t_s, const CouplingMatrix& theta,
                const CovarianceMatrix& m_b, const Tolerances& tol = {});

  Eigen::Index system_modes() const { return t_s_.rows() / 2; }
  Eigen::Index bath_modes() const { return theta_.cols() / 2; }

  const Matrix& t_s() const { return t_s_; }
  const Matrix& theta() const { return theta_; }
  const Matrix& m_b() const { return m_b_; }
  const Matrix& drift() const { return g_; }
  const Matrix& inhomogeneity() const { return p_; }

  HamiltonianMatrix hamiltonian() const { return {t_s_, Basis::majorana}; }
  CouplingMatrix coupling() const { return {theta_, Basis::majorana}; }
  CovarianceMatrix bath_covariance() const { return {m_b_, Basis::majorana}; }

 private:
  Matrix t_s_, theta_, m_b_, g_, p_;
};

// Gauge-invariant data: T_S = diag(T0, -conj T0), Theta = diag(Theta0,
// -conj Theta0), M_B = diag(M_B0, I - conj M_B0) in the c/a basis.
struct GaugeInvariantSpec {
  Matrix t_s0;
  Matrix theta0;
  SmallCovarianceMatrix m_b0;

  Eigen::Index modes() const { return t_s0.rows(); }
  Eigen::Index bath_modes() const { return theta0.cols(); }
  Matrix drift() const;
  Matrix inhomogeneity() const;
  void validate(const Tolerances& tol = {}) const;
  SemigroupSpec lift(const Tolerances& tol = {}) const;
};

struct ErgodicityReport {
  Eigen::Index dimension = 0;
  Eigen::Index kalman_rank = 0;
  bool kalman_full = false;
  bool spectral_full = false;
  bool unique_stationary = false;
  bool converges = false;
  double spectral_abscissa = 0.0;
  std::optional<double> offending_eigenvalue;
};

enum class PropagationMethod { automatic, closed_form, van_loan };

// Solves G X + X G^* = -P by Kronecker vectorization. Throws
// NonUniqueStationary when the operator is singular.
Matrix solve_lyapunov(const Matrix& g, const Matrix& p, const Tolerances& tol = {});

// Affine flow X' = G X + X G^* + P from x0 over time t.
Matrix propagate_affine(const Matrix& g, const Matrix& p, const Matrix& x0, double t,
                        PropagationMethod method = PropagationMethod::automatic,
                        const Tolerances& tol = {});

// Output uses the basis of m0.
CovarianceMatrix propagate(const SemigroupSpec& spec, const CovarianceMatrix& m0, double t,
                           PropagationMethod method = PropagationMethod::automatic,
                           const Tolerances& tol = {});

// Majorana basis.
CovarianceMatrix stationary(const SemigroupSpec& spec, const Tolerances& tol = {});

// Numerical rank of [B, T^ B, ..., T^^{n-1} B] with T^ = T / ||T||_2.
Eigen::Index kalman_rank(const Matrix& t, const Matrix& b, const Tolerances& tol = {});

ErgodicityReport ergodicity(const SemigroupSpec& spec, const Tolerances& tol = {});
// Statements refer to the small covariance M0: converges means M0(t) has a
// limit for every initial state.
ErgodicityReport ergodicity_gauge_invariant(const GaugeInvariantSpec& spec,
                                            const Tolerances& tol = {});

struct GaugeInvariantState {
  SmallCovarianceMatrix m0;
  Matrix a0;  // tr(rho c_i c_j)
};

GaugeInvariantState propagate_gauge_invariant(
    const GaugeInvariantSpec& spec, const SmallCovarianceMatrix& m0, const Matrix& a0, double t,
    PropagationMethod method = PropagationMethod::automatic, const Tolerances& tol = {});
SmallCovarianceMatrix stationary_gauge_invariant(const GaugeInvariantSpec& spec,
                                                 const Tolerances& tol = {});

// Kalman test for T_S = [[0, -i C_T], [i C_T^T, 0]] and
// Theta = [[0, -i C_top], [i C_bottom, 0]] (Majorana basis, real C's).
bool real_case_kalman(const RealMatrix& c_t, const RealMatrix& c_top,
                      const RealMatrix& c_bottom, const Tolerances& tol = {});
bool real_case_kalman(const RealMatrix& c_t, const RealMatrix& c_theta,
                      const Tolerances& tol = {});

struct SupportDecomposition {
  Eigen::Index pinned = 0;    // modes with tr(rho c c^*) = 1, i.e. empty
  Eigen::Index faithful = 0;
  BogoliubovTransform u;      // c/a basis; pinned modes first
  RealVector eigenvalues;     // of M in the rotated modes, length L
};

SupportDecomposition support_decomposition(const CovarianceMatrix& m,
                                           const Tolerances& tol = {});

}  // namespace qfl
