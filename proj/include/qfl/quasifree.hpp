#pragma once

#include <vector>

#include "qfl/phase.hpp"

namespace qfl {

// Majorana entries are 1/2 tr(rho gamma_i gamma_j); creation/annihilation
// entries are tr(rho F_i F_j^*). Both forms are related by convert_basis.
struct CovarianceMatrix {
  Matrix entries;
  Basis basis = Basis::majorana;
  Eigen::Index modes() const { return entries.rows() / 2; }
};

// Upper-left L x L block of the creation/annihilation covariance,
// entries tr(rho c_i c_j^*).
struct SmallCovarianceMatrix {
  Matrix entries;
  Eigen::Index modes() const { return entries.rows(); }
};

inline constexpr int kWickMaxWord = 12;

double covariance_residual(const Matrix& m, Basis basis);
CovarianceMatrix validate_covariance(const Matrix& m, Basis basis, const Tolerances& tol = {});
SmallCovarianceMatrix validate_small_covariance(const Matrix& m, const Tolerances& tol = {});

CovarianceMatrix convert_basis(const CovarianceMatrix& m, Basis target,
                               const Tolerances& tol = {});

// (I + e^{-2 beta T})^{-1}, returned in the creation/annihilation basis.
CovarianceMatrix covariance_from_gibbs(const HamiltonianMatrix& t, double beta);
// (I + e^{-beta T0})^{-1} for a gauge-invariant T = diag(T0, -conj T0).
SmallCovarianceMatrix small_covariance_from_gibbs(const Matrix& t0, double beta);

SmallCovarianceMatrix small_from_full(const CovarianceMatrix& m);
// diag(M0, I - conj M0) in the creation/annihilation basis.
CovarianceMatrix full_from_small(const SmallCovarianceMatrix& m0);

// Majorana coefficient vectors x of phi(x) = sum_a x_a gamma_a.
Vector annihilation_word(Eigen::Index modes, Eigen::Index site);
Vector creation_word(Eigen::Index modes, Eigen::Index site);
Vector majorana_word(Eigen::Index modes, Eigen::Index index);

// tr(rho phi(x_1) ... phi(x_n)) for a quasi-free rho with covariance m, by
// explicit enumeration of pairings.
Complex wick_moment(const CovarianceMatrix& m, const std::vector<Vector>& word);

}  // namespace qfl
