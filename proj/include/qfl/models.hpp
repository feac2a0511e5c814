#pragma once

#include <cstdint>

#include "qfl/lindblad.hpp"

namespace qfl {

// Nearest-neighbour shift D with D(i, i+1) = 1.
RealMatrix shift_matrix(Eigen::Index length);

// Theta = i I (Majorana) and M_B the thermal covariance of H_S = 1/2 F^* T_S F
// at inverse temperature beta.
SemigroupSpec thermalization_model(const HamiltonianMatrix& t_s, double beta);

// Bath Hamiltonian N_B: M_B0 = (1 + e^{-beta})^{-1} I.
GaugeInvariantSpec simple_bath_model(const Matrix& t_s0, const Matrix& theta0, double beta);
double simple_bath_scalar(double beta);

struct ChainParams {
  Eigen::Index length = 3;
  double theta1 = 1.0;
  double thetaL = 1.0;
  double n1 = 1.0;
  double nL = 0.0;
};

// Stationary small covariance diag(p1, pm, ..., pm, pL) + i c (D - D^T).
struct ChainStationaryPrediction {
  double s = 0.0;
  double p1 = 0.0, pm = 0.0, pL = 0.0;
  double current = 0.0;
  // Coefficients of n1 and nL in p1, pm, pL.
  double w1_p1 = 0.0, wL_p1 = 0.0;
  double w1_pm = 0.0, wL_pm = 0.0;
  double w1_pL = 0.0, wL_pL = 0.0;

  Matrix matrix(Eigen::Index length) const;
};

struct TwoBathChain {
  GaugeInvariantSpec spec;
  ChainStationaryPrediction prediction;
};

ChainStationaryPrediction chain_prediction(const ChainParams& params);
TwoBathChain two_bath_chain(const ChainParams& params);

GaugeInvariantSpec one_end_chain(Eigen::Index length, double theta, double m_b0);
// Site 0 is the centre, coupled to every leaf and to the bath.
GaugeInvariantSpec star_model(Eigen::Index length, double theta, double m_b0);

struct XYParams {
  Eigen::Index length = 4;
  double kappa = 0.5;
  double h = 0.0;
  double theta1 = 1.0;
  double theta2 = 1.0;
  // tr(rho c c^*) of the left and right bath spin after Jordan-Wigner.
  double m1 = 1.0;
  double m2 = 0.0;
};

struct XYModel {
  SemigroupSpec spec;
  RealMatrix c_t;       // T_S = [[0, -i C_T], [i C_T^T, 0]]
  RealMatrix c_top;     // Theta = [[0, -i C_top], [i C_bottom, 0]]
  RealMatrix c_bottom;
  int left_bath_modes = 1;
};

// Jordan-Wigner order (left bath, chain, right bath). Bath Majorana columns
// are ordered (gamma_B1, gamma_B2, gamma'_B1, gamma'_B2).
XYModel xy_chain(const XYParams& params);

// For kappa = 0 the XY chain is the two-bath chain with couplings theta/sqrt 2
// and bath occupations (m1, m2), up to the gauge c_j -> (-1)^j c_j. The XY
// drift is half the chain's, so stationary states agree and rates halve.
ChainParams xy_equivalent_chain(const XYParams& params);

// Random R, W with standard normal entries and a random thermal bath.
SemigroupSpec random_semigroup(Eigen::Index system_modes, Eigen::Index bath_modes,
                               std::uint64_t seed);

}  // namespace qfl
