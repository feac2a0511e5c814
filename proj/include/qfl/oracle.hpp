#pragma once

#include <functional>
#include <vector>

#include "qfl/fock.hpp"
#include "qfl/lindblad.hpp"

namespace qfl {

inline constexpr int kLindbladModeLimit = 6;

// L(rho) = -i[H, rho] + sum_k (J_k rho J_k^* - 1/2 {J_k^* J_k, rho}) on the
// system Fock space.
struct DenseLindbladian {
  Matrix hamiltonian;
  std::vector<Matrix> jumps;
  IsomorphismTag iso = IsomorphismTag::e_sb;
  int modes = 0;

  Matrix apply(const Matrix& rho) const;
  // Column-major vectorization: vec(L(rho)) = superoperator() * vec(rho).
  Matrix superoperator() const;
};

// H_S = 1/2 F^* T_S F. With P = Theta M_B Theta^* = sum_k lambda_k u_k u_k^*,
// J_k = sqrt(lambda_k / 2) sum_a conj(u_k)_a gamma_a, right-multiplied by
// (-1)^{N_S} for baths that sit after the system in the Jordan-Wigner order
// (all of them for E_SB, the right bath for E_B1SB2). For E_B1SB2 the first
// `left_bath_modes` bath modes form the left bath.
DenseLindbladian build_lindbladian(const SemigroupSpec& spec, IsomorphismTag iso,
                                   int left_bath_modes = 0, const Tolerances& tol = {});

DenseState evolve_dense(const DenseLindbladian& lind, const DenseState& rho0, double t);
DenseState dense_stationary(const DenseLindbladian& lind);

using DenseChannel = std::function<DenseState(const DenseState&)>;

// rho -> Tr_B(U (rho (x) omega) U^*), U = exp(-i tau H_tot) with
// H_tot = 1/2 F^* [[T_S, Theta/sqrt(tau)], [Theta^*/sqrt(tau), T_B]] F over the
// joint modes ordered as `iso` prescribes. T_B defaults to zero.
DenseChannel repeated_interaction_step(const SemigroupSpec& spec, const DenseState& omega,
                                       double tau, IsomorphismTag iso = IsomorphismTag::e_sb,
                                       const std::optional<HamiltonianMatrix>& t_b = std::nullopt);

// Applies `step` round(t / tau) times.
DenseState iterate(const DenseChannel& step, const DenseState& rho0, int steps);

}  // namespace qfl
