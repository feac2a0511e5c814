#pragma once

#include <vector>

#include "qfl/quasifree.hpp"

namespace qfl {

inline constexpr int kDenseModeLimit = 12;

// Occupation basis |u_1, ..., u_n>, site 1 the most significant bit;
// c_i carries the string prod_{k<i} (-1)^{u_k}.
std::vector<Matrix> annihilation_ops(int modes);
// gamma_i = c_i + c_i^*, gamma_{i+n} = -i (c_i - c_i^*).
std::vector<Matrix> majorana_ops(int modes);
// (-1)^N
Matrix parity(int modes);

// prefactor * F^* T F with F the creation/annihilation column.
Matrix quadratic_hamiltonian(const HamiltonianMatrix& t, double prefactor);

struct DenseState {
  Matrix rho;
  int modes = 0;
};

DenseState gibbs_state(const Matrix& h, double beta, int modes);
DenseState maximally_mixed(int modes);
DenseState vacuum(int modes);
// Gibbs state of 1/2 F^* T F with (I + e^{-T})^{-1} = M. Eigenvalues of M
// are clamped to [1e-14, 1 - 1e-14].
DenseState quasi_free_state(const CovarianceMatrix& m);

// Identification of the joint Fock space. E_SB orders the Jordan-Wigner
// string system first, E_BS bath first, E_B1SB2 puts the system between a
// left and a right bath.
enum class IsomorphismTag { e_sb, e_bs, e_b1sb2 };

std::string_view to_string(IsomorphismTag iso);
IsomorphismTag parse_isomorphism(std::string_view name);

// Image of op_s * op_b. Odd parts of the later factor pick up the parity of
// the earlier one. The result lives on kron(S, B) for E_SB and kron(B, S) for
// E_BS.
Matrix embed(const Matrix& op_s, int system_modes, const Matrix& op_b, int bath_modes,
             IsomorphismTag iso);

// Traces out the bath factor; the joint state is laid out as `embed` does.
DenseState partial_trace_bath(const DenseState& rho, int system_modes, int bath_modes,
                              IsomorphismTag iso = IsomorphismTag::e_sb);

// Majorana basis.
CovarianceMatrix covariance_of(const DenseState& rho);

// Matrix kron(a, b).
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace qfl
