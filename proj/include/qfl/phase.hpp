#pragma once

#include <string_view>

#include "qfl/errors.hpp"
#include "qfl/types.hpp"

namespace qfl {

// Majorana: gamma_i = c_i + c_i^*, gamma_{i+L} = -i (c_i - c_i^*).
// Creation/annihilation: F = (c_1, ..., c_L, c_1^*, ..., c_L^*).
enum class Basis { majorana, creation_annihilation };

std::string_view to_string(Basis b);
Basis parse_basis(std::string_view name);

// One-body matrix T of a quadratic Hamiltonian (an element of QF(L)).
struct HamiltonianMatrix {
  Matrix entries;
  Basis basis = Basis::majorana;
  Eigen::Index modes() const { return entries.rows() / 2; }
};

// System-bath coupling, 2L x 2K.
struct CouplingMatrix {
  Matrix entries;
  Basis basis = Basis::majorana;
  Eigen::Index system_modes() const { return entries.rows() / 2; }
  Eigen::Index bath_modes() const { return entries.cols() / 2; }
};

struct BogoliubovTransform {
  Matrix entries;
  Basis basis = Basis::majorana;
};

// S = 1/2 [[I, I], [-iI, iI]] maps c/a coordinates to Majorana ones:
// X_majorana = S X_ca S^{-1}.
Matrix basis_change(Eigen::Index modes);
Matrix basis_change_inverse(Eigen::Index modes);

// Raw similarity on a 2L x 2K matrix (left size 2L, right size 2K).
Matrix to_majorana(const Matrix& ca);
Matrix to_creation_annihilation(const Matrix& majorana);

// Largest structural residual of each tagged type, already scaled so that the
// acceptance test is residual <= tol.structural.
double qf_residual(const Matrix& m, Basis basis);
double coupling_residual(const Matrix& m, Basis basis);
double bogoliubov_residual(const Matrix& m, Basis basis);

HamiltonianMatrix validate_qf(const Matrix& m, Basis basis, const Tolerances& tol = {});
CouplingMatrix validate_coupling(const Matrix& m, Basis basis, const Tolerances& tol = {});
BogoliubovTransform validate_bogoliubov(const Matrix& m, Basis basis,
                                        const Tolerances& tol = {});

HamiltonianMatrix convert_basis(const HamiltonianMatrix& m, Basis target,
                                const Tolerances& tol = {});
CouplingMatrix convert_basis(const CouplingMatrix& m, Basis target,
                             const Tolerances& tol = {});
BogoliubovTransform convert_basis(const BogoliubovTransform& m, Basis target,
                                  const Tolerances& tol = {});

struct BlockReduction {
  BogoliubovTransform u;  // creation/annihilation basis
  RealVector lambda;      // length L, descending, non-negative
};

// U^* T U = diag(Lambda, -Lambda) in the creation/annihilation basis.
BlockReduction block_reduce(const HamiltonianMatrix& t, const Tolerances& tol = {});

// Pade scaling and squaring. Throws NumericalFailure on non-finite output.
Matrix expm(const Matrix& m);

}  // namespace qfl
