#include "qfl/oracle.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qfl {

using Eigen::Index;

namespace {

constexpr double kJumpClamp = 1e-8;

void add_jumps(std::vector<Matrix>& jumps, const Matrix& p, const std::vector<Matrix>& gamma,
               const Matrix* twist) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (p + p.adjoint()));
  const RealVector& lam = eig.eigenvalues();
  const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  for (Index k = 0; k < lam.size(); ++k) {
    if (lam(k) < -kJumpClamp * scale) {
      throw NotPsd("Theta M_B Theta^* has eigenvalue " + std::to_string(lam(k)));
    }
    if (lam(k) <= 1e-14 * scale) continue;
    const Vector u = eig.eigenvectors().col(k);
    Matrix j = Matrix::Zero(gamma[0].rows(), gamma[0].cols());
    for (Index a = 0; a < u.size(); ++a) j += std::conj(u(a)) * gamma[a];
    j *= std::sqrt(lam(k) / 2.0);
    if (twist) j = j * (*twist);
    jumps.push_back(std::move(j));
  }
}

// Selects the Majorana columns of bath modes [first, first + count).
Matrix bath_columns(const Matrix& theta, Index first, Index count) {
  const Index K = theta.cols() / 2;
  Matrix out(theta.rows(), 2 * count);
  out.leftCols(count) = theta.middleCols(first, count);
  out.rightCols(count) = theta.middleCols(K + first, count);
  return out;
}

Matrix bath_block(const Matrix& m_b, Index first, Index count) {
  const Index K = m_b.rows() / 2;
  std::vector<Index> idx;
  for (Index i = 0; i < count; ++i) idx.push_back(first + i);
  for (Index i = 0; i < count; ++i) idx.push_back(K + first + i);
  Matrix out(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = m_b(idx[i], idx[j]);
  }
  return out;
}

}  // namespace

Matrix DenseLindbladian::apply(const Matrix& rho) const {
  Matrix out = -kI * (hamiltonian * rho - rho * hamiltonian);
  for (const Matrix& j : jumps) {
    const Matrix jd = j.adjoint();
    const Matrix jdj = jd * j;
    out += j * rho * jd - 0.5 * (jdj * rho + rho * jdj);
  }
  return out;
}

Matrix DenseLindbladian::superoperator() const {
  const Index d = hamiltonian.rows();
  const Matrix id = Matrix::Identity(d, d);
  Matrix s = -kI * (kron(id, hamiltonian) - kron(hamiltonian.transpose(), id));
  for (const Matrix& j : jumps) {
    const Matrix jdj = j.adjoint() * j;
    s += kron(j.conjugate(), j) - 0.5 * kron(id, jdj) - 0.5 * kron(jdj.transpose(), id);
  }
  return s;
}

DenseLindbladian build_lindbladian(const SemigroupSpec& spec, IsomorphismTag iso,
                                   int left_bath_modes, const Tolerances& tol) {
  const int L = static_cast<int>(spec.system_modes());
  const int K = static_cast<int>(spec.bath_modes());
  if (L > kLindbladModeLimit) {
    throw TooLarge("dense Lindbladian limited to " + std::to_string(kLindbladModeLimit) +
                   " system modes");
  }
  DenseLindbladian out;
  out.iso = iso;
  out.modes = L;
  out.hamiltonian = quadratic_hamiltonian(spec.hamiltonian(), 0.5);
  const std::vector<Matrix> gamma = majorana_ops(L);
  const Matrix par = parity(L);

  switch (iso) {
    case IsomorphismTag::e_sb:
      add_jumps(out.jumps, spec.inhomogeneity(), gamma, &par);
      break;
    case IsomorphismTag::e_bs:
      add_jumps(out.jumps, spec.inhomogeneity(), gamma, nullptr);
      break;
    case IsomorphismTag::e_b1sb2: {
      if (left_bath_modes < 0 || left_bath_modes > K) {
        throw DimensionMismatch("left bath size out of range");
      }
      const Index k1 = left_bath_modes;
      const Index k2 = K - k1;
      const Matrix& mb = spec.m_b();
      // The two baths must be uncorrelated for the split generator.
      const Matrix b1 = bath_block(mb, 0, k1);
      const Matrix b2 = bath_block(mb, k1, k2);
      double corr = 0.0;
      for (Index i = 0; i < 2 * K; ++i) {
        for (Index j = 0; j < 2 * K; ++j) {
          const bool left_i = (i % K) < k1;
          const bool left_j = (j % K) < k1;
          if (left_i != left_j) corr = std::max(corr, std::abs(mb(i, j)));
        }
      }
      if (corr > tol.structural) {
        throw UnsupportedIso("E_B1SB2 requires a product state of the two baths");
      }
      if (k1 > 0) {
        const Matrix th1 = bath_columns(spec.theta(), 0, k1);
        add_jumps(out.jumps, th1 * b1 * th1.adjoint(), gamma, nullptr);
      }
      if (k2 > 0) {
        const Matrix th2 = bath_columns(spec.theta(), k1, k2);
        add_jumps(out.jumps, th2 * b2 * th2.adjoint(), gamma, &par);
      }
      break;
    }
  }
  return out;
}

DenseState evolve_dense(const DenseLindbladian& lind, const DenseState& rho0, double t) {
  if (!(t >= 0.0)) throw Error("evolve_dense: t must be >= 0");
  const Index d = lind.hamiltonian.rows();
  if (rho0.rho.rows() != d) throw DimensionMismatch("evolve_dense: state size mismatch");
  if (t == 0.0) return rho0;
  const Matrix prop = expm(t * lind.superoperator());
  const Vector v = prop * Eigen::Map<const Vector>(rho0.rho.data(), d * d);
  const Matrix rho = Eigen::Map<const Matrix>(v.data(), d, d);
  return {0.5 * (rho + rho.adjoint()), rho0.modes};
}

DenseState dense_stationary(const DenseLindbladian& lind) {
  const Index d = lind.hamiltonian.rows();
  Eigen::JacobiSVD<Matrix> svd(lind.superoperator(), Eigen::ComputeFullV);
  const Vector v = svd.matrixV().col(d * d - 1);
  Matrix rho = Eigen::Map<const Matrix>(v.data(), d, d);
  rho = (0.5 * (rho + rho.adjoint())).eval();
  const Complex tr = rho.trace();
  if (std::abs(tr) < 1e-12) throw NumericalFailure("dense_stationary: null vector is traceless");
  return {rho / tr, lind.modes};
}

DenseChannel repeated_interaction_step(const SemigroupSpec& spec, const DenseState& omega,
                                       double tau, IsomorphismTag iso,
                                       const std::optional<HamiltonianMatrix>& t_b) {
  if (!(tau > 0.0)) throw Error("repeated_interaction_step: tau must be positive");
  if (iso == IsomorphismTag::e_b1sb2) {
    throw UnsupportedIso("repeated interaction realized for E_SB and E_BS");
  }
  const int L = static_cast<int>(spec.system_modes());
  const int K = static_cast<int>(spec.bath_modes());
  if (L + K > kDenseModeLimit) throw TooLarge("repeated interaction: L + K exceeds dense limit");
  if (omega.modes != K) throw DimensionMismatch("bath state does not match K");

  // Joint Majorana ordering in system-bath blocks.
  const int n = L + K;
  Matrix block = Matrix::Zero(2 * n, 2 * n);
  const Matrix tb = t_b ? convert_basis(*t_b, Basis::majorana).entries
                        : Matrix(Matrix::Zero(2 * K, 2 * K));
  block.topLeftCorner(2 * L, 2 * L) = spec.t_s();
  block.bottomRightCorner(2 * K, 2 * K) = tb;
  block.topRightCorner(2 * L, 2 * K) = spec.theta() / std::sqrt(tau);
  block.bottomLeftCorner(2 * K, 2 * L) = spec.theta().adjoint() / std::sqrt(tau);

  // Position of each block index in the global Majorana vector
  // (gamma_1..gamma_n, gamma_{n+1}..gamma_{2n}) of the joint JW order.
  const int s_off = iso == IsomorphismTag::e_sb ? 0 : K;
  const int b_off = iso == IsomorphismTag::e_sb ? L : 0;
  std::vector<int> pos(2 * n);
  for (int i = 0; i < L; ++i) {
    pos[i] = s_off + i;
    pos[i + L] = n + s_off + i;
  }
  for (int j = 0; j < K; ++j) {
    pos[2 * L + j] = b_off + j;
    pos[2 * L + K + j] = n + b_off + j;
  }
  Matrix global = Matrix::Zero(2 * n, 2 * n);
  for (int a = 0; a < 2 * n; ++a) {
    for (int b = 0; b < 2 * n; ++b) global(pos[a], pos[b]) = block(a, b);
  }
  const Matrix h = quadratic_hamiltonian({global, Basis::majorana}, 0.5);
  const Matrix u = expm(-kI * tau * h);
  const Matrix ud = u.adjoint();
  const Matrix om = omega.rho;

  return [=](const DenseState& rho) {
    if (rho.modes != L) throw DimensionMismatch("repeated interaction: system size mismatch");
    const Matrix joint = iso == IsomorphismTag::e_sb ? kron(rho.rho, om) : kron(om, rho.rho);
    const DenseState evolved{u * joint * ud, n};
    DenseState out = partial_trace_bath(evolved, L, K, iso);
    out.rho = (0.5 * (out.rho + out.rho.adjoint())).eval();
    return out;
  };
}

DenseState iterate(const DenseChannel& step, const DenseState& rho0, int steps) {
  DenseState rho = rho0;
  for (int k = 0; k < steps; ++k) rho = step(rho);
  return rho;
}

}  // namespace qfl
