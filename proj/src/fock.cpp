#include "qfl/fock.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace qfl {

using Eigen::Index;

namespace {

void check_modes(int modes) {
  if (modes < 0 || modes > kDenseModeLimit) {
    throw TooLarge("dense Fock space limited to " + std::to_string(kDenseModeLimit) +
                   " modes, got " + std::to_string(modes));
  }
}

Index dim_of(int modes) { return Index{1} << modes; }

int popcount(Index x) { return __builtin_popcountll(static_cast<unsigned long long>(x)); }

}  // namespace

Matrix kron(const Matrix& a, const Matrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

std::vector<Matrix> annihilation_ops(int modes) {
  check_modes(modes);
  const Index d = dim_of(modes);
  std::vector<Matrix> out;
  for (int i = 0; i < modes; ++i) {
    const Index bit = Index{1} << (modes - 1 - i);
    const Index higher = ~((bit << 1) - 1) & (d - 1);
    Matrix c = Matrix::Zero(d, d);
    for (Index s = 0; s < d; ++s) {
      if (!(s & bit)) continue;
      const double sign = popcount(s & higher) % 2 == 0 ? 1.0 : -1.0;
      c(s ^ bit, s) = sign;
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Matrix> majorana_ops(int modes) {
  const std::vector<Matrix> c = annihilation_ops(modes);
  std::vector<Matrix> g(2 * modes);
  for (int i = 0; i < modes; ++i) {
    const Matrix cd = c[i].adjoint();
    g[i] = c[i] + cd;
    g[i + modes] = -kI * (c[i] - cd);
  }
  return g;
}

Matrix parity(int modes) {
  check_modes(modes);
  const Index d = dim_of(modes);
  Matrix p = Matrix::Zero(d, d);
  for (Index s = 0; s < d; ++s) p(s, s) = popcount(s) % 2 == 0 ? 1.0 : -1.0;
  return p;
}

Matrix quadratic_hamiltonian(const HamiltonianMatrix& t, double prefactor) {
  const HamiltonianMatrix ca = convert_basis(t, Basis::creation_annihilation);
  const int L = static_cast<int>(ca.modes());
  const std::vector<Matrix> c = annihilation_ops(L);
  std::vector<Matrix> f(2 * L);
  for (int i = 0; i < L; ++i) {
    f[i] = c[i];
    f[i + L] = c[i].adjoint();
  }
  const Index d = dim_of(L);
  Matrix h = Matrix::Zero(d, d);
  for (int a = 0; a < 2 * L; ++a) {
    const Matrix fa = f[a].adjoint();
    for (int b = 0; b < 2 * L; ++b) {
      if (ca.entries(a, b) != 0.0) h += ca.entries(a, b) * (fa * f[b]);
    }
  }
  h *= prefactor;
  return 0.5 * (h + h.adjoint());
}

DenseState gibbs_state(const Matrix& h, double beta, int modes) {
  check_modes(modes);
  if (h.rows() != dim_of(modes)) throw DimensionMismatch("gibbs_state: size does not match modes");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (h + h.adjoint()));
  const RealVector& e = eig.eigenvalues();
  const double shift = beta >= 0 ? e.minCoeff() : e.maxCoeff();
  RealVector w = (-beta * (e.array() - shift)).exp().matrix();
  w /= w.sum();
  const Matrix& v = eig.eigenvectors();
  Matrix rho = v * w.cast<Complex>().asDiagonal() * v.adjoint();
  return {0.5 * (rho + rho.adjoint()), modes};
}

DenseState maximally_mixed(int modes) {
  check_modes(modes);
  const Index d = dim_of(modes);
  return {Matrix::Identity(d, d) / static_cast<double>(d), modes};
}

DenseState vacuum(int modes) {
  check_modes(modes);
  const Index d = dim_of(modes);
  Matrix rho = Matrix::Zero(d, d);
  rho(0, 0) = 1.0;
  return {rho, modes};
}

DenseState quasi_free_state(const CovarianceMatrix& m) {
  const Matrix ca = convert_basis(m, Basis::creation_annihilation).entries;
  const int L = static_cast<int>(m.modes());
  check_modes(L);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (ca + ca.adjoint()));
  RealVector t(eig.eigenvalues().size());
  for (Index i = 0; i < t.size(); ++i) {
    const double x = std::clamp(eig.eigenvalues()(i), 1e-14, 1.0 - 1e-14);
    t(i) = std::log(x / (1.0 - x));
  }
  const Matrix& v = eig.eigenvectors();
  const Matrix tc = v * t.cast<Complex>().asDiagonal() * v.adjoint();
  // rho ~ e^{-1/2 F^* T F} has covariance (I + e^{-T})^{-1}.
  const Matrix h = quadratic_hamiltonian({0.5 * (tc + tc.adjoint()), Basis::creation_annihilation},
                                         0.5);
  return gibbs_state(h, 1.0, L);
}

std::string_view to_string(IsomorphismTag iso) {
  switch (iso) {
    case IsomorphismTag::e_sb: return "E_SB";
    case IsomorphismTag::e_bs: return "E_BS";
    case IsomorphismTag::e_b1sb2: return "E_B1SB2";
  }
  return "?";
}

IsomorphismTag parse_isomorphism(std::string_view name) {
  if (name == "E_SB" || name == "sb" || name == "SB") return IsomorphismTag::e_sb;
  if (name == "E_BS" || name == "bs" || name == "BS") return IsomorphismTag::e_bs;
  if (name == "E_B1SB2" || name == "b1sb2" || name == "B1SB2") return IsomorphismTag::e_b1sb2;
  throw Error("unknown isomorphism '" + std::string(name) + "'");
}

Matrix embed(const Matrix& op_s, int system_modes, const Matrix& op_b, int bath_modes,
             IsomorphismTag iso) {
  check_modes(system_modes + bath_modes);
  if (op_s.rows() != dim_of(system_modes) || op_b.rows() != dim_of(bath_modes)) {
    throw DimensionMismatch("embed: operator sizes do not match mode counts");
  }
  if (iso == IsomorphismTag::e_b1sb2) {
    throw UnsupportedIso("embed: E_B1SB2 is only realized through the oracle's twist factors");
  }
  const Matrix ps = parity(system_modes);
  const Matrix pb = parity(bath_modes);
  if (iso == IsomorphismTag::e_sb) {
    // E_SB(a_S) = a_S (x) I, E_SB(b_B) = (-1)^{N_S} (x) b_B.
    const Matrix b_even = 0.5 * (op_b + pb * op_b * pb);
    const Matrix b_odd = op_b - b_even;
    return kron(op_s, b_even) + kron(op_s * ps, b_odd);
  }
  // E_BS(b_B) = b_B (x) I, E_BS(a_S) = (-1)^{N_B} (x) a_S.
  const Matrix s_even = 0.5 * (op_s + ps * op_s * ps);
  const Matrix s_odd = op_s - s_even;
  return kron(op_b, s_even) + kron(pb * op_b, s_odd);
}

DenseState partial_trace_bath(const DenseState& rho, int system_modes, int bath_modes,
                              IsomorphismTag iso) {
  if (rho.modes != system_modes + bath_modes || rho.rho.rows() != dim_of(rho.modes)) {
    throw DimensionMismatch("partial_trace_bath: state size does not match L + K");
  }
  if (iso == IsomorphismTag::e_b1sb2) {
    throw UnsupportedIso("partial_trace_bath: use E_SB or E_BS");
  }
  const Index ds = dim_of(system_modes);
  const Index db = dim_of(bath_modes);
  Matrix out = Matrix::Zero(ds, ds);
  for (Index i = 0; i < ds; ++i) {
    for (Index j = 0; j < ds; ++j) {
      Complex acc = 0.0;
      for (Index k = 0; k < db; ++k) {
        acc += iso == IsomorphismTag::e_sb ? rho.rho(i * db + k, j * db + k)
                                           : rho.rho(k * ds + i, k * ds + j);
      }
      out(i, j) = acc;
    }
  }
  return {out, system_modes};
}

CovarianceMatrix covariance_of(const DenseState& rho) {
  const int L = rho.modes;
  const std::vector<Matrix> g = majorana_ops(L);
  Matrix m(2 * L, 2 * L);
  for (int a = 0; a < 2 * L; ++a) {
    const Matrix rg = rho.rho * g[a];
    for (int b = 0; b < 2 * L; ++b) m(a, b) = 0.5 * (rg.cwiseProduct(g[b].transpose())).sum();
  }
  return {m, Basis::majorana};
}

}  // namespace qfl
