#include "qfl/phase.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <unsupported/Eigen/MatrixFunctions>

namespace qfl {

namespace {

using Eigen::Index;

void require_even(const Matrix& m, const char* what) {
  if (m.rows() % 2 != 0 || m.cols() % 2 != 0) {
    throw DimensionMismatch(std::string(what) + ": dimensions must be even");
  }
}

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) throw DimensionMismatch(std::string(what) + ": matrix must be square");
}

double scale_of(const Matrix& m) { return std::max(1.0, max_abs(m)); }

}  // namespace

std::string_view to_string(Basis b) {
  return b == Basis::majorana ? "majorana" : "creation_annihilation";
}

Basis parse_basis(std::string_view name) {
  if (name == "majorana") return Basis::majorana;
  if (name == "creation_annihilation" || name == "ca") return Basis::creation_annihilation;
  throw Error("unknown basis '" + std::string(name) + "'");
}

Matrix basis_change(Index modes) {
  const Index L = modes;
  Matrix s = Matrix::Zero(2 * L, 2 * L);
  for (Index i = 0; i < L; ++i) {
    s(i, i) = 0.5;
    s(i, i + L) = 0.5;
    s(i + L, i) = Complex(0, -0.5);
    s(i + L, i + L) = Complex(0, 0.5);
  }
  return s;
}

Matrix basis_change_inverse(Index modes) {
  const Index L = modes;
  Matrix s = Matrix::Zero(2 * L, 2 * L);
  for (Index i = 0; i < L; ++i) {
    s(i, i) = 1.0;
    s(i, i + L) = kI;
    s(i + L, i) = 1.0;
    s(i + L, i + L) = -kI;
  }
  return s;
}

Matrix to_majorana(const Matrix& ca) {
  require_even(ca, "to_majorana");
  return basis_change(ca.rows() / 2) * ca * basis_change_inverse(ca.cols() / 2);
}

Matrix to_creation_annihilation(const Matrix& majorana) {
  require_even(majorana, "to_creation_annihilation");
  return basis_change_inverse(majorana.rows() / 2) * majorana * basis_change(majorana.cols() / 2);
}

double qf_residual(const Matrix& m, Basis basis) {
  require_square(m, "qf");
  require_even(m, "qf");
  const double scale = scale_of(m);
  if (basis == Basis::majorana) {
    const RealMatrix im = m.imag();
    const double re = m.real().cwiseAbs().maxCoeff();
    const double anti = (im + im.transpose()).cwiseAbs().maxCoeff();
    return std::max(re, anti) / scale;
  }
  const Index L = m.rows() / 2;
  const Matrix a = m.topLeftCorner(L, L);
  const Matrix b = m.topRightCorner(L, L);
  double r = max_abs(a - a.adjoint());
  r = std::max(r, max_abs(b + b.transpose()));
  r = std::max(r, max_abs(m.bottomLeftCorner(L, L) + b.conjugate()));
  r = std::max(r, max_abs(m.bottomRightCorner(L, L) + a.conjugate()));
  return r / scale;
}

double coupling_residual(const Matrix& m, Basis basis) {
  require_even(m, "coupling");
  const Matrix maj = basis == Basis::majorana ? m : to_majorana(m);
  return maj.real().cwiseAbs().maxCoeff() / scale_of(maj);
}

double bogoliubov_residual(const Matrix& m, Basis basis) {
  require_square(m, "bogoliubov");
  require_even(m, "bogoliubov");
  const Matrix maj = basis == Basis::majorana ? m : to_majorana(m);
  const Matrix id = Matrix::Identity(m.rows(), m.cols());
  return std::max(max_abs(m * m.adjoint() - id), maj.imag().cwiseAbs().maxCoeff());
}

HamiltonianMatrix validate_qf(const Matrix& m, Basis basis, const Tolerances& tol) {
  const double r = qf_residual(m, basis);
  if (r > tol.structural) throw StructureViolation("matrix is not in QF(L)", r);
  return {m, basis};
}

CouplingMatrix validate_coupling(const Matrix& m, Basis basis, const Tolerances& tol) {
  const double r = coupling_residual(m, basis);
  if (r > tol.structural) {
    throw StructureViolation("coupling is not of the form iW with W real", r);
  }
  return {m, basis};
}

BogoliubovTransform validate_bogoliubov(const Matrix& m, Basis basis, const Tolerances& tol) {
  const double r = bogoliubov_residual(m, basis);
  if (r > tol.structural) throw StructureViolation("not a Bogoliubov transform", r);
  return {m, basis};
}

HamiltonianMatrix convert_basis(const HamiltonianMatrix& m, Basis target, const Tolerances& tol) {
  validate_qf(m.entries, m.basis, tol);
  if (m.basis == target) return m;
  return {target == Basis::majorana ? to_majorana(m.entries) : to_creation_annihilation(m.entries),
          target};
}

CouplingMatrix convert_basis(const CouplingMatrix& m, Basis target, const Tolerances& tol) {
  validate_coupling(m.entries, m.basis, tol);
  if (m.basis == target) return m;
  return {target == Basis::majorana ? to_majorana(m.entries) : to_creation_annihilation(m.entries),
          target};
}

BogoliubovTransform convert_basis(const BogoliubovTransform& m, Basis target,
                                  const Tolerances& tol) {
  validate_bogoliubov(m.entries, m.basis, tol);
  if (m.basis == target) return m;
  return {target == Basis::majorana ? to_majorana(m.entries) : to_creation_annihilation(m.entries),
          target};
}

BlockReduction block_reduce(const HamiltonianMatrix& t, const Tolerances& tol) {
  const HamiltonianMatrix tm = convert_basis(t, Basis::majorana, tol);
  const Index n = tm.entries.rows();
  const Index L = n / 2;
  // Symmetrize away rounding so the eigensolver sees an exactly Hermitian iR.
  const RealMatrix r = 0.5 * (tm.entries.imag() - tm.entries.imag().transpose());
  if (r.cwiseAbs().maxCoeff() == 0.0) {
    return {{Matrix::Identity(n, n), Basis::creation_annihilation}, RealVector::Zero(L)};
  }
  const Matrix h = Matrix(kI * r.cast<Complex>());

  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  const RealVector& ev = eig.eigenvalues();
  const double zero_tol = tol.numeric * std::max(1.0, ev.cwiseAbs().maxCoeff());

  struct Pair {
    double lambda;
    RealVector b, a;
  };
  std::vector<Pair> pairs;
  std::vector<Index> zero_cols;
  for (Index k = 0; k < n; ++k) {
    if (ev(k) > zero_tol) {
      const Vector x = eig.eigenvectors().col(k);
      pairs.push_back({ev(k), std::sqrt(2.0) * x.imag(), std::sqrt(2.0) * x.real()});
    } else if (std::abs(ev(k)) <= zero_tol) {
      zero_cols.push_back(k);
    }
  }

  if (!zero_cols.empty()) {
    // Real orthonormal basis of ker R from real and imaginary parts.
    RealMatrix span(n, 2 * static_cast<Index>(zero_cols.size()));
    for (std::size_t j = 0; j < zero_cols.size(); ++j) {
      span.col(2 * j) = eig.eigenvectors().col(zero_cols[j]).real();
      span.col(2 * j + 1) = eig.eigenvectors().col(zero_cols[j]).imag();
    }
    Eigen::JacobiSVD<RealMatrix> svd(span, Eigen::ComputeThinU);
    const Index dim = static_cast<Index>(zero_cols.size());
    if (dim % 2 != 0) throw NumericalFailure("block_reduce: odd-dimensional kernel");
    const RealMatrix basis = svd.matrixU().leftCols(dim);
    for (Index j = 0; j < dim / 2; ++j) {
      pairs.push_back({0.0, basis.col(j), basis.col(j + dim / 2)});
    }
  }
  if (static_cast<Index>(pairs.size()) != L) {
    throw NumericalFailure("block_reduce: could not pair eigenvectors");
  }

  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
    if (x.lambda != y.lambda) return x.lambda > y.lambda;
    return std::lexicographical_compare(x.b.data(), x.b.data() + x.b.size(), y.b.data(),
                                        y.b.data() + y.b.size());
  });

  RealMatrix o(n, n);
  RealVector lambda(L);
  for (Index i = 0; i < L; ++i) {
    o.col(i) = pairs[i].b;
    o.col(i + L) = pairs[i].a;
    lambda(i) = pairs[i].lambda;
  }
  // Clusters of equal lambda get orthonormal columns from the eigensolver;
  // one Gram-Schmidt sweep removes residual drift across clusters.
  Eigen::HouseholderQR<RealMatrix> qr(o);
  RealMatrix q = qr.householderQ();
  const RealVector d = qr.matrixQR().diagonal();
  for (Index j = 0; j < n; ++j) {
    if (d(j) < 0) q.col(j) *= -1.0;
  }
  const Matrix u_maj = q.cast<Complex>();
  return {{to_creation_annihilation(u_maj), Basis::creation_annihilation}, lambda};
}

Matrix expm(const Matrix& m) {
  if (!m.allFinite()) throw NumericalFailure("expm: non-finite input");
  Matrix e = m.exp();
  if (!e.allFinite()) throw NumericalFailure("expm: overflow");
  return e;
}

}  // namespace qfl
