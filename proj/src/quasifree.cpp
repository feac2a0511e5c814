#include "qfl/quasifree.hpp"

#include <Eigen/Eigenvalues>

namespace qfl {

using Eigen::Index;

double covariance_residual(const Matrix& m, Basis basis) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0) {
    throw DimensionMismatch("covariance: matrix must be square of even size");
  }
  const Matrix maj = basis == Basis::majorana ? m : to_majorana(m);
  const Index n = m.rows();
  const double scale = std::max(1.0, max_abs(maj));
  const RealMatrix re = maj.real() - 0.5 * RealMatrix::Identity(n, n);
  const RealMatrix im = maj.imag();
  double r = std::max(re.cwiseAbs().maxCoeff(), (im + im.transpose()).cwiseAbs().maxCoeff());
  r /= scale;
  const Matrix herm = 0.5 * (maj + maj.adjoint());
  const RealVector ev = Eigen::SelfAdjointEigenSolver<Matrix>(herm, Eigen::EigenvaluesOnly)
                            .eigenvalues();
  r = std::max(r, -ev.minCoeff());
  r = std::max(r, ev.maxCoeff() - 1.0);
  return r;
}

CovarianceMatrix validate_covariance(const Matrix& m, Basis basis, const Tolerances& tol) {
  const double r = covariance_residual(m, basis);
  if (r > tol.structural) throw StructureViolation("not a covariance matrix", r);
  return {m, basis};
}

SmallCovarianceMatrix validate_small_covariance(const Matrix& m, const Tolerances& tol) {
  if (m.rows() != m.cols()) throw DimensionMismatch("small covariance must be square");
  double r = max_abs(m - m.adjoint());
  if (m.size() > 0) {
    const Matrix herm = 0.5 * (m + m.adjoint());
    const RealVector ev =
        Eigen::SelfAdjointEigenSolver<Matrix>(herm, Eigen::EigenvaluesOnly).eigenvalues();
    r = std::max({r, -ev.minCoeff(), ev.maxCoeff() - 1.0});
  }
  if (r > tol.structural) throw StructureViolation("not a small covariance matrix", r);
  return {m};
}

CovarianceMatrix convert_basis(const CovarianceMatrix& m, Basis target, const Tolerances& tol) {
  validate_covariance(m.entries, m.basis, tol);
  if (m.basis == target) return m;
  return {target == Basis::majorana ? to_majorana(m.entries) : to_creation_annihilation(m.entries),
          target};
}

namespace {

// 1 / (1 + e^{-x}) without overflow for large |x|.
double logistic(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Matrix hermitian_logistic(const Matrix& t, double scale) {
  const Matrix herm = 0.5 * (t + t.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(herm);
  RealVector f(eig.eigenvalues().size());
  for (Index i = 0; i < f.size(); ++i) f(i) = logistic(scale * eig.eigenvalues()(i));
  const Matrix& v = eig.eigenvectors();
  return v * f.cast<Complex>().asDiagonal() * v.adjoint();
}

}  // namespace

CovarianceMatrix covariance_from_gibbs(const HamiltonianMatrix& t, double beta) {
  if (!std::isfinite(beta)) throw NumericalFailure("covariance_from_gibbs: beta must be finite");
  const HamiltonianMatrix ca = convert_basis(t, Basis::creation_annihilation);
  return {hermitian_logistic(ca.entries, 2.0 * beta), Basis::creation_annihilation};
}

SmallCovarianceMatrix small_covariance_from_gibbs(const Matrix& t0, double beta) {
  if (!std::isfinite(beta)) {
    throw NumericalFailure("small_covariance_from_gibbs: beta must be finite");
  }
  if (t0.rows() != t0.cols()) throw DimensionMismatch("T0 must be square");
  return {hermitian_logistic(t0, beta)};
}

SmallCovarianceMatrix small_from_full(const CovarianceMatrix& m) {
  const Matrix ca =
      m.basis == Basis::creation_annihilation ? m.entries : to_creation_annihilation(m.entries);
  const Index L = m.modes();
  return {ca.topLeftCorner(L, L)};
}

CovarianceMatrix full_from_small(const SmallCovarianceMatrix& m0) {
  const Index L = m0.modes();
  Matrix m = Matrix::Zero(2 * L, 2 * L);
  m.topLeftCorner(L, L) = m0.entries;
  m.bottomRightCorner(L, L) = Matrix::Identity(L, L) - m0.entries.conjugate();
  return {m, Basis::creation_annihilation};
}

Vector annihilation_word(Index modes, Index site) {
  Vector x = Vector::Zero(2 * modes);
  x(site) = 0.5;
  x(site + modes) = Complex(0, 0.5);
  return x;
}

Vector creation_word(Index modes, Index site) {
  Vector x = Vector::Zero(2 * modes);
  x(site) = 0.5;
  x(site + modes) = Complex(0, -0.5);
  return x;
}

Vector majorana_word(Index modes, Index index) {
  Vector x = Vector::Zero(2 * modes);
  x(index) = 1.0;
  return x;
}

namespace {

// Sum over pairings of the still-unpaired positions in `mask`, pairing the
// first free position with each later one.
Complex pairings(const Matrix& two_point, unsigned mask, int n) {
  if (mask == 0) return 1.0;
  int first = 0;
  while (!(mask & (1u << first))) ++first;
  const unsigned rest = mask & ~(1u << first);
  Complex total = 0.0;
  int between = 0;
  for (int j = first + 1; j < n; ++j) {
    if (!(rest & (1u << j))) continue;
    const Complex c = two_point(first, j);
    if (c != 0.0) {
      const double sign = (between % 2 == 0) ? 1.0 : -1.0;
      total += sign * c * pairings(two_point, rest & ~(1u << j), n);
    }
    ++between;
  }
  return total;
}

}  // namespace

Complex wick_moment(const CovarianceMatrix& m, const std::vector<Vector>& word) {
  const int n = static_cast<int>(word.size());
  if (n > kWickMaxWord) {
    throw WordTooLong("wick_moment: word length " + std::to_string(n) + " exceeds " +
                      std::to_string(kWickMaxWord));
  }
  const Index dim = m.entries.rows();
  for (const Vector& x : word) {
    if (x.size() != dim) throw DimensionMismatch("wick_moment: vector length must be 2L");
  }
  if (n % 2 != 0) return 0.0;
  const Matrix maj = m.basis == Basis::majorana ? m.entries : to_majorana(m.entries);
  // tr(rho phi(x) phi(y)) = 2 x^T M y.
  Matrix two_point = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const Eigen::RowVectorXcd left = 2.0 * word[i].transpose() * maj;
    for (int j = i + 1; j < n; ++j) two_point(i, j) = left * word[j];
  }
  return pairings(two_point, (n == 0) ? 0u : ((1u << n) - 1u), n);
}

}  // namespace qfl
