#include "qfl/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace qfl {

using Eigen::Index;

namespace {

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

double rank_threshold(Index n, double sigma_max, const Tolerances& tol) {
  return static_cast<double>(n) * std::numeric_limits<double>::epsilon() * sigma_max *
         tol.rank_factor;
}

struct KalmanSpace {
  Index rank = 0;
  Matrix complement;  // orthonormal columns spanning the orthogonal complement
};

KalmanSpace kalman_space(const Matrix& t, const Matrix& b, const Tolerances& tol) {
  const Index n = t.rows();
  if (b.rows() != n) throw DimensionMismatch("kalman: coupling rows must match T");
  const Index m = b.cols();
  KalmanSpace out;
  if (n == 0) return out;
  if (m == 0 || max_abs(b) == 0.0) {
    out.complement = Matrix::Identity(n, n);
    return out;
  }
  const double nt = spectral_norm(t);
  const Matrix th = nt > 0.0 ? Matrix(t / nt) : t;
  Matrix c(n, n * m);
  Matrix block = b;
  for (Index k = 0; k < n; ++k) {
    c.middleCols(k * m, m) = block;
    block = th * block;
  }
  Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeFullU);
  const RealVector& s = svd.singularValues();
  const double thr = rank_threshold(n, s(0), tol);
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > thr) ++out.rank;
  }
  out.complement = svd.matrixU().rightCols(n - out.rank);
  return out;
}

Index numerical_rank(const Matrix& y, double scale, const Tolerances& tol) {
  if (y.size() == 0 || scale == 0.0) return 0;
  const RealVector s = Eigen::JacobiSVD<Matrix>(y).singularValues();
  const double thr = rank_threshold(std::max(y.rows(), y.cols()), scale, tol);
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > thr) ++r;
  }
  return r;
}

// Hermitian T, coupling B, drift G.
ErgodicityReport analyze(const Matrix& t, const Matrix& b, const Matrix& g,
                         const Tolerances& tol) {
  ErgodicityReport rep;
  const Index n = t.rows();
  rep.dimension = n;

  const KalmanSpace ks = kalman_space(t, b, tol);
  rep.kalman_rank = ks.rank;
  rep.kalman_full = ks.rank == n;
  rep.unique_stationary = rep.kalman_full;

  // Eigenspace test: no eigenvector of T may lie in ker B^*.
  rep.spectral_full = true;
  if (n > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitize(t));
    const RealVector& ev = eig.eigenvalues();
    const double b_norm = spectral_norm(b);
    Index start = 0;
    while (start < n) {
      Index stop = start + 1;
      while (stop < n && ev(stop) - ev(stop - 1) <= tol.cluster_gap) ++stop;
      const Index dim = stop - start;
      const Matrix y = b.adjoint() * eig.eigenvectors().middleCols(start, dim);
      if (numerical_rank(y, b_norm, tol) < dim) {
        rep.spectral_full = false;
        if (!rep.offending_eigenvalue) rep.offending_eigenvalue = ev.segment(start, dim).mean();
      }
      start = stop;
    }
  }

  if (ks.complement.cols() == 0) {
    rep.converges = true;
  } else {
    const Matrix& q = ks.complement;
    const Matrix restricted = q.adjoint() * t * q;
    const Complex lambda = restricted.trace() / static_cast<double>(q.cols());
    const Matrix id = Matrix::Identity(q.cols(), q.cols());
    const double dev = spectral_norm(restricted - lambda * id);
    rep.converges = dev <= tol.numeric * std::max(1.0, spectral_norm(t));
  }

  if (n > 0) {
    Eigen::ComplexEigenSolver<Matrix> ges(g, false);
    rep.spectral_abscissa = ges.eigenvalues().real().maxCoeff();
  }
  return rep;
}

Matrix lyapunov_operator(const Matrix& g) {
  const Index n = g.rows();
  const Index nn = n * n;
  // Column-major vec: vec(G X) = (I (x) G) vec X, vec(X G^*) = (conj G (x) I) vec X.
  Matrix a = Matrix::Zero(nn, nn);
  for (Index j = 0; j < n; ++j) a.block(j * n, j * n, n, n) = g;
  const Matrix gc = g.conjugate();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (gc(i, j) == 0.0) continue;
      for (Index k = 0; k < n; ++k) a(i * n + k, j * n + k) += gc(i, j);
    }
  }
  return a;
}

Matrix van_loan(const Matrix& g, const Matrix& p, const Matrix& x0, double t) {
  const Index n = g.rows();
  const double gn = g.cwiseAbs().colwise().sum().maxCoeff();
  int doublings = 0;
  if (gn * t > 1.0) doublings = static_cast<int>(std::ceil(std::log2(gn * t)));
  const double h = std::ldexp(t, -doublings);

  Matrix block = Matrix::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = g * h;
  block.topRightCorner(n, n) = p * h;
  block.bottomRightCorner(n, n) = -g.adjoint() * h;
  const Matrix e = expm(block);
  Matrix eh = e.topLeftCorner(n, n);
  Matrix xh = e.topRightCorner(n, n) * eh.adjoint();
  for (int k = 0; k < doublings; ++k) {
    xh = eh * xh * eh.adjoint() + xh;
    eh = eh * eh;
  }
  return eh * x0 * eh.adjoint() + xh;
}

}  // namespace

SemigroupSpec::SemigroupSpec(const HamiltonianMatrix& t_s, const CouplingMatrix& theta,
                             const CovarianceMatrix& m_b, const Tolerances& tol) {
  t_s_ = convert_basis(t_s, Basis::majorana, tol).entries;
  theta_ = convert_basis(theta, Basis::majorana, tol).entries;
  m_b_ = convert_basis(m_b, Basis::majorana, tol).entries;
  if (theta_.rows() != t_s_.rows()) {
    throw DimensionMismatch("coupling has " + std::to_string(theta_.rows()) +
                            " rows, system needs " + std::to_string(t_s_.rows()));
  }
  if (theta_.cols() != m_b_.rows()) {
    throw DimensionMismatch("coupling has " + std::to_string(theta_.cols()) +
                            " columns, bath covariance has " + std::to_string(m_b_.rows()));
  }
  g_ = -kI * t_s_ - 0.5 * theta_ * theta_.adjoint();
  p_ = hermitize(theta_ * m_b_ * theta_.adjoint());
}

Matrix GaugeInvariantSpec::drift() const {
  return -kI * t_s0 - 0.5 * theta0 * theta0.adjoint();
}

Matrix GaugeInvariantSpec::inhomogeneity() const {
  return hermitize(theta0 * m_b0.entries * theta0.adjoint());
}

void GaugeInvariantSpec::validate(const Tolerances& tol) const {
  if (t_s0.rows() != t_s0.cols()) throw DimensionMismatch("T0 must be square");
  if (theta0.rows() != t_s0.rows()) throw DimensionMismatch("Theta0 rows must match T0");
  if (theta0.cols() != m_b0.modes()) throw DimensionMismatch("Theta0 columns must match M_B0");
  const double r = max_abs(t_s0 - t_s0.adjoint()) / std::max(1.0, max_abs(t_s0));
  if (r > tol.structural) throw StructureViolation("T0 is not Hermitian", r);
  validate_small_covariance(m_b0.entries, tol);
}

SemigroupSpec GaugeInvariantSpec::lift(const Tolerances& tol) const {
  validate(tol);
  const Index L = modes();
  const Index K = bath_modes();
  Matrix t = Matrix::Zero(2 * L, 2 * L);
  t.topLeftCorner(L, L) = t_s0;
  t.bottomRightCorner(L, L) = -t_s0.conjugate();
  Matrix th = Matrix::Zero(2 * L, 2 * K);
  th.topLeftCorner(L, K) = theta0;
  th.bottomRightCorner(L, K) = -theta0.conjugate();
  const CovarianceMatrix mb = full_from_small(m_b0);
  return SemigroupSpec({t, Basis::creation_annihilation}, {th, Basis::creation_annihilation}, mb,
                       tol);
}

Matrix solve_lyapunov(const Matrix& g, const Matrix& p, const Tolerances& tol) {
  const Index n = g.rows();
  if (g.cols() != n || p.rows() != n || p.cols() != n) {
    throw DimensionMismatch("solve_lyapunov: G and P must be square of equal size");
  }
  if (n == 0) return Matrix(0, 0);
  Eigen::FullPivLU<Matrix> lu(lyapunov_operator(g));
  lu.setThreshold(tol.singular_pivot);
  if (!lu.isInvertible()) {
    throw NonUniqueStationary("Lyapunov operator is singular (rank " + std::to_string(lu.rank()) +
                              " of " + std::to_string(n * n) + ")");
  }
  const Vector rhs = -Eigen::Map<const Vector>(p.data(), n * n);
  const Vector x = lu.solve(rhs);
  if (!x.allFinite()) throw NumericalFailure("solve_lyapunov: non-finite solution");
  return Eigen::Map<const Matrix>(x.data(), n, n);
}

Matrix propagate_affine(const Matrix& g, const Matrix& p, const Matrix& x0, double t,
                        PropagationMethod method, const Tolerances& tol) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error("propagation time must be finite and >= 0");
  if (t == 0.0) return x0;
  if (method == PropagationMethod::automatic) {
    try {
      const Matrix x_inf = solve_lyapunov(g, p, tol);
      const Matrix e = expm(t * g);
      return e * (x0 - x_inf) * e.adjoint() + x_inf;
    } catch (const NonUniqueStationary&) {
      return van_loan(g, p, x0, t);
    }
  }
  if (method == PropagationMethod::closed_form) {
    const Matrix x_inf = solve_lyapunov(g, p, tol);
    const Matrix e = expm(t * g);
    return e * (x0 - x_inf) * e.adjoint() + x_inf;
  }
  return van_loan(g, p, x0, t);
}

CovarianceMatrix propagate(const SemigroupSpec& spec, const CovarianceMatrix& m0, double t,
                           PropagationMethod method, const Tolerances& tol) {
  if (m0.modes() != spec.system_modes() || m0.entries.rows() != m0.entries.cols()) {
    throw DimensionMismatch("initial covariance does not match the system size");
  }
  const Matrix x0 = convert_basis(m0, Basis::majorana, tol).entries;
  const Matrix x =
      hermitize(propagate_affine(spec.drift(), spec.inhomogeneity(), x0, t, method, tol));
  if (m0.basis == Basis::majorana) return {x, Basis::majorana};
  return {to_creation_annihilation(x), Basis::creation_annihilation};
}

CovarianceMatrix stationary(const SemigroupSpec& spec, const Tolerances& tol) {
  return {hermitize(solve_lyapunov(spec.drift(), spec.inhomogeneity(), tol)), Basis::majorana};
}

Index kalman_rank(const Matrix& t, const Matrix& b, const Tolerances& tol) {
  return kalman_space(t, b, tol).rank;
}

ErgodicityReport ergodicity(const SemigroupSpec& spec, const Tolerances& tol) {
  return analyze(spec.t_s(), spec.theta(), spec.drift(), tol);
}

ErgodicityReport ergodicity_gauge_invariant(const GaugeInvariantSpec& spec,
                                            const Tolerances& tol) {
  spec.validate(tol);
  return analyze(spec.t_s0, spec.theta0, spec.drift(), tol);
}

GaugeInvariantState propagate_gauge_invariant(const GaugeInvariantSpec& spec,
                                              const SmallCovarianceMatrix& m0, const Matrix& a0,
                                              double t, PropagationMethod method,
                                              const Tolerances& tol) {
  spec.validate(tol);
  const Index L = spec.modes();
  if (m0.modes() != L || a0.rows() != L || a0.cols() != L) {
    throw DimensionMismatch("initial data does not match the system size");
  }
  const Matrix g = spec.drift();
  const Matrix m = hermitize(propagate_affine(g, spec.inhomogeneity(), m0.entries, t, method, tol));
  const Matrix e = expm(t * g);
  return {{m}, e * a0 * e.transpose()};
}

SmallCovarianceMatrix stationary_gauge_invariant(const GaugeInvariantSpec& spec,
                                                 const Tolerances& tol) {
  spec.validate(tol);
  return {hermitize(solve_lyapunov(spec.drift(), spec.inhomogeneity(), tol))};
}

bool real_case_kalman(const RealMatrix& c_t, const RealMatrix& c_top, const RealMatrix& c_bottom,
                      const Tolerances& tol) {
  const Index L = c_t.rows();
  if (c_t.cols() != L || c_top.rows() != L || c_bottom.rows() != L ||
      c_top.cols() != c_bottom.cols()) {
    throw DimensionMismatch("real_case_kalman: inconsistent block sizes");
  }
  const Index K = c_top.cols();
  const RealMatrix cct = c_t * c_t.transpose();
  const RealMatrix ctc = c_t.transpose() * c_t;
  RealMatrix top(L, 2 * K), bottom(L, 2 * K);
  top << c_top, c_t * c_bottom;
  bottom << c_bottom, c_t.transpose() * c_top;
  return kalman_rank(cct.cast<Complex>(), top.cast<Complex>(), tol) == L &&
         kalman_rank(ctc.cast<Complex>(), bottom.cast<Complex>(), tol) == L;
}

bool real_case_kalman(const RealMatrix& c_t, const RealMatrix& c_theta, const Tolerances& tol) {
  return real_case_kalman(c_t, c_theta, c_theta, tol);
}

SupportDecomposition support_decomposition(const CovarianceMatrix& m, const Tolerances& tol) {
  const Matrix maj = convert_basis(m, Basis::majorana, tol).entries;
  const RealMatrix im = maj.imag();
  const RealMatrix r = 0.5 * (im - im.transpose());
  const BlockReduction red = block_reduce({kI * r.cast<Complex>(), Basis::majorana}, tol);
  SupportDecomposition out;
  out.u = red.u;
  out.eigenvalues = (0.5 + red.lambda.array()).matrix();
  for (Index i = 0; i < out.eigenvalues.size(); ++i) {
    if (out.eigenvalues(i) >= 1.0 - tol.pin) ++out.pinned;
  }
  out.faithful = m.modes() - out.pinned;
  return out;
}

}  // namespace qfl
