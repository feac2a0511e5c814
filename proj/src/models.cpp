#include "qfl/models.hpp"

#include <cmath>
#include <random>

namespace qfl {

using Eigen::Index;

RealMatrix shift_matrix(Index length) {
  RealMatrix d = RealMatrix::Zero(length, length);
  for (Index i = 0; i + 1 < length; ++i) d(i, i + 1) = 1.0;
  return d;
}

SemigroupSpec thermalization_model(const HamiltonianMatrix& t_s, double beta) {
  const Index n = t_s.entries.rows();
  const CouplingMatrix theta{kI * Matrix::Identity(n, n), Basis::majorana};
  return SemigroupSpec(t_s, theta, covariance_from_gibbs(t_s, 0.5 * beta));
}

double simple_bath_scalar(double beta) { return 1.0 / (1.0 + std::exp(-beta)); }

GaugeInvariantSpec simple_bath_model(const Matrix& t_s0, const Matrix& theta0, double beta) {
  const Index K = theta0.cols();
  GaugeInvariantSpec spec{t_s0, theta0,
                          small_covariance_from_gibbs(Matrix::Identity(K, K), beta)};
  spec.validate();
  return spec;
}

Matrix ChainStationaryPrediction::matrix(Index length) const {
  const RealMatrix d = shift_matrix(length);
  Matrix m = Matrix::Zero(length, length);
  m.diagonal().setConstant(pm);
  m(0, 0) = p1;
  m(length - 1, length - 1) = pL;
  m += kI * current * (d - d.transpose()).cast<Complex>();
  return m;
}

ChainStationaryPrediction chain_prediction(const ChainParams& p) {
  const double a = p.theta1 * p.theta1;
  const double b = p.thetaL * p.thetaL;
  ChainStationaryPrediction out;
  out.s = 4.0 * (a + b) + a * b * (a + b);
  out.w1_p1 = (a * b * b + a * a * b + 4.0 * a) / out.s;
  out.wL_p1 = 4.0 * b / out.s;
  out.w1_pm = a * (b * b + 4.0) / out.s;
  out.wL_pm = b * (a * a + 4.0) / out.s;
  out.w1_pL = 4.0 * a / out.s;
  out.wL_pL = (b * a * a + b * b * a + 4.0 * b) / out.s;
  out.p1 = out.w1_p1 * p.n1 + out.wL_p1 * p.nL;
  out.pm = out.w1_pm * p.n1 + out.wL_pm * p.nL;
  out.pL = out.w1_pL * p.n1 + out.wL_pL * p.nL;
  out.current = 2.0 * a * b * (p.n1 - p.nL) / out.s;
  return out;
}

TwoBathChain two_bath_chain(const ChainParams& p) {
  const Index L = p.length;
  if (L < 2) throw Error("two_bath_chain: length must be at least 2");
  const RealMatrix d = shift_matrix(L);
  Matrix theta = Matrix::Zero(L, 2);
  theta(0, 0) = p.theta1;
  theta(L - 1, 1) = p.thetaL;
  Matrix mb = Matrix::Zero(2, 2);
  mb(0, 0) = p.n1;
  mb(1, 1) = p.nL;
  GaugeInvariantSpec spec{(d + d.transpose()).cast<Complex>(), theta, {mb}};
  spec.validate();
  return {spec, chain_prediction(p)};
}

GaugeInvariantSpec one_end_chain(Index length, double theta, double m_b0) {
  if (length < 1) throw Error("one_end_chain: length must be positive");
  const RealMatrix d = shift_matrix(length);
  Matrix th = Matrix::Zero(length, 1);
  th(0, 0) = theta;
  GaugeInvariantSpec spec{(d + d.transpose()).cast<Complex>(), th,
                          {Matrix::Constant(1, 1, m_b0)}};
  spec.validate();
  return spec;
}

GaugeInvariantSpec star_model(Index length, double theta, double m_b0) {
  if (length < 2) throw Error("star_model: length must be at least 2");
  Matrix t = Matrix::Zero(length, length);
  for (Index j = 1; j < length; ++j) t(0, j) = t(j, 0) = 1.0;
  Matrix th = Matrix::Zero(length, 1);
  th(0, 0) = theta;
  GaugeInvariantSpec spec{t, th, {Matrix::Constant(1, 1, m_b0)}};
  spec.validate();
  return spec;
}

XYModel xy_chain(const XYParams& p) {
  const Index L = p.length;
  if (L < 2) throw Error("xy_chain: length must be at least 2");
  const RealMatrix d = shift_matrix(L);
  const double up = 0.5 * (1.0 + p.kappa);
  const double down = 0.5 * (1.0 - p.kappa);
  RealMatrix c_t = p.h * RealMatrix::Identity(L, L) + down * d + up * d.transpose();

  RealMatrix c_top = RealMatrix::Zero(L, 2);
  RealMatrix c_bottom = RealMatrix::Zero(L, 2);
  c_top(0, 0) = up * p.theta1;
  c_top(L - 1, 1) = down * p.theta2;
  c_bottom(0, 0) = down * p.theta1;
  c_bottom(L - 1, 1) = up * p.theta2;

  Matrix t = Matrix::Zero(2 * L, 2 * L);
  t.topRightCorner(L, L) = -kI * c_t.cast<Complex>();
  t.bottomLeftCorner(L, L) = kI * c_t.transpose().cast<Complex>();
  Matrix theta = Matrix::Zero(2 * L, 4);
  theta.topRightCorner(L, 2) = -kI * c_top.cast<Complex>();
  theta.bottomLeftCorner(L, 2) = kI * c_bottom.cast<Complex>();

  Matrix mb0 = Matrix::Zero(2, 2);
  mb0(0, 0) = p.m1;
  mb0(1, 1) = p.m2;
  const CovarianceMatrix m_b = full_from_small(validate_small_covariance(mb0));

  return {SemigroupSpec({t, Basis::majorana}, {theta, Basis::majorana}, m_b), c_t, c_top,
          c_bottom, 1};
}

ChainParams xy_equivalent_chain(const XYParams& p) {
  return {p.length, p.theta1 / std::sqrt(2.0), p.theta2 / std::sqrt(2.0), p.m1, p.m2};
}

SemigroupSpec random_semigroup(Index system_modes, Index bath_modes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.2, 2.0);
  auto antisymmetric = [&](Index n) {
    RealMatrix r(n, n);
    for (Index i = 0; i < n; ++i) {
      r(i, i) = 0.0;
      for (Index j = i + 1; j < n; ++j) {
        r(i, j) = normal(rng);
        r(j, i) = -r(i, j);
      }
    }
    return r;
  };
  const RealMatrix r = antisymmetric(2 * system_modes);
  RealMatrix w(2 * system_modes, 2 * bath_modes);
  for (Index i = 0; i < w.size(); ++i) w.data()[i] = normal(rng);
  const RealMatrix rb = antisymmetric(2 * bath_modes);
  const double beta = uniform(rng);
  const HamiltonianMatrix t_b{kI * rb.cast<Complex>(), Basis::majorana};
  return SemigroupSpec({kI * r.cast<Complex>(), Basis::majorana},
                       {kI * w.cast<Complex>(), Basis::majorana},
                       covariance_from_gibbs(t_b, beta));
}

}  // namespace qfl
