#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "qfl/models.hpp"
#include "qfl/oracle.hpp"
#include "support/generators.hpp"

using namespace qfl;
using qfl::testing::Gen;

namespace {

Matrix chain_t0(Eigen::Index L) {
  const RealMatrix d = shift_matrix(L);
  return (d + d.transpose()).cast<Complex>();
}

HamiltonianMatrix lifted(const Matrix& t0) {
  const Eigen::Index L = t0.rows();
  Matrix t = Matrix::Zero(2 * L, 2 * L);
  t.topLeftCorner(L, L) = t0;
  t.bottomRightCorner(L, L) = -t0.conjugate();
  return {t, Basis::creation_annihilation};
}

Matrix pauli_on(const Matrix& s, int site, int n) {
  Matrix out = Matrix::Identity(1, 1);
  for (int k = 0; k < n; ++k) out = kron(out, k == site ? s : Matrix(Matrix::Identity(2, 2)));
  return out;
}

RealVector spectrum(const Matrix& h) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(h).eigenvalues();
}

}  // namespace

TEST(Thermalization, InfiniteTemperatureIsMaximallyMixed) {
  Gen gen(1);
  const SemigroupSpec spec = thermalization_model(gen.qf(3), 0.0);
  EXPECT_LT(max_abs(stationary(spec).entries - 0.5 * Matrix::Identity(6, 6)), 1e-12);
}

TEST(Thermalization, StationaryIsDenseGibbsState) {
  const HamiltonianMatrix t = lifted(chain_t0(4));
  const SemigroupSpec spec = thermalization_model(t, 1.0);
  const DenseState gibbs = gibbs_state(quadratic_hamiltonian(t, 0.5), 1.0, 4);
  EXPECT_LT(max_abs(stationary(spec).entries - covariance_of(gibbs).entries), 1e-10);
}

TEST(Thermalization, AlwaysUnique) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Gen gen(seed);
    EXPECT_TRUE(ergodicity(thermalization_model(gen.qf(gen.index(1, 5)), 0.7)).unique_stationary);
  }
}

TEST(SimpleBath, ScalarIsDenseOccupationOfNumberOperator) {
  for (double beta : {0.2, 1.0, 4.0}) {
    const DenseState rho = gibbs_state(annihilation_ops(1)[0].adjoint() * annihilation_ops(1)[0],
                                       beta, 1);
    const Matrix c = annihilation_ops(1)[0];
    const double expected = (rho.rho * c * c.adjoint()).trace().real();
    EXPECT_NEAR(simple_bath_scalar(beta), expected, 1e-12);
  }
  EXPECT_NEAR(simple_bath_scalar(60.0), 1.0, 1e-12);
}

TEST(SimpleBath, OneEndChainForgetsHamiltonian) {
  const double beta = 1.7;
  Matrix theta = Matrix::Zero(4, 1);
  theta(0, 0) = 0.9;
  Gen gen(2);
  const Matrix expected = simple_bath_scalar(beta) * Matrix::Identity(4, 4);
  for (const Matrix& t0 : {chain_t0(4), Matrix(chain_t0(4) + 0.3 * gen.hermitian(4))}) {
    const GaugeInvariantSpec gi = simple_bath_model(t0, theta, beta);
    ASSERT_TRUE(ergodicity_gauge_invariant(gi).unique_stationary);
    EXPECT_LT(max_abs(stationary_gauge_invariant(gi).entries - expected), 1e-10);
  }
}

TEST(SimpleBath, StarIsNotUniqueButConverges) {
  Matrix theta = Matrix::Zero(3, 1);
  theta(0, 0) = 1.0;
  const GaugeInvariantSpec star = star_model(3, 1.0, 0.5);
  const ErgodicityReport r =
      ergodicity_gauge_invariant(simple_bath_model(star.t_s0, theta, 1.0));
  EXPECT_FALSE(r.unique_stationary);
  EXPECT_TRUE(r.converges);
}

TEST(TwoBathChain, PublishedValues) {
  struct Case {
    ChainParams p;
    double s, p1, pm, pL, c;
  };
  const Case cases[] = {
      {{5, 1.0, 1.0, 1.0, 0.0}, 10.0, 0.6, 0.5, 0.4, 0.2},
      {{5, 2.0, 1.0, 1.0, 0.0}, 40.0, 0.9, 0.5, 0.4, 0.2},
  };
  for (const Case& c : cases) {
    const ChainStationaryPrediction pr = chain_prediction(c.p);
    EXPECT_NEAR(pr.s, c.s, 1e-12);
    EXPECT_NEAR(pr.p1, c.p1, 1e-12);
    EXPECT_NEAR(pr.pm, c.pm, 1e-12);
    EXPECT_NEAR(pr.pL, c.pL, 1e-12);
    EXPECT_NEAR(pr.current, c.c, 1e-12);
  }
}

TEST(TwoBathChain, EquilibriumBaths) {
  const ChainStationaryPrediction pr = chain_prediction({6, 1.3, 0.4, 0.35, 0.35});
  EXPECT_NEAR(pr.p1, 0.35, 1e-12);
  EXPECT_NEAR(pr.pm, 0.35, 1e-12);
  EXPECT_NEAR(pr.pL, 0.35, 1e-12);
  EXPECT_NEAR(pr.current, 0.0, 1e-12);
}

TEST(TwoBathChain, WeightsAndCurrentSign) {
  Gen gen(3);
  for (int i = 0; i < 50; ++i) {
    const ChainParams p{gen.index(3, 20), gen.uniform(0.1, 3.0), gen.uniform(0.1, 3.0),
                        gen.uniform(0.0, 1.0), gen.uniform(0.0, 1.0)};
    const ChainStationaryPrediction pr = chain_prediction(p);
    EXPECT_NEAR(pr.w1_p1 + pr.wL_p1, 1.0, 1e-12);
    EXPECT_NEAR(pr.w1_pm + pr.wL_pm, 1.0, 1e-12);
    EXPECT_NEAR(pr.w1_pL + pr.wL_pL, 1.0, 1e-12);
    EXPECT_EQ(pr.current > 0, p.n1 > p.nL);
  }
}

TEST(TwoBathChain, PredictionMatchesStationary) {
  Gen gen(4);
  for (int i = 0; i < 10; ++i) {
    const ChainParams base{3, gen.uniform(0.1, 3.0), gen.uniform(0.1, 3.0),
                           gen.uniform(0.0, 1.0), gen.uniform(0.0, 1.0)};
    for (Eigen::Index L = 3; L <= 20; ++L) {
      ChainParams p = base;
      p.length = L;
      const TwoBathChain chain = two_bath_chain(p);
      const Matrix m = stationary_gauge_invariant(chain.spec).entries;
      EXPECT_LT(max_abs(m - chain.prediction.matrix(L)), 1e-10) << "L " << L;
    }
  }
}

TEST(OneEndChain, Ranks) {
  EXPECT_EQ(ergodicity_gauge_invariant(one_end_chain(1, 1.0, 0.5)).kalman_rank, 1);
  const ErgodicityReport off = ergodicity_gauge_invariant(one_end_chain(4, 0.0, 0.5));
  EXPECT_EQ(off.kalman_rank, 0);
  EXPECT_FALSE(off.unique_stationary);
  for (Eigen::Index L = 1; L <= 12; ++L) {
    EXPECT_TRUE(ergodicity_gauge_invariant(one_end_chain(L, 0.6, 0.5)).unique_stationary);
  }
}

TEST(Star, TwoSitesIsUnique) {
  const ErgodicityReport r = ergodicity_gauge_invariant(star_model(2, 1.0, 0.5));
  EXPECT_EQ(r.kalman_rank, 2);
  EXPECT_TRUE(r.unique_stationary);
}

TEST(Star, UncontrolledSpaceLiesInKernel) {
  for (Eigen::Index L = 3; L <= 7; ++L) {
    const GaugeInvariantSpec star = star_model(L, 1.0, 0.5);
    EXPECT_EQ(ergodicity_gauge_invariant(star).kalman_rank, 2);
    // Leaf differences e_i - e_j span the uncontrolled space.
    for (Eigen::Index i = 2; i < L; ++i) {
      Vector v = Vector::Zero(L);
      v(1) = 1.0;
      v(i) = -1.0;
      EXPECT_LT(max_abs(star.t_s0 * v), 1e-12);
      EXPECT_LT(max_abs(star.theta0.adjoint() * v), 1e-12);
    }
    // The nonzero eigenvector (sqrt(L-1), 1, ..., 1) is seen by the bath.
    Vector w = Vector::Ones(L);
    w(0) = std::sqrt(static_cast<double>(L - 1));
    EXPECT_LT(max_abs(star.t_s0 * w - std::sqrt(static_cast<double>(L - 1)) * w), 1e-12);
    EXPECT_GT(std::abs((star.theta0.adjoint() * w)(0)), 1e-3);
  }
}

TEST(XY, SpectrumMatchesSpinChain) {
  // H_S + V on (B1, chain, B2) is an XY chain with end bonds theta1, theta2 and
  // the field on the system spins only.
  Matrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, Complex(0, -1), Complex(0, 1), 0;
  sz << 1, 0, 0, -1;
  for (double kappa : {0.0, 0.4, 1.0}) {
    for (double h : {0.0, 0.3}) {
      const XYParams p{3, kappa, h, 0.8, 1.3, 1.0, 0.0};
      const XYModel xy = xy_chain(p);
      const int L = 3, n = L + 2;
      const double up = 0.5 * (1.0 + kappa), down = 0.5 * (1.0 - kappa);
      Matrix spin = Matrix::Zero(1 << n, 1 << n);
      for (int b = 0; b + 1 < n; ++b) {
        const double w = b == 0 ? p.theta1 : b == n - 2 ? p.theta2 : 1.0;
        spin -= 0.5 * w *
                (up * pauli_on(sx, b, n) * pauli_on(sx, b + 1, n) +
                 down * pauli_on(sy, b, n) * pauli_on(sy, b + 1, n));
      }
      for (int s = 1; s <= L; ++s) spin -= 0.5 * h * pauli_on(sz, s, n);

      auto site = [&](int a) { return a < L ? 1 + a : n + 1 + (a - L); };
      const int bath[4] = {0, L + 1, n, n + L + 1};
      Matrix joint = Matrix::Zero(2 * n, 2 * n);
      for (int a = 0; a < 2 * L; ++a) {
        for (int b = 0; b < 2 * L; ++b) joint(site(a), site(b)) = xy.spec.t_s()(a, b);
        for (int c = 0; c < 4; ++c) {
          joint(site(a), bath[c]) = xy.spec.theta()(a, c);
          joint(bath[c], site(a)) = std::conj(xy.spec.theta()(a, c));
        }
      }
      const Matrix fermion = quadratic_hamiltonian({joint, Basis::majorana}, 0.5);
      EXPECT_LT((spectrum(spin) - spectrum(fermion)).cwiseAbs().maxCoeff(), 1e-10)
          << kappa << " " << h;
    }
  }
}

TEST(XY, UniquenessBoundary) {
  for (double kappa : {0.0, 0.5, 0.99, 1.0}) {
    for (double h : {0.0, 0.3}) {
      for (Eigen::Index L : {3, 4, 6}) {
        const XYModel xy = xy_chain({L, kappa, h, 1.0, 0.7, 0.9, 0.1});
        EXPECT_EQ(ergodicity(xy.spec).unique_stationary, kappa * kappa != 1.0 || h != 0.0)
            << kappa << " " << h << " " << L;
      }
    }
  }
}

TEST(XY, IsotropicCaseIsTheGaugeInvariantChain) {
  for (Eigen::Index L : {3, 4, 6}) {
    const XYParams p{L, 0.0, 0.0, 1.1, 0.6, 0.8, 0.3};
    const XYModel xy = xy_chain(p);
    const TwoBathChain chain = two_bath_chain(xy_equivalent_chain(p));
    const ErgodicityReport a = ergodicity(xy.spec);
    const ErgodicityReport b = ergodicity(chain.spec.lift());
    EXPECT_EQ(a.unique_stationary, b.unique_stationary);
    EXPECT_EQ(a.kalman_rank, b.kalman_rank);
    // The XY generator is half the chain's: same stationary state, half the rate.
    EXPECT_NEAR(a.spectral_abscissa, 0.5 * b.spectral_abscissa, 1e-10);

    const Matrix occupations = small_from_full(stationary(xy.spec)).entries;
    const ChainStationaryPrediction& pr = chain.prediction;
    EXPECT_LT((occupations.diagonal() - pr.matrix(L).diagonal()).cwiseAbs().maxCoeff(), 1e-10);
    // The gauge c_j -> (-1)^j c_j may flip the sign of the current.
    EXPECT_NEAR(std::abs(occupations(0, 1).imag()), std::abs(pr.current), 1e-10);
  }
}

TEST(Models, ConstructorsProduceValidSpecs) {
  EXPECT_NO_THROW(two_bath_chain({7, 0.5, 2.0, 0.1, 0.9}).spec.validate());
  EXPECT_NO_THROW(one_end_chain(5, 1.0, 0.3).validate());
  EXPECT_NO_THROW(star_model(5, 1.0, 0.3).validate());
  EXPECT_NO_THROW(xy_chain({5, 0.3, 0.2, 1.0, 1.0, 1.0, 0.0}));
  EXPECT_THROW(xy_chain({1, 0.3, 0.2, 1.0, 1.0, 1.0, 0.0}), Error);
}

TEST(Models, RandomSemigroupIsSeeded) {
  const SemigroupSpec a = random_semigroup(3, 2, 42);
  const SemigroupSpec b = random_semigroup(3, 2, 42);
  const SemigroupSpec c = random_semigroup(3, 2, 43);
  EXPECT_EQ(max_abs(a.theta() - b.theta()), 0.0);
  EXPECT_GT(max_abs(a.theta() - c.theta()), 0.0);
}
