#include <gtest/gtest.h>

#include <algorithm>

#include <Eigen/Eigenvalues>

#include "qfl/fock.hpp"
#include "qfl/phase.hpp"
#include "support/generators.hpp"

using namespace qfl;
using qfl::testing::Gen;

namespace {

RealVector sorted_eigenvalues(const Matrix& m) {
  Eigen::ComplexEigenSolver<Matrix> es(m, false);
  RealVector ev = es.eigenvalues().real();
  std::sort(ev.data(), ev.data() + ev.size());
  return ev;
}

}  // namespace

TEST(ConvertBasis, IdentityIsFixed) {
  const Matrix id = Matrix::Identity(6, 6);
  EXPECT_LT(max_abs(to_majorana(id) - id), 1e-15);
  EXPECT_LT(max_abs(to_creation_annihilation(id) - id), 1e-15);
}

TEST(ConvertBasis, SingleModeGaugeInvariantCovariance) {
  for (double n : {0.0, 0.2, 0.5, 0.9}) {
    Matrix ca = Matrix::Zero(2, 2);
    ca(0, 0) = 1.0 - n;
    ca(1, 1) = n;
    const Matrix maj = to_majorana(ca);
    EXPECT_NEAR(maj(0, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(maj(1, 1).real(), 0.5, 1e-15);
    EXPECT_NEAR(maj(0, 1).imag(), (1.0 - 2.0 * n) / 2.0, 1e-15);
    EXPECT_NEAR(maj(0, 1).real(), 0.0, 1e-15);

    // Dense trace 1/2 tr(rho gamma_i gamma_j) with occupation n.
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 1.0 - n;
    rho(1, 1) = n;
    const std::vector<Matrix> g = majorana_ops(1);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const Complex dense = 0.5 * (rho * g[a] * g[b]).trace();
        EXPECT_LT(std::abs(dense - maj(a, b)), 1e-15);
      }
    }
  }
}

TEST(ConvertBasis, PairingBlockBecomesImaginaryAntisymmetric) {
  Matrix t = Matrix::Zero(4, 4);
  t(0, 3) = 0.5;
  t(1, 2) = -0.5;
  t(2, 1) = -0.5;  // -conj(B)
  t(3, 0) = 0.5;
  const HamiltonianMatrix h = validate_qf(t, Basis::creation_annihilation);
  const HamiltonianMatrix m = convert_basis(h, Basis::majorana);
  EXPECT_LT(m.entries.real().cwiseAbs().maxCoeff(), 1e-15);
  const RealMatrix r = m.entries.imag();
  EXPECT_LT((r + r.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_GT(r.cwiseAbs().maxCoeff(), 0.1);
}

TEST(ConvertBasis, RejectsOddDimensionAndBrokenStructure) {
  EXPECT_THROW(to_majorana(Matrix::Identity(3, 3)), DimensionMismatch);
  Gen gen(3);
  HamiltonianMatrix bad{gen.real(4, 4).cast<Complex>(), Basis::majorana};
  EXPECT_THROW(convert_basis(bad, Basis::creation_annihilation), StructureViolation);
}

TEST(ValidateQf, AcceptsAndRejects) {
  Gen gen(11);
  EXPECT_NO_THROW(validate_qf(gen.qf(3).entries, Basis::majorana));
  EXPECT_NO_THROW(validate_qf(gen.qf_ca(3).entries, Basis::creation_annihilation));

  RealMatrix sym = gen.real(4, 4);
  sym = (sym + sym.transpose()).eval();
  try {
    validate_qf(sym.cast<Complex>(), Basis::majorana);
    FAIL() << "symmetric real matrix accepted";
  } catch (const StructureViolation& e) {
    EXPECT_GT(e.residual(), 1e-3);
  }
}

TEST(ValidateQf, ResidualIsRelativeToScale) {
  Gen gen(12);
  Matrix t = gen.qf(2).entries * 1e6;
  t(0, 0) += 1e-6;  // far below 1e-9 relative
  EXPECT_NO_THROW(validate_qf(t, Basis::majorana));
}

TEST(BlockReduce, ZeroMatrix) {
  const BlockReduction r = block_reduce({Matrix::Zero(4, 4), Basis::majorana});
  EXPECT_LT(max_abs(r.u.entries - Matrix::Identity(4, 4)), 1e-15);
  EXPECT_EQ(r.lambda.cwiseAbs().maxCoeff(), 0.0);
}

TEST(BlockReduce, SingleModeAlreadyReduced) {
  for (double a : {1.5, -0.7}) {
    Matrix t = Matrix::Zero(2, 2);
    t(0, 0) = a;
    t(1, 1) = -a;
    const BlockReduction r = block_reduce({t, Basis::creation_annihilation});
    ASSERT_EQ(r.lambda.size(), 1);
    EXPECT_NEAR(r.lambda(0), std::abs(a), 1e-14);
  }
}

TEST(BlockReduce, RandomReconstructionAndSpectrum) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Gen gen(seed);
    const Eigen::Index L = gen.index(1, 5);
    const HamiltonianMatrix t = seed % 2 ? gen.qf(L) : gen.qf_ca(L);
    const BlockReduction r = block_reduce(t);
    const Matrix tc = convert_basis(t, Basis::creation_annihilation).entries;
    const Matrix& u = r.u.entries;
    Matrix target = Matrix::Zero(2 * L, 2 * L);
    for (Eigen::Index i = 0; i < L; ++i) {
      target(i, i) = r.lambda(i);
      target(i + L, i + L) = -r.lambda(i);
    }
    EXPECT_LT(max_abs(u.adjoint() * tc * u - target), 1e-10) << "seed " << seed;
    EXPECT_LT(bogoliubov_residual(u, Basis::creation_annihilation), 1e-10) << "seed " << seed;
    for (Eigen::Index i = 0; i + 1 < L; ++i) EXPECT_GE(r.lambda(i), r.lambda(i + 1));

    RealVector pm(2 * L);
    pm << r.lambda, -r.lambda;
    std::sort(pm.data(), pm.data() + pm.size());
    EXPECT_LT((pm - sorted_eigenvalues(tc)).cwiseAbs().maxCoeff(), 1e-10) << "seed " << seed;
  }
}

TEST(BlockReduce, DegenerateAndSingularSpectra) {
  Gen gen(5);
  // Two modes with equal energy and one zero mode, hidden by a rotation.
  const Eigen::Index L = 3;
  RealMatrix r = RealMatrix::Zero(2 * L, 2 * L);
  r(0, 3) = 1.3;
  r(3, 0) = -1.3;
  r(1, 4) = 1.3;
  r(4, 1) = -1.3;
  const RealMatrix o = gen.orthogonal(2 * L);
  const RealMatrix rr = o * r * o.transpose();
  const HamiltonianMatrix t{kI * rr.cast<Complex>(), Basis::majorana};
  const BlockReduction red = block_reduce(t);
  EXPECT_NEAR(red.lambda(0), 1.3, 1e-12);
  EXPECT_NEAR(red.lambda(1), 1.3, 1e-12);
  EXPECT_NEAR(red.lambda(2), 0.0, 1e-12);
  const Matrix tc = convert_basis(t, Basis::creation_annihilation).entries;
  const Matrix d = red.u.entries.adjoint() * tc * red.u.entries;
  EXPECT_LT(max_abs(d - Matrix(d.diagonal().asDiagonal())), 1e-10);
}

TEST(Expm, Examples) {
  EXPECT_LT(max_abs(expm(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)), 1e-15);

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = std::log(2.0);
  const Matrix e = expm(d);
  EXPECT_NEAR(e(0, 0).real(), 2.0, 1e-14);
  EXPECT_NEAR(e(1, 1).real(), 1.0, 1e-14);

  for (double th : {0.3, 1.0, 2.5}) {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 1) = th;
    a(1, 0) = -th;
    Matrix rot(2, 2);
    rot << std::cos(th), std::sin(th), -std::sin(th), std::cos(th);
    EXPECT_LT(max_abs(expm(a) - rot), 1e-14);
  }
}

TEST(Expm, SkewHermitianGivesUnitary) {
  Gen gen(21);
  for (int k = 0; k < 10; ++k) {
    const Matrix h = gen.hermitian(6);
    const Matrix u = expm(kI * h);
    EXPECT_LT(max_abs(u * u.adjoint() - Matrix::Identity(6, 6)), 1e-10);
  }
}

TEST(Expm, OverflowIsReported) {
  Matrix big = Matrix::Zero(2, 2);
  big(0, 0) = 1e6;
  EXPECT_THROW(expm(big), NumericalFailure);
}

TEST(PhaseProperties, RoundTripAllTypes) {
  for (std::uint64_t seed = 100; seed < 150; ++seed) {
    Gen gen(seed);
    const Eigen::Index L = gen.index(1, 5);
    const Eigen::Index K = gen.index(1, 4);
    const HamiltonianMatrix t = gen.qf(L);
    const HamiltonianMatrix back =
        convert_basis(convert_basis(t, Basis::creation_annihilation), Basis::majorana);
    EXPECT_LT(max_abs(back.entries - t.entries), 1e-12);

    const CouplingMatrix c = gen.coupling(L, K);
    const CouplingMatrix cb =
        convert_basis(convert_basis(c, Basis::creation_annihilation), Basis::majorana);
    EXPECT_LT(max_abs(cb.entries - c.entries), 1e-12);

    const BogoliubovTransform u{gen.orthogonal(2 * L).cast<Complex>(), Basis::majorana};
    const BogoliubovTransform ub =
        convert_basis(convert_basis(u, Basis::creation_annihilation), Basis::majorana);
    EXPECT_LT(max_abs(ub.entries - u.entries), 1e-12);

    const HamiltonianMatrix tca = gen.qf_ca(L);
    const HamiltonianMatrix tcb =
        convert_basis(convert_basis(tca, Basis::majorana), Basis::creation_annihilation);
    EXPECT_LT(max_abs(tcb.entries - tca.entries), 1e-12);
  }
}

TEST(PhaseProperties, ConversionPreservesSpectrum) {
  for (std::uint64_t seed = 200; seed < 230; ++seed) {
    Gen gen(seed);
    const HamiltonianMatrix t = gen.qf(gen.index(1, 5));
    const Matrix ca = convert_basis(t, Basis::creation_annihilation).entries;
    EXPECT_LT((sorted_eigenvalues(ca) - sorted_eigenvalues(t.entries)).cwiseAbs().maxCoeff(),
              1e-10);
  }
}

TEST(PhaseProperties, BogoliubovCompositionStaysReal) {
  for (std::uint64_t seed = 300; seed < 320; ++seed) {
    Gen gen(seed);
    const Eigen::Index L = gen.index(1, 5);
    const BogoliubovTransform a = block_reduce(gen.qf(L)).u;
    const BogoliubovTransform b = block_reduce(gen.qf(L)).u;
    const Matrix prod = a.entries * b.entries;
    EXPECT_LT(bogoliubov_residual(prod, Basis::creation_annihilation), 1e-10);
    EXPECT_LT(to_majorana(prod).imag().cwiseAbs().maxCoeff(), 1e-10);
  }
}
