// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "random_systems.hpp"
#include "stabcert/helmholtz.hpp"
#include "stabcert/verify.hpp"

using namespace stabcert;

namespace {

ComplexMatrix eye(Index n) { return ComplexMatrix::Identity(n, n); }

}  // namespace

TEST(Decompose, FramesMatchPrescribedRank) {
  sample::SystemFactory f(21);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n0 = f.integer(1, 6);
    const Index n1 = f.integer(1, 6);
    const Index r = f.integer(0, std::min(n0, n1));
    const ComplexMatrix C = f.coupling(n1, n0, r);
    const HelmholtzFrames h = decompose(C);
    ASSERT_EQ(h.rank, r);
    EXPECT_EQ(h.kernel_dim(), n0 - r);
    // [iota0 kappa0] and [iota1 kappa1] are unitary.
    ComplexMatrix q0(n0, n0), q1(n1, n1);
    q0 << h.iota0, h.kappa0;
    q1 << h.iota1, h.kappa1;
    EXPECT_LT((q0.adjoint() * q0 - eye(n0)).norm(), 1e-12);
    EXPECT_LT((q1.adjoint() * q1 - eye(n1)).norm(), 1e-12);
    if (n0 > r) EXPECT_LT((C * h.kappa0).norm(), 1e-12);
    if (n1 > r) EXPECT_LT((h.kappa1.adjoint() * C).norm(), 1e-12);
    if (r > 0) {
      EXPECT_LT((h.C_tilde - h.iota1.adjoint() * C * h.iota0).norm(), 1e-12);
      EXPECT_LT((C - h.iota1 * h.C_tilde * h.iota0.adjoint()).norm(), 1e-12);
      const double inv = oracle::power_norm(oracle::dense_inverse(h.C_tilde));
      EXPECT_NEAR(h.C_tilde_inv_norm, inv, 1e-8 * inv);
      EXPECT_NEAR(h.sigma_min_pos, 1.0 / inv, 1e-8);
    }
  }
}

TEST(Decompose, ZeroOperatorHasNoRange) {
  const HelmholtzFrames h = decompose(ComplexMatrix::Zero(3, 2));
  EXPECT_EQ(h.rank, 0);
  EXPECT_EQ(h.sigma_min_pos, 0.0);
  EXPECT_EQ(h.kernel_dim(), 2);
}

TEST(ThreeBlock, CoordinatesRoundTripOnAdmissibleStates) {
  sample::SystemFactory f(22);
  const ComplexMatrix C = f.coupling(5, 4, 2);
  const HelmholtzFrames h = decompose(C);
  ComplexVector state(9);
  state << f.gaussian(4), h.iota1 * f.gaussian(2);
  const ComplexVector coords = to_three_block(h, state);
  ASSERT_EQ(coords.size(), 4 + 2);
  EXPECT_LT((from_three_block(h, coords) - state).norm(), 1e-12);
}

TEST(ThreeBlock, MatchesFullOperatorOnH0xRanC) {
  sample::SystemFactory f(23);
  const Index n0 = 4, n1 = 3, r = 2;
  const ComplexMatrix gamma = f.damping(n0, 0.5);
  const ComplexMatrix C = f.coupling(n1, n0, r);
  const HelmholtzFrames h = decompose(C);
  const Complex z(0.3, -1.2);
  // z - B with B = [[-gamma, C^*], [-C, 0]].
  ComplexMatrix full = z * eye(n0 + n1);
  full.topLeftCorner(n0, n0) += gamma;
  full.topRightCorner(n0, n1) -= C.adjoint();
  full.bottomLeftCorner(n1, n0) += C;
  ComplexVector state(n0 + n1);
  state << f.gaussian(n0), h.iota1 * f.gaussian(r);
  const ComplexVector lhs = to_three_block(h, full * state);
  const ComplexVector rhs = three_block_form(gamma, h, z) * to_three_block(h, state);
  EXPECT_LT((lhs - rhs).norm(), 1e-12 * rhs.norm());
}

TEST(Decoupling, BlockDiagonalizesThreeBlockForm) {
  sample::SystemFactory f(24);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n0 = f.integer(2, 6);
    const Index n1 = f.integer(1, 6);
    const Index r = f.integer(1, std::min(n0 - 1, n1));
    const double c = f.uniform(0.3, 1.0);
    const ComplexMatrix gamma = f.damping(n0, c);
    const HelmholtzFrames h = decompose(f.coupling(n1, n0, r));
    const Complex z(f.uniform(-0.9 * c, 2.0), f.uniform(-5.0, 5.0));
    const DecoupledBlocks b = decoupling_transforms(gamma, h, z, c);
    const Index k = n0 - r;
    ComplexMatrix expected = ComplexMatrix::Zero(2 * r + k, 2 * r + k);
    expected.topLeftCorner(2 * r, 2 * r) = reduced_operator(b, h);
    expected.bottomRightCorner(k, k) = z * eye(k) + b.gamma2;
    const ComplexMatrix M = three_block_form(gamma, h, z);
    EXPECT_LT((b.T1 * M * b.T2 - expected).norm(), 1e-11 * M.norm());
    EXPECT_LT((b.T1 * b.T1_inv - eye(2 * r + k)).norm(), 1e-13);
    EXPECT_LT((b.T2 * b.T2_inv - eye(2 * r + k)).norm(), 1e-13);
    // Schur block coercivity: Re gamma1_z >= min(Re z + c, c).
    EXPECT_GE(oracle::hermitian_min_eig_bisect(b.gamma1_z), std::min(z.real() + c, c) - 1e-10);
  }
}

TEST(Decoupling, RejectsLeftOfHalfPlane) {
  sample::SystemFactory f(25);
  const ComplexMatrix gamma = f.damping(3, 0.5);
  const HelmholtzFrames h = decompose(f.coupling(2, 3, 1));
  try {
    decoupling_transforms(gamma, h, Complex(-0.5, 0.0), 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::HalfPlaneViolation);
  }
}

TEST(DecoupledSolve, AgreesWithDenseSolve) {
  sample::SystemFactory f(26);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n0 = f.integer(1, 6);
    const Index n1 = f.integer(1, 6);
    const Index r = f.integer(1, std::min(n0, n1));
    const BlockSystem sys = validate_system(f.system(n0, n1, r, 0.4));
    const NormalizedSystem ns = normalize_system(sys);
    const HelmholtzFrames h = decompose(ns.D);
    const Complex z(f.uniform(-0.45 * ns.c_gamma_tilde, 1.0), f.uniform(-4.0, 4.0));
    ComplexVector F(n0 + n1);
    F << f.gaussian(n0), h.iota1 * f.gaussian(h.rank);
    const ComplexMatrix A = z * eye(n0 + n1) - assemble_generator(ns);
    const ComplexVector ref = oracle::dense_solve(A, F);
    const ComplexVector got = decoupled_solve(ns, h, z, F);
    EXPECT_LT((got - ref).norm(), 1e-9 * ref.norm());
  }
}

TEST(DecoupledSolve, RejectsDataOutsideRange) {
  sample::SystemFactory f(27);
  const NormalizedSystem ns = normalize_system(validate_system(f.system(3, 3, 1, 0.4)));
  const HelmholtzFrames h = decompose(ns.D);
  ComplexVector F(6);
  F << f.gaussian(3), h.kappa1 * f.gaussian(2);
  try {
    decoupled_solve(ns, h, Complex(1.0, 0.0), F);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RangeViolation);
  }
}
