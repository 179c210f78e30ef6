// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "random_systems.hpp"
#include "stabcert/normalize.hpp"
#include "stabcert/verify.hpp"

using namespace stabcert;

TEST(SqrtFactor, SquaresBackAndInverts) {
  sample::SystemFactory f(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = f.integer(1, 7);
    const ComplexMatrix m = f.hermitian(n, 0.2, 5.0);
    const SquareRootPair s = sqrt_factor(m);
    EXPECT_LT((s.sqrt * s.sqrt - m).norm(), 1e-12);
    EXPECT_LT((s.sqrt * s.sqrt_inv - ComplexMatrix::Identity(n, n)).norm(), 1e-12);
    EXPECT_LT((s.sqrt - s.sqrt.adjoint()).norm(), 1e-13);
    EXPECT_GT(oracle::hermitian_min_eig_bisect(s.sqrt), 0.0);
  }
}

TEST(SqrtFactor, RejectsIndefinite) {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(1, 1) = -1.0;
  try {
    sqrt_factor(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPositiveDefinite);
  }
}

TEST(NormalizeSystem, DiagonalClosedForm) {
  RawSystem raw;
  raw.alpha = ComplexMatrix::Constant(1, 1, 4.0);
  raw.beta = ComplexMatrix::Constant(1, 1, 9.0);
  raw.gamma = ComplexMatrix::Constant(1, 1, 2.0);
  raw.C = ComplexMatrix::Constant(1, 1, 6.0);
  const NormalizedSystem ns = normalize_system(validate_system(raw));
  EXPECT_NEAR(ns.gamma_tilde(0, 0).real(), 0.5, 1e-15);  // 2 / 4
  EXPECT_NEAR(ns.D(0, 0).real(), 1.0, 1e-15);            // 6 / (3 * 2)
  EXPECT_NEAR(ns.c_gamma_tilde, 0.5, 1e-15);
  EXPECT_NEAR(normalization_condition(ns), 3.0 * (1.0 / 2.0), 1e-15);
}

TEST(NormalizeSystem, CoercivityOfNormalizedDamping) {
  sample::SystemFactory f(5);
  for (int trial = 0; trial < 10; ++trial) {
    const BlockSystem sys = validate_system(f.system(4, 3, 2, 0.5));
    const NormalizedSystem ns = normalize_system(sys);
    EXPECT_NEAR(ns.c_gamma_tilde, oracle::hermitian_min_eig_bisect(ns.gamma_tilde), 1e-11);
    // c(gamma~) >= c(gamma) / ||alpha||.
    EXPECT_GE(ns.c_gamma_tilde, sys.c_gamma() / operator_norm(sys.alpha()) - 1e-12);
  }
}

TEST(MapState, RoundTripAndEnergyIdentity) {
  sample::SystemFactory f(9);
  const BlockSystem sys = validate_system(f.system(3, 4, 3, 0.4));
  const NormalizedSystem ns = normalize_system(sys);
  const ComplexVector u = f.gaussian(7);
  const ComplexVector w = map_state(ns, u, MapDirection::Forward);
  EXPECT_LT((map_state(ns, w, MapDirection::Backward) - u).norm(), 1e-12 * u.norm());
  // ||w||^2 = <alpha u0, u0> + <beta u1, u1>.
  const Complex energy = u.head(3).dot(sys.alpha() * u.head(3)) + u.tail(4).dot(sys.beta() * u.tail(4));
  EXPECT_NEAR(w.squaredNorm(), energy.real(), 1e-11 * energy.real());
}

TEST(MapState, RejectsWrongLength) {
  sample::SystemFactory f(1);
  const NormalizedSystem ns = normalize_system(validate_system(f.system(2, 2, 1, 0.5)));
  EXPECT_THROW(map_state(ns, ComplexVector::Ones(3), MapDirection::Forward), Error);
}
