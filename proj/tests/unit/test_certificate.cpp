// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "random_systems.hpp"
#include "stabcert/certificate.hpp"
#include "stabcert/verify.hpp"

using namespace stabcert;

namespace {

BlockSystem scalar_system() {
  RawSystem raw{ComplexMatrix::Ones(1, 1), ComplexMatrix::Ones(1, 1), ComplexMatrix::Ones(1, 1),
                ComplexMatrix::Ones(1, 1)};
  return validate_system(raw);
}

ComplexMatrix hermitian_part_of_shifted(const ComplexMatrix& gamma, const ComplexMatrix& D_inv,
                                        double delta) {
  const ComplexMatrix g = shifted_damping_matrix(gamma, D_inv, delta);
  return 0.5 * (g + g.adjoint());
}

}  // namespace

TEST(DampingBound, HandComputedValues) {
  // c = 1, |gamma| = 1, |C^-1| = 1, delta = 0.5, p = 1:
  //   u = 1 - 0.5 (1 + 1.5^2 / 2) = -0.0625,  v = 0.25.
  const DampingBound b = damping_lower_bound(1.0, 1.0, 1.0, 0.5, 1.0);
  EXPECT_NEAR(b.u_term, -0.0625, 1e-15);
  EXPECT_NEAR(b.v_term, 0.25, 1e-15);
}

TEST(DampingBound, RejectsParametersOutOfRange) {
  EXPECT_THROW(damping_lower_bound(1.0, 1.0, 1.0, 0.5, 2.0), Error);
  EXPECT_THROW(damping_lower_bound(1.0, 1.0, 1.0, 0.0, 1.0), Error);
  EXPECT_THROW(damping_lower_bound(0.0, 1.0, 1.0, 0.5, 1.0), Error);
}

TEST(DampingBound, LowerBoundsShiftedBlock) {
  sample::SystemFactory f(41);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = f.integer(1, 5);
    const double c = f.uniform(0.3, 1.0);
    const ComplexMatrix gamma = f.damping(n, c);
    const ComplexMatrix D = f.conditioned(n, 0.3, 2.0);
    const ComplexMatrix D_inv = oracle::dense_inverse(D);
    const double delta = f.uniform(0.01, 0.99) * c;
    const double p = f.uniform(0.05, 1.95);
    const DampingBound b =
        damping_lower_bound(c, oracle::power_norm(gamma), oracle::power_norm(D_inv), delta, p);
    const double floor = std::min(b.u_term, b.v_term);
    EXPECT_GE(oracle::hermitian_min_eig_bisect(hermitian_part_of_shifted(gamma, D_inv, delta)),
              floor - 1e-10);
  }
}

TEST(OptimizeShift, WeakCouplingLimitIsQuarterC) {
  // As |C^-1| -> 0, d -> max_delta min(c - delta, delta) / 2 = c / 4.
  const double c = 0.8;
  const ShiftChoice s = optimize_shift(c, 0.5, 1e-6, 2000);
  EXPECT_NEAR(s.d, c / 4.0, 2e-3);
  EXPECT_NEAR(s.delta_star, c / 2.0, 2e-3);
  EXPECT_GT(s.d, 0.0);
}

TEST(OptimizeShift, OptimumBeatsNeighbours) {
  const double c = 1.0, g = 1.0, k = 1.0;
  const ShiftChoice s = optimize_shift(c, g, k, 400);
  const DampingBound at = damping_lower_bound(c, g, k, s.delta_star, s.p_star);
  EXPECT_NEAR(s.d, 0.5 * std::min(at.u_term, at.v_term), 1e-15);
  EXPECT_NEAR(s.c_tilde, at.u_term, 1e-15);
  for (double dd : {0.97, 1.03}) {
    for (double dp : {0.97, 1.03}) {
      const DampingBound nb = damping_lower_bound(c, g, k, s.delta_star * dd, s.p_star * dp);
      EXPECT_LE(0.5 * std::min(nb.u_term, nb.v_term), s.d + 1e-12);
    }
  }
}

TEST(OptimizeShift, DegenerateInputs) {
  EXPECT_THROW(optimize_shift(1.0, 1.0, 0.0), Error);
  EXPECT_THROW(optimize_shift(0.0, 1.0, 1.0), Error);
}

TEST(InvertibleCertificate, ConstantFormula) {
  const InvertibleCaseCertificate cert = invertible_certificate(1.0, 1.0, 1.0, 400);
  EXPECT_NEAR(cert.M_inner,
              (2.0 / cert.d) * ((1.0 + 1.0 + cert.delta_star) * 1.0 + 2.0), 1e-12);
}

TEST(KernelBlockBound, Formula) {
  EXPECT_DOUBLE_EQ(kernel_block_bound(1.0, -0.25), 1.0 / 0.75);
  EXPECT_THROW(kernel_block_bound(1.0, -1.0), Error);
}

TEST(FullCertificate, ScalarBenchmark) {
  const StabilityCertificate cert = full_certificate(scalar_system());
  EXPECT_GT(cert.delta_cert, 0.0);
  EXPECT_LE(cert.delta_cert, 0.25);
  EXPECT_FALSE(cert.has_kernel);
  EXPECT_FALSE(cert.trivial_range);
  EXPECT_TRUE(cert.audit.passed);
  EXPECT_DOUBLE_EQ(cert.kappa_norm, 1.0);
  // The constant dominates the resolvent at the origin.
  EXPECT_GE(cert.M_total, oracle::golden_ratio());
}

TEST(FullCertificate, ZeroCouplingCoversH0Only) {
  sample::SystemFactory f(42);
  const BlockSystem sys = validate_system(f.system(3, 2, 0, 0.5));
  const StabilityCertificate cert = full_certificate(sys);
  EXPECT_TRUE(cert.trivial_range);
  EXPECT_EQ(cert.rank, 0);
  const NormalizedSystem ns = normalize_system(sys);
  EXPECT_NEAR(cert.delta_cert, ns.c_gamma_tilde / 4.0, 1e-15);
  const ComplexMatrix restricted = restricted_generator(ns, decompose(ns.D));
  EXPECT_EQ(restricted.rows(), 3);
  EXPECT_LE(spectral_abscissa(restricted), -cert.delta_cert);
}

TEST(FullCertificate, KernelCaseBoundsSweeps) {
  sample::SystemFactory f(43);
  for (int trial = 0; trial < 5; ++trial) {
    const BlockSystem sys = validate_system(f.system(5, 3, 2, 0.4));
    const StabilityCertificate cert = full_certificate(sys);
    ASSERT_TRUE(cert.has_kernel);
    EXPECT_GT(cert.transform_bound, 1.0);
    EXPECT_NEAR(cert.kernel_bound, 4.0 / (3.0 * cert.c_gamma), 1e-12);
    const NormalizedSystem ns = normalize_system(sys);
    const ComplexMatrix B = restricted_generator(ns, decompose(ns.D));
    EXPECT_LE(spectral_abscissa(B), -cert.delta_cert + 1e-9);
    for (double a : {0.0, -0.5 * cert.delta_cert}) {
      const ResolventSweepReport s = gp_sweep(B, a, 50.0, 201);
      EXPECT_TRUE(s.singular_points.empty());
      EXPECT_LE(s.max_norm, cert.M_total * (1.0 + 1e-6));
    }
  }
}
