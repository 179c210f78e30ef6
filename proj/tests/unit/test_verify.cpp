// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "random_systems.hpp"
#include "stabcert/verify.hpp"

using namespace stabcert;

namespace {

ComplexMatrix scalar_generator() {
  ComplexMatrix b(2, 2);
  b << -1.0, 1.0, -1.0, 0.0;
  return b;
}

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::InvalidInput;
}

}  // namespace

TEST(Generator, ScalarBenchmarkLayout) {
  RawSystem raw{ComplexMatrix::Ones(1, 1), ComplexMatrix::Ones(1, 1), ComplexMatrix::Ones(1, 1),
                ComplexMatrix::Ones(1, 1)};
  const BlockSystem sys = validate_system(raw);
  EXPECT_LT((assemble_generator(normalize_system(sys)) - scalar_generator()).norm(), 1e-15);
  EXPECT_LT((assemble_original_generator(sys) - scalar_generator()).norm(), 1e-15);
}

TEST(Generator, ConjugationIdentity) {
  sample::SystemFactory f(31);
  for (int trial = 0; trial < 10; ++trial) {
    const BlockSystem sys = validate_system(f.system(f.integer(1, 5), f.integer(1, 5), 1, 0.5));
    const NormalizedSystem ns = normalize_system(sys);
    const Index n0 = sys.n0(), n1 = sys.n1();
    ComplexMatrix s = ComplexMatrix::Zero(n0 + n1, n0 + n1);
    s.topLeftCorner(n0, n0) = ns.sqrt_alpha;
    s.bottomRightCorner(n1, n1) = ns.sqrt_beta;
    const ComplexMatrix lhs = s * assemble_original_generator(sys);
    const ComplexMatrix rhs = assemble_generator(ns) * s;
    EXPECT_LT((lhs - rhs).norm(), 1e-12 * rhs.norm());
  }
}

TEST(Dissipativity, NormalizedGeneratorIsMDissipative) {
  sample::SystemFactory f(32);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix gamma = f.semidefinite_damping(4, trial % 2 == 0);
    const ComplexMatrix D = f.coupling(3, 4, f.integer(0, 3));
    const DissipativityReport rep = check_m_dissipative(assemble_generator(gamma, D));
    EXPECT_TRUE(rep.dissipative);
    EXPECT_TRUE(rep.shifted_invertible);
    EXPECT_LE(rep.max_re_quadratic, 1e-12);
  }
}

TEST(Dissipativity, DetectsGrowth) {
  ComplexMatrix b = ComplexMatrix::Identity(2, 2);
  EXPECT_FALSE(check_m_dissipative(b).dissipative);
  EXPECT_FALSE(check_m_dissipative(b).shifted_invertible);  // I - B = 0
}

TEST(ResolventNorm, GoldenRatioAtOrigin) {
  EXPECT_NEAR(resolvent_norm(scalar_generator(), 0.0), oracle::golden_ratio(), 1e-12);
  const ComplexMatrix inv = oracle::dense_inverse(scalar_generator());
  EXPECT_NEAR(oracle::singular_max_2x2(inv), oracle::golden_ratio(), 1e-12);
}

TEST(ResolventNorm, SingularAtEigenvalue) {
  const Complex lambda(-0.5, std::sqrt(3.0) / 2.0);
  EXPECT_EQ(kind_of([&] { resolvent_norm(scalar_generator(), lambda); }), ErrorKind::Singular);
}

TEST(GpSweep, OddGridContainsZero) {
  const ResolventSweepReport rep = gp_sweep(scalar_generator(), 0.0, 10.0, 10);
  ASSERT_EQ(rep.lambdas.size(), 11u);
  EXPECT_EQ(rep.lambdas[5], 0.0);
  EXPECT_DOUBLE_EQ(rep.lambdas.front(), -10.0);
  EXPECT_DOUBLE_EQ(rep.lambdas.back(), 10.0);
  EXPECT_NEAR(rep.norms[5], oracle::golden_ratio(), 1e-12);
  EXPECT_TRUE(rep.singular_points.empty());
  EXPECT_GE(rep.max_norm, oracle::golden_ratio() - 1e-12);
}

TEST(GpSweep, RecordsSingularPoints) {
  ComplexMatrix b = ComplexMatrix::Zero(1, 1);
  const ResolventSweepReport rep = gp_sweep(b, 0.0, 1.0, 3);
  ASSERT_EQ(rep.singular_points.size(), 1u);
  EXPECT_EQ(rep.singular_points[0], 0.0);
  EXPECT_TRUE(std::isinf(rep.max_norm));
}

TEST(GpSweep, RejectsBadArguments) {
  EXPECT_EQ(kind_of([] { gp_sweep(scalar_generator(), 0.0, 1.0, 1); }),
            ErrorKind::ParameterOutOfRange);
  EXPECT_EQ(kind_of([] { gp_sweep(scalar_generator(), 0.0, 0.0, 11); }),
            ErrorKind::ParameterOutOfRange);
}

TEST(SpectralAbscissa, ScalarBenchmarkRoots) {
  const auto [r1, r2] = oracle::quadratic_roots(1.0, 1.0);
  EXPECT_NEAR(spectral_abscissa(scalar_generator()), std::max(r1.real(), r2.real()), 1e-13);
}

TEST(Simulate, MatchesEigenExponential) {
  sample::SystemFactory f(33);
  const NormalizedSystem ns = normalize_system(validate_system(f.system(3, 3, 2, 0.5)));
  const ComplexMatrix B = assemble_generator(ns);
  const ComplexVector u0 = f.gaussian(6);
  const TrajectoryTrace tr = simulate(B, u0, 4.0, 41);
  ASSERT_EQ(tr.states.size(), 41u);
  EXPECT_EQ(to_string(tr.expm_path), "pade13-scaling-squaring-stepped");
  for (std::size_t k = 0; k < tr.states.size(); k += 10) {
    const ComplexVector ref = oracle::expm_eig_apply(B, tr.times[k], u0);
    EXPECT_LT((tr.states[k] - ref).norm(), 1e-10 * u0.norm()) << tr.times[k];
    EXPECT_NEAR(tr.state_norms[k], tr.states[k].norm(), 1e-14);
  }
}

TEST(FitDecayRate, ScalarBenchmarkRate) {
  ComplexVector u0(2);
  u0 << 1.0, 0.0;
  const TrajectoryTrace tr = simulate(scalar_generator(), u0, 20.0, 401);
  ASSERT_TRUE(tr.fitted_rate.has_value());
  const auto [r1, r2] = oracle::quadratic_roots(1.0, 1.0);
  EXPECT_NEAR(*tr.fitted_rate, -r1.real(), 1e-2);
}

TEST(FitDecayRate, PureExponential) {
  ComplexMatrix b = ComplexMatrix::Constant(1, 1, -0.7);
  const TrajectoryTrace tr = simulate(b, ComplexVector::Ones(1), 10.0, 101);
  EXPECT_NEAR(fit_decay_rate(tr), 0.7, 1e-10);
}

TEST(FitDecayRate, Errors) {
  ComplexMatrix b = ComplexMatrix::Constant(1, 1, -0.7);
  EXPECT_EQ(kind_of([&] { fit_decay_rate(simulate(b, ComplexVector::Ones(1), 1.0, 8)); }),
            ErrorKind::TooFewSamples);
  ComplexMatrix fast = ComplexMatrix::Constant(1, 1, -100.0);
  EXPECT_EQ(kind_of([&] { fit_decay_rate(simulate(fast, ComplexVector::Ones(1), 10.0, 101)); }),
            ErrorKind::Underflow);
}

TEST(AdmissibleInitial, ProjectsOntoBetaInverseRange) {
  sample::SystemFactory f(34);
  const BlockSystem sys = validate_system(f.system(4, 4, 2, 0.5));
  const HelmholtzFrames h = decompose(sys.C());
  const ComplexVector v0 = f.gaussian(4);
  const AdmissibleInitial adm = admissible_initial(sys.beta(), h, v0);
  // beta v_adm lies in ran(C).
  EXPECT_LT((h.kappa1.adjoint() * (sys.beta() * adm.v_adm)).norm(), 1e-12);
  EXPECT_NEAR(adm.residual, (adm.v_adm - v0).norm(), 1e-14);
  // Admissible data is a fixed point.
  EXPECT_LT(admissible_initial(sys.beta(), h, adm.v_adm).residual, 1e-12);
}

TEST(BlockInverse, MatchesDenseInverse) {
  sample::SystemFactory f(35);
  const Index n = 3;
  const ComplexMatrix A = f.gaussian(n, n), B = f.conditioned(n, 0.5, 2.0),
                      C = f.conditioned(n, 0.5, 2.0);
  ComplexMatrix M = ComplexMatrix::Zero(2 * n, 2 * n);
  M << A, B, C, ComplexMatrix::Zero(n, n);
  const ComplexMatrix inv = block_inverse(A, B, C);
  EXPECT_LT((inv - oracle::dense_inverse(M)).norm(), 1e-11 * inv.norm());
  EXPECT_LT((M * inv - ComplexMatrix::Identity(2 * n, 2 * n)).norm(), 1e-12);
}

TEST(BlockInverse, RejectsSingularBlock) {
  const ComplexMatrix I = ComplexMatrix::Identity(2, 2);
  EXPECT_EQ(kind_of([&] { block_inverse(I, ComplexMatrix::Zero(2, 2), I); }),
            ErrorKind::SingularBlock);
}

TEST(ChangeOfVariables, IdentityAndPreconditions) {
  sample::SystemFactory f(36);
  const NormalizedSystem ns = normalize_system(validate_system(f.system(3, 3, 3, 0.5)));
  const ComplexMatrix B = assemble_generator(ns);
  const ComplexVector U = f.gaussian(6);
  const Complex z(0.2, 1.3);
  const ComplexVector F = (z * ComplexMatrix::Identity(6, 6) - B) * U;
  EXPECT_LT(change_of_variables_residual(ns, z, 0.1, U, F), 1e-12 * (U.norm() + F.norm()));

  const ComplexVector F0 = -B * U;
  EXPECT_EQ(kind_of([&] { change_of_variables_residual(ns, 0.0, 0.1, U, F0); }),
            ErrorKind::ZeroFrequency);
  const Complex zneg(-0.1, 0.0);
  const ComplexVector Fneg = (zneg * ComplexMatrix::Identity(6, 6) - B) * U;
  EXPECT_EQ(kind_of([&] { change_of_variables_residual(ns, zneg, 0.1, U, Fneg); }),
            ErrorKind::DegenerateShift);
  EXPECT_EQ(kind_of([&] { change_of_variables_residual(ns, z, 0.1, U, 2.0 * F); }),
            ErrorKind::PreconditionViolation);
}
