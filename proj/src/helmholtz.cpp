// SPDX-License-Identifier: Apache-2.0
#include "stabcert/helmholtz.hpp"

#include <string>

namespace stabcert {

namespace {

ComplexMatrix identity(Index n) { return ComplexMatrix::Identity(n, n); }

void require_gamma_shape(const ComplexMatrix& gamma, const HelmholtzFrames& frames) {
  if (gamma.rows() != frames.n0() || gamma.cols() != frames.n0()) {
    throw Error(ErrorKind::DimensionMismatch,
                "gamma must be " + std::to_string(frames.n0()) + "x" +
                    std::to_string(frames.n0()),
                "gamma");
  }
}

}  // namespace

HelmholtzFrames decompose(const ComplexMatrix& C, const Tolerances& tol) {
  require_finite(C, "C");
  const Index n1 = C.rows();
  const Index n0 = C.cols();

  Eigen::BDCSVD<ComplexMatrix> svd(C, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();

  Index r = 0;
  if (s.size() > 0 && s(0) > 0.0) {
    const double cutoff = tol.rank_rel_tol * s(0);
    while (r < s.size() && s(r) >= cutoff) ++r;
  }

  HelmholtzFrames f;
  f.rank = r;
  f.iota0 = svd.matrixV().leftCols(r);
  f.kappa0 = svd.matrixV().rightCols(n0 - r);
  f.iota1 = svd.matrixU().leftCols(r);
  f.kappa1 = svd.matrixU().rightCols(n1 - r);
  f.C_tilde = f.iota1.adjoint() * C * f.iota0;
  if (r > 0) {
    f.sigma_min_pos = s(r - 1);
    f.C_tilde_inv_norm = 1.0 / f.sigma_min_pos;
  }
  return f;
}

ComplexVector to_three_block(const HelmholtzFrames& frames, const ComplexVector& state) {
  const Index n0 = frames.n0();
  const Index n1 = frames.n1();
  const Index r = frames.rank;
  if (state.size() != n0 + n1) {
    throw Error(ErrorKind::DimensionMismatch, "state length does not match frames", "state");
  }
  ComplexVector x(n0 + r);
  x.head(r) = frames.iota0.adjoint() * state.head(n0);
  x.segment(r, r) = frames.iota1.adjoint() * state.tail(n1);
  x.tail(n0 - r) = frames.kappa0.adjoint() * state.head(n0);
  return x;
}

ComplexVector from_three_block(const HelmholtzFrames& frames, const ComplexVector& coords) {
  const Index n0 = frames.n0();
  const Index n1 = frames.n1();
  const Index r = frames.rank;
  if (coords.size() != n0 + r) {
    throw Error(ErrorKind::DimensionMismatch, "coordinate length does not match frames",
                "coords");
  }
  ComplexVector state(n0 + n1);
  state.head(n0) = frames.iota0 * coords.head(r) + frames.kappa0 * coords.tail(n0 - r);
  state.tail(n1) = frames.iota1 * coords.segment(r, r);
  return state;
}

ComplexMatrix three_block_form(const ComplexMatrix& gamma, const HelmholtzFrames& frames,
                               Complex z) {
  require_gamma_shape(gamma, frames);
  const Index r = frames.rank;
  const Index k = frames.kernel_dim();
  const ComplexMatrix& i0 = frames.iota0;
  const ComplexMatrix& k0 = frames.kappa0;

  ComplexMatrix m = z * identity(2 * r + k);
  m.block(0, 0, r, r) += i0.adjoint() * gamma * i0;
  m.block(0, 2 * r, r, k) += i0.adjoint() * gamma * k0;
  m.block(2 * r, 0, k, r) += k0.adjoint() * gamma * i0;
  m.block(2 * r, 2 * r, k, k) += k0.adjoint() * gamma * k0;
  // iota0^* C^* iota1 is the adjoint of C_tilde.
  m.block(0, r, r, r) -= frames.C_tilde.adjoint();
  m.block(r, 0, r, r) += frames.C_tilde;
  return m;
}

DecoupledBlocks decoupling_transforms(const ComplexMatrix& gamma, const HelmholtzFrames& frames,
                                      Complex z, double c) {
  require_gamma_shape(gamma, frames);
  if (!(z.real() > -c)) {
    throw Error(ErrorKind::HalfPlaneViolation,
                "Re z = " + std::to_string(z.real()) + " must exceed -c = " + std::to_string(-c),
                "z", z.real());
  }
  const Index r = frames.rank;
  const Index k = frames.kernel_dim();
  const ComplexMatrix& i0 = frames.iota0;
  const ComplexMatrix& k0 = frames.kappa0;

  DecoupledBlocks b;
  b.z = z;
  b.gamma2 = k0.adjoint() * gamma * k0;
  if (k > 0) {
    Eigen::FullPivLU<ComplexMatrix> lu(z * identity(k) + b.gamma2);
    if (!lu.isInvertible()) {
      throw Error(ErrorKind::SingularKernelBlock, "z + kappa0^* gamma kappa0 is singular");
    }
    b.kernel_inverse = lu.inverse();
  } else {
    b.kernel_inverse.resize(0, 0);
  }

  const ComplexMatrix top_right = i0.adjoint() * gamma * k0;   // r x k
  const ComplexMatrix bottom_left = k0.adjoint() * gamma * i0;  // k x r
  const ComplexMatrix right_factor = top_right * b.kernel_inverse;   // r x k
  const ComplexMatrix lower_factor = b.kernel_inverse * bottom_left;  // k x r
  b.gamma1_z = i0.adjoint() * gamma * i0 - top_right * lower_factor;

  const Index n = 2 * r + k;
  b.T1 = identity(n);
  b.T1.block(0, 2 * r, r, k) = -right_factor;
  b.T1_inv = identity(n);
  b.T1_inv.block(0, 2 * r, r, k) = right_factor;
  b.T2 = identity(n);
  b.T2.block(2 * r, 0, k, r) = -lower_factor;
  b.T2_inv = identity(n);
  b.T2_inv.block(2 * r, 0, k, r) = lower_factor;
  return b;
}

ComplexMatrix reduced_operator(const DecoupledBlocks& blocks, const HelmholtzFrames& frames) {
  const Index r = frames.rank;
  ComplexMatrix m = blocks.z * identity(2 * r);
  m.topLeftCorner(r, r) += blocks.gamma1_z;
  m.topRightCorner(r, r) -= frames.C_tilde.adjoint();
  m.bottomLeftCorner(r, r) += frames.C_tilde;
  return m;
}

ComplexVector decoupled_solve(const NormalizedSystem& ns, const HelmholtzFrames& frames,
                              Complex z, const ComplexVector& F) {
  const Index n0 = ns.n0();
  const Index n1 = ns.n1();
  if (frames.n0() != n0 || frames.n1() != n1) {
    throw Error(ErrorKind::DimensionMismatch, "frames do not match the system", "frames");
  }
  if (F.size() != n0 + n1) {
    throw Error(ErrorKind::DimensionMismatch, "right-hand side has wrong length", "F");
  }
  const double off_range = (frames.kappa1.adjoint() * F.tail(n1)).norm();
  if (off_range > 1e3 * ns.tolerances.solve_tol * F.norm()) {
    throw Error(ErrorKind::RangeViolation, "v-component of F is not in ran(D)", "F",
                off_range);
  }

  const DecoupledBlocks blocks = decoupling_transforms(ns.gamma_tilde, frames, z, ns.c_gamma_tilde);
  const Index r = frames.rank;
  const Index k = frames.kernel_dim();

  const ComplexVector rhs = blocks.T1 * to_three_block(frames, F);

  ComplexVector x(2 * r + k);
  if (r > 0) {
    Eigen::FullPivLU<ComplexMatrix> lu(reduced_operator(blocks, frames));
    if (!lu.isInvertible()) {
      throw Error(ErrorKind::SingularReducedBlock, "reduced 2-block operator is singular");
    }
    x.head(2 * r) = lu.solve(rhs.head(2 * r));
  }
  x.tail(k) = blocks.kernel_inverse * rhs.tail(k);

  return from_three_block(frames, blocks.T2 * x);
}

}  // namespace stabcert
