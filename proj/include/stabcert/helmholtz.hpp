// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "stabcert/model.hpp"
#include "stabcert/normalize.hpp"

namespace stabcert {

/// Orthonormal frames for H0 = ran(C^*) + ker(C) and H1 = ran(C) + ker(C^*),
/// read off a full SVD C = U S V^*.  Columns of iota0/kappa0 are right singular
/// vectors, columns of iota1/kappa1 left singular vectors.
struct HelmholtzFrames {
  ComplexMatrix iota0;   // n0 x r, spans ran(C^*)
  ComplexMatrix kappa0;  // n0 x (n0 - r), spans ker(C)
  ComplexMatrix iota1;   // n1 x r, spans ran(C)
  ComplexMatrix kappa1;  // n1 x (n1 - r), spans ker(C^*)
  Index rank = 0;
  double sigma_min_pos = 0.0;  // closed-range constant; 0 when rank == 0
  ComplexMatrix C_tilde;       // r x r, iota1^* C iota0
  double C_tilde_inv_norm = 0.0;

  Index n0() const noexcept { return iota0.rows(); }
  Index n1() const noexcept { return iota1.rows(); }
  Index kernel_dim() const noexcept { return kappa0.cols(); }
};

/// Singular values >= rank_rel_tol * sigma_max count toward the rank.
HelmholtzFrames decompose(const ComplexMatrix& C, const Tolerances& tol = {});

/// (u, v) -> (iota0^* u, iota1^* v, kappa0^* u).
ComplexVector to_three_block(const HelmholtzFrames& frames, const ComplexVector& state);

/// Inverse of to_three_block on H0 x ran(C): returns (u, v) with v = iota1 x2.
ComplexVector from_three_block(const HelmholtzFrames& frames, const ComplexVector& coords);

/// The operator z + [[gamma, 0], [0, 0]] + [[0, -C^*], [C, 0]] on H0 x ran(C),
/// written in the coordinates of to_three_block.  Size n0 + r.
ComplexMatrix three_block_form(const ComplexMatrix& gamma, const HelmholtzFrames& frames,
                               Complex z);

/// Schur decoupling of three_block_form at a fixed z:
///   T1 * three_block_form * T2 = diag(reduced 2-block, z + gamma2).
struct DecoupledBlocks {
  Complex z{};
  ComplexMatrix gamma1_z;        // r x r Schur block
  ComplexMatrix gamma2;          // kappa0^* gamma kappa0
  ComplexMatrix kernel_inverse;  // (z + gamma2)^{-1}
  ComplexMatrix T1, T1_inv, T2, T2_inv;
};

/// Requires Re z > -c where c is the coercivity of gamma.
DecoupledBlocks decoupling_transforms(const ComplexMatrix& gamma, const HelmholtzFrames& frames,
                                      Complex z, double c);

/// The reduced operator z + [[gamma1_z, 0], [0, 0]] + [[0, -C~^*], [C~, 0]] (size 2r).
ComplexMatrix reduced_operator(const DecoupledBlocks& blocks, const HelmholtzFrames& frames);

/// Solves (z + [[gamma~, 0], [0, 0]] + [[0, -D^*], [D, 0]]) (u, v) = F through
/// the frames, T1/T2 and the two decoupled systems.  `frames` must come from
/// decompose(ns.D).  The v-part of F must lie in ran(D).
ComplexVector decoupled_solve(const NormalizedSystem& ns, const HelmholtzFrames& frames,
                              Complex z, const ComplexVector& F);

}  // namespace stabcert
