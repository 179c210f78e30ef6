// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "stabcert/model.hpp"

namespace stabcert {

struct SquareRootPair {
  ComplexMatrix sqrt;
  ComplexMatrix sqrt_inv;
};

/// Hermitian square root of a Hermitian positive definite matrix and its
/// inverse, both from one eigendecomposition.
SquareRootPair sqrt_factor(const ComplexMatrix& m, const Tolerances& tol = {});

/// The system in the variables U~ = diag(sqrt(alpha), sqrt(beta)) U, where the
/// mass matrices become identities:
///   gamma_tilde = alpha^{-1/2} gamma alpha^{-1/2},  D = beta^{-1/2} C alpha^{-1/2}.
struct NormalizedSystem {
  ComplexMatrix gamma_tilde;
  ComplexMatrix D;
  ComplexMatrix sqrt_alpha;
  ComplexMatrix sqrt_alpha_inv;
  ComplexMatrix sqrt_beta;
  ComplexMatrix sqrt_beta_inv;
  double c_gamma_tilde = 0.0;
  Tolerances tolerances;

  Index n0() const noexcept { return gamma_tilde.rows(); }
  Index n1() const noexcept { return D.rows(); }
};

NormalizedSystem normalize_system(const BlockSystem& sys);

enum class MapDirection { Forward, Backward };

/// Forward applies diag(sqrt(alpha), sqrt(beta)); Backward applies the inverse.
ComplexVector map_state(const NormalizedSystem& ns, const ComplexVector& state,
                        MapDirection direction);

/// ||diag(sqrt a, sqrt b)|| * ||diag(sqrt a, sqrt b)^{-1}||: the factor lost
/// when a bound in normalized variables is transported back.
double normalization_condition(const NormalizedSystem& ns);

}  // namespace stabcert
