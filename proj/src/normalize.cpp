// SPDX-License-Identifier: Apache-2.0
#include "stabcert/normalize.hpp"

#include <algorithm>
#include <string>

namespace stabcert {

SquareRootPair sqrt_factor(const ComplexMatrix& m, const Tolerances& tol) {
  require_square(m, "matrix");
  require_finite(m, "matrix");
  const double asym = operator_norm(m - m.adjoint());
  if (asym > tol.hermitian_tol * operator_norm(m)) {
    throw Error(ErrorKind::NotHermitian, "square root requires a Hermitian matrix", "matrix",
                asym);
  }

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m));
  const RealVector& lambda = es.eigenvalues();
  // Near-singular input is refused, not regularized.
  if (lambda.size() > 0 && lambda(0) <= tol.eig_tol * std::max(lambda.maxCoeff(), 0.0)) {
    throw Error(ErrorKind::NotPositiveDefinite,
                "smallest eigenvalue " + std::to_string(lambda(0)) + " is not positive",
                "matrix", lambda(0));
  }

  const ComplexMatrix& v = es.eigenvectors();
  const RealVector root = lambda.cwiseSqrt();
  SquareRootPair out;
  out.sqrt = v * root.cast<Complex>().asDiagonal() * v.adjoint();
  out.sqrt_inv = v * root.cwiseInverse().cast<Complex>().asDiagonal() * v.adjoint();
  return out;
}

NormalizedSystem normalize_system(const BlockSystem& sys) {
  const Tolerances& tol = sys.tolerances();
  SquareRootPair a = sqrt_factor(sys.alpha(), tol);
  SquareRootPair b = sqrt_factor(sys.beta(), tol);

  NormalizedSystem ns;
  ns.gamma_tilde = a.sqrt_inv * sys.gamma() * a.sqrt_inv;
  ns.D = b.sqrt_inv * sys.C() * a.sqrt_inv;
  ns.sqrt_alpha = std::move(a.sqrt);
  ns.sqrt_alpha_inv = std::move(a.sqrt_inv);
  ns.sqrt_beta = std::move(b.sqrt);
  ns.sqrt_beta_inv = std::move(b.sqrt_inv);
  ns.tolerances = tol;
  ns.c_gamma_tilde = hermitian_min_eig(ns.gamma_tilde);
  if (!(ns.c_gamma_tilde > 0.0)) {
    throw Error(ErrorKind::NotCoercive, "normalized damping lost coercivity", "gamma_tilde",
                ns.c_gamma_tilde);
  }
  return ns;
}

ComplexVector map_state(const NormalizedSystem& ns, const ComplexVector& state,
                        MapDirection direction) {
  const Index n0 = ns.n0();
  const Index n1 = ns.n1();
  if (state.size() != n0 + n1) {
    throw Error(ErrorKind::DimensionMismatch,
                "state has length " + std::to_string(state.size()) + ", expected " +
                    std::to_string(n0 + n1),
                "state");
  }
  const bool fwd = direction == MapDirection::Forward;
  ComplexVector out(n0 + n1);
  out.head(n0) = (fwd ? ns.sqrt_alpha : ns.sqrt_alpha_inv) * state.head(n0);
  out.tail(n1) = (fwd ? ns.sqrt_beta : ns.sqrt_beta_inv) * state.tail(n1);
  return out;
}

double normalization_condition(const NormalizedSystem& ns) {
  const double fwd = std::max(operator_norm(ns.sqrt_alpha), operator_norm(ns.sqrt_beta));
  const double bwd = std::max(operator_norm(ns.sqrt_alpha_inv), operator_norm(ns.sqrt_beta_inv));
  return fwd * bwd;
}

}  // namespace stabcert
