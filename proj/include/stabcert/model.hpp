// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <string_view>

#include <Eigen/Dense>

#include "stabcert/error.hpp"

namespace stabcert {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative tolerances shared by the pipeline.  All must lie in (0, 1e-3].
struct Tolerances {
  double hermitian_tol = 1e-12;
  double rank_rel_tol = 1e-10;
  double solve_tol = 1e-10;
  double eig_tol = 1e-10;

  void validate() const;
};

/// The four coefficient matrices of
///   d/dt diag(alpha, beta) U + [[gamma, 0], [0, 0]] U + [[0, -C^*], [C, 0]] U = 0
/// before any validation.  alpha, gamma act on H0 = C^n0, beta on H1 = C^n1 and
/// C maps H0 -> H1.
struct RawSystem {
  ComplexMatrix alpha;
  ComplexMatrix beta;
  ComplexMatrix gamma;
  ComplexMatrix C;
};

/// A RawSystem that passed validate_system, together with its coercivity
/// constants.  Only validate_system constructs one.
class BlockSystem {
 public:
  const ComplexMatrix& alpha() const noexcept { return raw_.alpha; }
  const ComplexMatrix& beta() const noexcept { return raw_.beta; }
  const ComplexMatrix& gamma() const noexcept { return raw_.gamma; }
  const ComplexMatrix& C() const noexcept { return raw_.C; }
  const RawSystem& raw() const noexcept { return raw_; }
  const Tolerances& tolerances() const noexcept { return tol_; }

  Index n0() const noexcept { return raw_.alpha.rows(); }
  Index n1() const noexcept { return raw_.beta.rows(); }

  double c_alpha() const noexcept { return c_alpha_; }
  double c_beta() const noexcept { return c_beta_; }
  double c_gamma() const noexcept { return c_gamma_; }

 private:
  friend BlockSystem validate_system(const RawSystem& raw, const Tolerances& tol);
  BlockSystem() = default;

  RawSystem raw_;
  Tolerances tol_;
  double c_alpha_ = 0.0;
  double c_beta_ = 0.0;
  double c_gamma_ = 0.0;
};

/// Checks shapes, finiteness, Hermitian symmetry of alpha and beta and strict
/// coercivity of alpha, beta and Re gamma.
BlockSystem validate_system(const RawSystem& raw, const Tolerances& tol = {});

/// (M + M^*) / 2.
ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// Smallest eigenvalue of the Hermitian part, i.e. the best c with Re M >= c.
double hermitian_min_eig(const ComplexMatrix& m);

/// Largest eigenvalue of the Hermitian part.
double hermitian_max_eig(const ComplexMatrix& m);

/// Singular values in decreasing order.
RealVector singular_values(const ComplexMatrix& m);

/// Spectral norm (largest singular value); 0 for empty matrices.
double operator_norm(const ComplexMatrix& m);

void require_finite(const ComplexMatrix& m, std::string_view name);
void require_square(const ComplexMatrix& m, std::string_view name);

}  // namespace stabcert
