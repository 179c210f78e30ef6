// SPDX-License-Identifier: Apache-2.0
#include "stabcert/model.hpp"

#include <string>

namespace stabcert {

namespace {

std::string shape(const ComplexMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_hermitian(const ComplexMatrix& m, std::string_view name, double tol) {
  const double asym = operator_norm(m - m.adjoint());
  if (asym > tol * operator_norm(m)) {
    throw Error(ErrorKind::NotHermitian,
                std::string(name) + " is not Hermitian (||M - M^*|| = " +
                    std::to_string(asym) + ")",
                std::string(name), asym);
  }
}

double require_coercive(const ComplexMatrix& m, std::string_view name, double tol) {
  const double c = hermitian_min_eig(m);
  if (c <= tol * operator_norm(m)) {
    throw Error(ErrorKind::NotCoercive,
                std::string(name) + " is not coercive (smallest Hermitian-part eigenvalue " +
                    std::to_string(c) + ")",
                std::string(name), c);
  }
  return c;
}

}  // namespace

void Tolerances::validate() const {
  for (double t : {hermitian_tol, rank_rel_tol, solve_tol, eig_tol}) {
    if (!(t > 0.0) || t > 1e-3) {
      throw Error(ErrorKind::InvalidTolerance, "tolerances must lie in (0, 1e-3]", "tolerances", t);
    }
  }
}

void require_finite(const ComplexMatrix& m, std::string_view name) {
  if (!m.allFinite()) {
    throw Error(ErrorKind::NonFinite, std::string(name) + " has non-finite entries",
                std::string(name));
  }
}

void require_square(const ComplexMatrix& m, std::string_view name) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(name) + " must be square, got " + shape(m), std::string(name));
  }
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

double hermitian_min_eig(const ComplexMatrix& m) {
  require_square(m, "matrix");
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double hermitian_max_eig(const ComplexMatrix& m) {
  require_square(m, "matrix");
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

RealVector singular_values(const ComplexMatrix& m) {
  if (m.size() == 0) return RealVector();
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

double operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

BlockSystem validate_system(const RawSystem& raw, const Tolerances& tol) {
  tol.validate();
  require_finite(raw.alpha, "alpha");
  require_finite(raw.beta, "beta");
  require_finite(raw.gamma, "gamma");
  require_finite(raw.C, "C");
  require_square(raw.alpha, "alpha");
  require_square(raw.beta, "beta");
  require_square(raw.gamma, "gamma");

  const Index n0 = raw.alpha.rows();
  const Index n1 = raw.beta.rows();
  if (n0 == 0 || n1 == 0) {
    throw Error(ErrorKind::DimensionMismatch, "H0 and H1 must be non-trivial");
  }
  if (raw.gamma.rows() != n0) {
    throw Error(ErrorKind::DimensionMismatch,
                "gamma is " + shape(raw.gamma) + " but alpha is " + shape(raw.alpha), "gamma");
  }
  if (raw.C.rows() != n1 || raw.C.cols() != n0) {
    throw Error(ErrorKind::DimensionMismatch,
                "C must be " + std::to_string(n1) + "x" + std::to_string(n0) + ", got " +
                    shape(raw.C),
                "C");
  }

  require_hermitian(raw.alpha, "alpha", tol.hermitian_tol);
  require_hermitian(raw.beta, "beta", tol.hermitian_tol);

  BlockSystem sys;
  sys.c_alpha_ = require_coercive(raw.alpha, "alpha", tol.eig_tol);
  sys.c_beta_ = require_coercive(raw.beta, "beta", tol.eig_tol);
  sys.c_gamma_ = require_coercive(raw.gamma, "gamma", tol.eig_tol);
  sys.raw_ = raw;
  sys.tol_ = tol;
  return sys;
}

}  // namespace stabcert
