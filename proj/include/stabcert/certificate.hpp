// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "stabcert/helmholtz.hpp"
#include "stabcert/model.hpp"
#include "stabcert/normalize.hpp"

namespace stabcert {

/// Lower bounds for the Hermitian part of the shifted damping block
/// [[gamma - delta, (gamma - delta) delta C^{-1}], [0, delta]], split into the
/// u- and v-coefficients after Young's inequality with epsilon = p * delta:
///   u_term = c - delta (1 + ((|gamma| + delta) |C^{-1}|)^2 / (2p))
///   v_term = delta (1 - p/2)
struct DampingBound {
  double u_term = 0.0;
  double v_term = 0.0;
};

DampingBound damping_lower_bound(double c, double gamma_norm, double c_inv_norm, double delta,
                                 double p);

struct ShiftChoice {
  double delta_star = 0.0;
  double p_star = 0.0;
  double c_tilde = 0.0;  // u_term at the optimum
  double d = 0.0;        // min(u_term, v_term) / 2 at the optimum
};

/// Maximizes d = min(u_term, v_term) / 2 over a grid_steps x grid_steps grid,
/// geometric in delta on (0, c) and uniform in p on (0, 2).  Ties keep the
/// smaller delta (and then the smaller p).
ShiftChoice optimize_shift(double c, double gamma_norm, double c_inv_norm, int grid_steps = 2000);

/// Resolvent constant for the fully invertible case.  On {Re z >= -d, |z| >= 2 delta_star}
///   ||(z - B)^{-1}|| <= M_inner = (2/d) ((1 + |gamma| + delta_star) |C^{-1}| + 2).
struct InvertibleCaseCertificate {
  double c = 0.0;
  double gamma_norm = 0.0;
  double C_inv_norm = 0.0;
  double delta_star = 0.0;
  double p_star = 0.0;
  double c_tilde = 0.0;
  double d = 0.0;
  double M_inner = 0.0;
};

InvertibleCaseCertificate invertible_certificate(double c, double gamma_norm, double c_inv_norm,
                                                 int grid_steps = 2000);

/// 1 / (re_z_floor + c): bound on ||(z + kappa0^* gamma kappa0)^{-1}|| for Re z >= floor.
double kernel_block_bound(double c, double re_z_floor);

/// Numeric resolvent check on the rectangle where the analytic bound does not
/// apply: Re z in [-delta_cert, 2 delta_star], |Im z| <= 2 delta_star.
struct AuditRecord {
  int grid_points = 0;  // per axis
  int halvings = 0;
  double re_min = 0.0;
  double re_max = 0.0;
  double im_half_height = 0.0;
  double max_norm = 0.0;
  double bound = 0.0;  // M_normalized
  bool passed = false;
};

struct StabilityCertificate {
  double delta_cert = 0.0;
  double M_total = 0.0;       // resolvent bound for the generator in original variables
  double M_normalized = 0.0;  // the same bound before un-normalization
  double working_abscissa = 0.0;  // a0 = c / 4

  double c_gamma = 0.0;     // coercivity of the normalized damping
  double gamma_norm = 0.0;  // ||gamma~||
  double c_eff = 0.0;       // coercivity of the Schur block on Re z >= -a0
  double g_eff = 0.0;       // bound on ||gamma1_z|| on Re z >= -a0
  double transform_bound = 1.0;  // bound on ||T1||, ||T2|| and inverses
  double kernel_bound = 0.0;     // bound on ||(z + gamma2)^{-1}||; 0 without kernel
  double kappa_norm = 1.0;       // normalization condition number
  double sigma_min_pos = 0.0;
  Index rank = 0;
  bool has_kernel = false;
  bool trivial_range = false;  // C = 0: certificate covers the H0 block alone

  std::optional<InvertibleCaseCertificate> inner;
  AuditRecord audit;
};

struct CertificateOptions {
  int grid_steps = 2000;
  int audit_points = 41;
  int max_halvings = 20;
};

/// Normalization, Helmholtz frames, Schur decoupling and the shifted-variable
/// resolvent bound chained into one certified decay abscissa.
StabilityCertificate full_certificate(const BlockSystem& sys, const CertificateOptions& options = {});

}  // namespace stabcert
