// SPDX-License-Identifier: Apache-2.0
#include "stabcert/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stabcert/verify.hpp"

namespace stabcert {

namespace {

AuditRecord run_audit(const ComplexMatrix& restricted, double delta_cert, double half_height,
                      double bound, int points) {
  AuditRecord rec;
  rec.grid_points = points;
  rec.re_min = -delta_cert;
  rec.re_max = half_height;
  rec.im_half_height = half_height;
  rec.bound = bound;
  rec.passed = true;
  for (int i = 0; i < points; ++i) {
    const double re = rec.re_min + (rec.re_max - rec.re_min) * i / (points - 1);
    for (int j = 0; j < points; ++j) {
      const double im = -half_height + 2.0 * half_height * j / (points - 1);
      double nrm = 0.0;
      try {
        nrm = resolvent_norm(restricted, Complex(re, im));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Singular) throw;
        rec.passed = false;
        rec.max_norm = std::numeric_limits<double>::infinity();
        return rec;
      }
      rec.max_norm = std::max(rec.max_norm, nrm);
      if (nrm > bound) rec.passed = false;
    }
  }
  return rec;
}

}  // namespace

DampingBound damping_lower_bound(double c, double gamma_norm, double c_inv_norm, double delta,
                                 double p) {
  if (!(c > 0.0) || !(delta > 0.0) || !(p > 0.0 && p < 2.0) || gamma_norm < 0.0 ||
      c_inv_norm < 0.0) {
    throw Error(ErrorKind::ParameterOutOfRange,
                "need c > 0, delta > 0, 0 < p < 2 and non-negative norms");
  }
  const double coupling = (gamma_norm + delta) * c_inv_norm;
  DampingBound b;
  b.u_term = c - delta * (1.0 + coupling * coupling / (2.0 * p));
  b.v_term = delta * (1.0 - p / 2.0);
  return b;
}

ShiftChoice optimize_shift(double c, double gamma_norm, double c_inv_norm, int grid_steps) {
  if (!(c > 0.0) || !(c_inv_norm > 0.0)) {
    throw Error(ErrorKind::DegenerateProblem, "optimize_shift needs c > 0 and ||C^{-1}|| > 0");
  }
  if (grid_steps < 2) {
    throw Error(ErrorKind::ParameterOutOfRange, "grid needs at least two steps", "grid_steps",
                grid_steps);
  }
  // The bottom of the delta grid is low enough that u_term > 0 at p ~ 1.
  const double reach = (gamma_norm + c) * c_inv_norm;
  const double delta_lo = c * std::min(1e-6, 1.0 / (2.0 + reach * reach));
  const double delta_hi = c * (1.0 - 1e-3);
  const double log_ratio = std::log(delta_hi / delta_lo);

  ShiftChoice best;
  bool found = false;
  for (int i = 0; i < grid_steps; ++i) {
    const double delta = delta_lo * std::exp(log_ratio * i / (grid_steps - 1));
    for (int j = 0; j < grid_steps; ++j) {
      const double p = 2.0 * (j + 1) / (grid_steps + 1);
      const DampingBound b = damping_lower_bound(c, gamma_norm, c_inv_norm, delta, p);
      const double d = 0.5 * std::min(b.u_term, b.v_term);
      if (!found || d > best.d) {
        best = {delta, p, b.u_term, d};
        found = true;
      }
    }
  }
  if (!(best.d > 0.0)) {
    throw Error(ErrorKind::DegenerateProblem, "no admissible shift on the grid", "d", best.d);
  }
  return best;
}

InvertibleCaseCertificate invertible_certificate(double c, double gamma_norm, double c_inv_norm,
                                                 int grid_steps) {
  const ShiftChoice s = optimize_shift(c, gamma_norm, c_inv_norm, grid_steps);
  InvertibleCaseCertificate cert;
  cert.c = c;
  cert.gamma_norm = gamma_norm;
  cert.C_inv_norm = c_inv_norm;
  cert.delta_star = s.delta_star;
  cert.p_star = s.p_star;
  cert.c_tilde = s.c_tilde;
  cert.d = s.d;
  cert.M_inner = (2.0 / s.d) * ((1.0 + gamma_norm + s.delta_star) * c_inv_norm + 2.0);
  return cert;
}

double kernel_block_bound(double c, double re_z_floor) {
  if (!(re_z_floor > -c)) {
    throw Error(ErrorKind::HalfPlaneViolation, "floor must exceed -c", "re_z_floor", re_z_floor);
  }
  return 1.0 / (re_z_floor + c);
}

StabilityCertificate full_certificate(const BlockSystem& sys, const CertificateOptions& options) {
  if (options.audit_points < 2 || options.max_halvings < 0) {
    throw Error(ErrorKind::ParameterOutOfRange, "invalid audit options");
  }
  const NormalizedSystem ns = normalize_system(sys);
  const HelmholtzFrames frames = decompose(ns.D, ns.tolerances);

  StabilityCertificate cert;
  const double c = ns.c_gamma_tilde;
  const double gn = operator_norm(ns.gamma_tilde);
  cert.c_gamma = c;
  cert.gamma_norm = gn;
  cert.kappa_norm = normalization_condition(ns);
  cert.rank = frames.rank;
  cert.sigma_min_pos = frames.sigma_min_pos;
  cert.has_kernel = frames.kernel_dim() > 0;
  cert.working_abscissa = c / 4.0;

  // On Re z >= -a0 = -c/4: Re gamma1_z >= 3c/4, ||gamma1_z|| <= |g| + |g|^2 / (3c/4),
  // ||(z + gamma2)^{-1}|| <= 4/(3c) and ||T|| <= 1 + |g| / (3c/4).
  const double floor_gap = 0.75 * c;
  double half_height = 2.0 * cert.working_abscissa;
  if (frames.rank == 0) {
    cert.trivial_range = true;
    cert.c_eff = c;
    cert.g_eff = gn;
    cert.kernel_bound = kernel_block_bound(c, -cert.working_abscissa);
    cert.delta_cert = cert.working_abscissa;
    cert.M_normalized = cert.kernel_bound;
  } else {
    if (cert.has_kernel) {
      cert.c_eff = floor_gap;
      cert.g_eff = gn + gn * gn / floor_gap;
      cert.transform_bound = 1.0 + gn / floor_gap;
      cert.kernel_bound = kernel_block_bound(c, -cert.working_abscissa);
    } else {
      cert.c_eff = c;
      cert.g_eff = gn;
    }
    cert.inner =
        invertible_certificate(cert.c_eff, cert.g_eff, frames.C_tilde_inv_norm, options.grid_steps);
    cert.delta_cert = std::min(cert.working_abscissa, cert.inner->d);
    cert.M_normalized = cert.transform_bound * cert.transform_bound *
                        std::max(cert.inner->M_inner, cert.kernel_bound);
    half_height = 2.0 * cert.inner->delta_star;
  }
  cert.M_total = cert.M_normalized * cert.kappa_norm * cert.kappa_norm;

  const ComplexMatrix restricted = restricted_generator(ns, frames);
  for (int h = 0;; ++h) {
    cert.audit = run_audit(restricted, cert.delta_cert, half_height, cert.M_normalized,
                           options.audit_points);
    cert.audit.halvings = h;
    if (cert.audit.passed) break;
    if (h == options.max_halvings) {
      throw Error(ErrorKind::CertificateFailure,
                  "small-|z| resolvent audit failed after " + std::to_string(h) + " halvings",
                  "delta_cert", cert.delta_cert);
    }
    cert.delta_cert *= 0.5;
  }
  return cert;
}

}  // namespace stabcert
