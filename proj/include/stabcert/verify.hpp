// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "stabcert/helmholtz.hpp"
#include "stabcert/model.hpp"
#include "stabcert/normalize.hpp"

namespace stabcert {

// ---------------------------------------------------------------------------
// Generators.  Sign convention throughout: the evolution is
//   diag(alpha, beta) U' = -[[gamma, -C^*], [C, 0]] U,
// so in normalized variables U' = B U with B = [[-gamma~, D^*], [-D, 0]].
// ---------------------------------------------------------------------------

ComplexMatrix assemble_generator(const NormalizedSystem& ns);
ComplexMatrix assemble_generator(const ComplexMatrix& gamma, const ComplexMatrix& D);

/// diag(alpha, beta)^{-1} [[-gamma, C^*], [-C, 0]]: the generator in the
/// original variables.
ComplexMatrix assemble_original_generator(const BlockSystem& sys);

/// The normalized generator restricted to H0 x ran(D), in coordinates
/// (u, iota1^* v).  Size n0 + r.
ComplexMatrix restricted_generator(const NormalizedSystem& ns, const HelmholtzFrames& frames);

/// (u, v) -> (u, iota1^* v) and back.
ComplexVector to_restricted(const HelmholtzFrames& frames, const ComplexVector& state);
ComplexVector from_restricted(const HelmholtzFrames& frames, const ComplexVector& coords);

struct DissipativityReport {
  bool dissipative = false;
  double max_re_quadratic = 0.0;  // largest eigenvalue of (B + B^*)/2
  bool shifted_invertible = false;
};

DissipativityReport check_m_dissipative(const ComplexMatrix& B);

/// 1 / sigma_min(z - B).  Throws Singular when sigma_min <= 1e-14 sigma_max.
double resolvent_norm(const ComplexMatrix& B, Complex z);

struct ResolventSweepReport {
  double abscissa = 0.0;
  std::vector<double> lambdas;
  std::vector<double> norms;  // +inf at singular points
  double max_norm = 0.0;      // +inf when any point is singular
  std::vector<double> singular_points;
};

/// Resolvent norms on a + i*lambda for lambda on a symmetric grid over
/// [-lambda_max, lambda_max].  Even point counts are bumped to the next odd
/// count so that lambda = 0 is always sampled.
ResolventSweepReport gp_sweep(const ComplexMatrix& B, double abscissa, double lambda_max,
                              int points);

double spectral_abscissa(const ComplexMatrix& B);

enum class ExpmPath { PadeScalingSquaringStepped };
std::string_view to_string(ExpmPath path) noexcept;

struct TrajectoryTrace {
  std::vector<double> times;
  std::vector<double> state_norms;
  std::vector<ComplexVector> states;
  std::optional<double> fitted_rate;
  std::pair<double, double> fit_window{0.0, 0.0};
  ExpmPath expm_path = ExpmPath::PadeScalingSquaringStepped;
};

/// U(t_k) = exp(t_k B) U0 on samples equally spaced times in [0, t_end].
/// The fitted rate is filled when fit_decay_rate succeeds on the last half.
TrajectoryTrace simulate(const ComplexMatrix& B, const ComplexVector& u0, double t_end,
                         int samples);

/// Least-squares slope of -log||U(t)|| over the last window_fraction of the
/// time range.  When the detrended log-norm oscillates (more than four sign
/// changes of its discrete derivative) the fit uses only the local norm
/// maxima, located to sub-sample accuracy by parabolic interpolation.
double fit_decay_rate(const TrajectoryTrace& trace, double window_fraction = 0.5);

struct AdmissibleInitial {
  ComplexVector v_adm;
  double residual = 0.0;
};

/// Projects v0 onto beta^{-1} ran(C): v_adm = beta^{-1} iota1 iota1^* beta v0.
/// `frames` must come from decompose(C) in the original variables.
AdmissibleInitial admissible_initial(const ComplexMatrix& beta, const HelmholtzFrames& frames,
                                     const ComplexVector& v0);

/// [[A, B], [C, 0]]^{-1} = [[0, C^{-1}], [B^{-1}, -B^{-1} A C^{-1}]].
ComplexMatrix block_inverse(const ComplexMatrix& A, const ComplexMatrix& B,
                            const ComplexMatrix& C);

/// [[gamma - delta, (gamma - delta) delta D^{-1}], [0, delta]].
ComplexMatrix shifted_damping_matrix(const ComplexMatrix& gamma, const ComplexMatrix& D_inv,
                                     double delta);

/// Residual of the shifted-variable identity.  Given (z - B) U = F with
/// invertible D, forms U_delta = ((1 + delta/z) u, v) and
/// F_delta = (f + (gamma - delta)(delta/z) D^{-1} g, (1 + delta/z) g) and returns
/// ||(z + shifted_damping_matrix + [[0, -D^*], [D, 0]]) U_delta - F_delta||.
double change_of_variables_residual(const NormalizedSystem& ns, Complex z, double delta,
                                    const ComplexVector& U, const ComplexVector& F);

}  // namespace stabcert
