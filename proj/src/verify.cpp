// SPDX-License-Identifier: Apache-2.0
#include "stabcert/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace stabcert {

namespace {

constexpr double kSingularRatio = 1e-14;
constexpr double kDissipativeSlack = 1e-12;
constexpr double kNormFloor = 1e-30;
constexpr double kOscillationSpread = 1e-9;
constexpr int kOscillationSignChanges = 4;
constexpr int kMinFitSamples = 10;

ComplexMatrix identity(Index n) { return ComplexMatrix::Identity(n, n); }

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
};

Line least_squares(const std::vector<double>& t, const std::vector<double>& y) {
  const double n = static_cast<double>(t.size());
  double tm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    tm += t[i];
    ym += y[i];
  }
  tm /= n;
  ym /= n;
  double sty = 0.0, stt = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    sty += (t[i] - tm) * (y[i] - ym);
    stt += (t[i] - tm) * (t[i] - tm);
  }
  Line l;
  l.slope = stt > 0.0 ? sty / stt : 0.0;
  l.intercept = ym - l.slope * tm;
  return l;
}

Eigen::FullPivLU<ComplexMatrix> invertible_lu(const ComplexMatrix& m, ErrorKind kind,
                                              const std::string& which) {
  require_square(m, which);
  Eigen::FullPivLU<ComplexMatrix> lu(m);
  if (!lu.isInvertible()) {
    throw Error(kind, which + " is not invertible", which);
  }
  return lu;
}

}  // namespace

ComplexMatrix assemble_generator(const ComplexMatrix& gamma, const ComplexMatrix& D) {
  require_square(gamma, "gamma");
  if (D.cols() != gamma.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "D must have n0 columns", "D");
  }
  const Index n0 = gamma.rows();
  const Index n1 = D.rows();
  ComplexMatrix B = ComplexMatrix::Zero(n0 + n1, n0 + n1);
  B.topLeftCorner(n0, n0) = -gamma;
  B.topRightCorner(n0, n1) = D.adjoint();
  B.bottomLeftCorner(n1, n0) = -D;
  return B;
}

ComplexMatrix assemble_generator(const NormalizedSystem& ns) {
  return assemble_generator(ns.gamma_tilde, ns.D);
}

ComplexMatrix assemble_original_generator(const BlockSystem& sys) {
  const Index n0 = sys.n0();
  const Index n1 = sys.n1();
  const ComplexMatrix rhs = assemble_generator(sys.gamma(), sys.C());
  ComplexMatrix B(n0 + n1, n0 + n1);
  B.topRows(n0) = sys.alpha().partialPivLu().solve(rhs.topRows(n0));
  B.bottomRows(n1) = sys.beta().partialPivLu().solve(rhs.bottomRows(n1));
  return B;
}

ComplexMatrix restricted_generator(const NormalizedSystem& ns, const HelmholtzFrames& frames) {
  const Index n0 = ns.n0();
  const Index r = frames.rank;
  if (frames.n0() != n0 || frames.n1() != ns.n1()) {
    throw Error(ErrorKind::DimensionMismatch, "frames do not match the system", "frames");
  }
  const ComplexMatrix coupling = frames.iota1.adjoint() * ns.D;  // r x n0
  ComplexMatrix B = ComplexMatrix::Zero(n0 + r, n0 + r);
  B.topLeftCorner(n0, n0) = -ns.gamma_tilde;
  B.topRightCorner(n0, r) = coupling.adjoint();
  B.bottomLeftCorner(r, n0) = -coupling;
  return B;
}

ComplexVector to_restricted(const HelmholtzFrames& frames, const ComplexVector& state) {
  const Index n0 = frames.n0();
  const Index n1 = frames.n1();
  if (state.size() != n0 + n1) {
    throw Error(ErrorKind::DimensionMismatch, "state length does not match frames", "state");
  }
  ComplexVector x(n0 + frames.rank);
  x.head(n0) = state.head(n0);
  x.tail(frames.rank) = frames.iota1.adjoint() * state.tail(n1);
  return x;
}

ComplexVector from_restricted(const HelmholtzFrames& frames, const ComplexVector& coords) {
  const Index n0 = frames.n0();
  const Index n1 = frames.n1();
  if (coords.size() != n0 + frames.rank) {
    throw Error(ErrorKind::DimensionMismatch, "coordinate length does not match frames",
                "coords");
  }
  ComplexVector state(n0 + n1);
  state.head(n0) = coords.head(n0);
  state.tail(n1) = frames.iota1 * coords.tail(frames.rank);
  return state;
}

DissipativityReport check_m_dissipative(const ComplexMatrix& B) {
  require_square(B, "B");
  DissipativityReport rep;
  rep.max_re_quadratic = hermitian_max_eig(B);
  rep.dissipative = rep.max_re_quadratic <= kDissipativeSlack;
  const RealVector s = singular_values(identity(B.rows()) - B);
  rep.shifted_invertible = s.size() == 0 || s(s.size() - 1) > kDissipativeSlack * s(0);
  return rep;
}

double resolvent_norm(const ComplexMatrix& B, Complex z) {
  require_square(B, "B");
  const RealVector s = singular_values(z * identity(B.rows()) - B);
  if (s.size() == 0) return 0.0;
  const double smin = s(s.size() - 1);
  if (smin <= kSingularRatio * s(0)) {
    throw Error(ErrorKind::Singular, "z is numerically in the spectrum", "z", std::abs(z));
  }
  return 1.0 / smin;
}

ResolventSweepReport gp_sweep(const ComplexMatrix& B, double abscissa, double lambda_max,
                              int points) {
  if (points < 2) {
    throw Error(ErrorKind::ParameterOutOfRange, "a sweep needs at least two points", "points",
                points);
  }
  if (!(lambda_max > 0.0)) {
    throw Error(ErrorKind::ParameterOutOfRange, "lambda_max must be positive", "lambda_max",
                lambda_max);
  }
  if (points % 2 == 0) ++points;

  ResolventSweepReport rep;
  rep.abscissa = abscissa;
  rep.lambdas.resize(points);
  rep.norms.resize(points);
  const int half = (points - 1) / 2;
  for (int k = 0; k < points; ++k) {
    rep.lambdas[k] = k == half ? 0.0 : lambda_max * static_cast<double>(k - half) / half;
  }
  for (int k = 0; k < points; ++k) {
    try {
      rep.norms[k] = resolvent_norm(B, Complex(abscissa, rep.lambdas[k]));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Singular) throw;
      rep.norms[k] = std::numeric_limits<double>::infinity();
      rep.singular_points.push_back(rep.lambdas[k]);
    }
  }
  rep.max_norm = *std::max_element(rep.norms.begin(), rep.norms.end());
  return rep;
}

double spectral_abscissa(const ComplexMatrix& B) {
  require_square(B, "B");
  if (B.rows() == 0) return -std::numeric_limits<double>::infinity();
  Eigen::ComplexEigenSolver<ComplexMatrix> es(B, false);
  return es.eigenvalues().real().maxCoeff();
}

std::string_view to_string(ExpmPath path) noexcept {
  switch (path) {
    case ExpmPath::PadeScalingSquaringStepped: return "pade13-scaling-squaring-stepped";
  }
  return "unknown";
}

TrajectoryTrace simulate(const ComplexMatrix& B, const ComplexVector& u0, double t_end,
                         int samples) {
  require_square(B, "B");
  if (u0.size() != B.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "initial state has wrong length", "u0");
  }
  if (!(t_end > 0.0)) {
    throw Error(ErrorKind::ParameterOutOfRange, "t_end must be positive", "t_end", t_end);
  }
  if (samples < 2) {
    throw Error(ErrorKind::ParameterOutOfRange, "need at least two samples", "samples", samples);
  }

  const double dt = t_end / (samples - 1);
  const ComplexMatrix step = (dt * B).exp();

  TrajectoryTrace tr;
  tr.expm_path = ExpmPath::PadeScalingSquaringStepped;
  tr.times.reserve(samples);
  tr.state_norms.reserve(samples);
  tr.states.reserve(samples);
  ComplexVector u = u0;
  for (int k = 0; k < samples; ++k) {
    if (k > 0) u = step * u;
    tr.times.push_back(k == samples - 1 ? t_end : k * dt);
    tr.state_norms.push_back(u.norm());
    tr.states.push_back(u);
  }

  try {
    tr.fitted_rate = fit_decay_rate(tr, 0.5);
    tr.fit_window = {t_end * 0.5, t_end};
  } catch (const Error&) {
    tr.fitted_rate.reset();
  }
  return tr;
}

double fit_decay_rate(const TrajectoryTrace& trace, double window_fraction) {
  if (!(window_fraction > 0.0) || window_fraction > 1.0) {
    throw Error(ErrorKind::ParameterOutOfRange, "window fraction must lie in (0, 1]",
                "window_fraction", window_fraction);
  }
  if (trace.times.size() != trace.state_norms.size() || trace.times.empty()) {
    throw Error(ErrorKind::TooFewSamples, "trace is empty or inconsistent");
  }
  const double t0 = trace.times.front();
  const double t1 = trace.times.back();
  const double start = t1 - window_fraction * (t1 - t0);
  const double slack = 1e-12 * std::max(1.0, std::abs(t1));

  std::vector<double> t, y;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    if (trace.times[i] + slack < start) continue;
    const double nrm = trace.state_norms[i];
    if (!(nrm > kNormFloor)) {
      throw Error(ErrorKind::Underflow, "state norm vanished inside the fit window", "t",
                  trace.times[i]);
    }
    t.push_back(trace.times[i]);
    y.push_back(-std::log(nrm));
  }
  if (static_cast<int>(t.size()) < kMinFitSamples) {
    throw Error(ErrorKind::TooFewSamples, "fewer than 10 samples in the fit window", "samples",
                static_cast<double>(t.size()));
  }

  const Line trend = least_squares(t, y);
  std::vector<double> res(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) res[i] = y[i] - (trend.slope * t[i] + trend.intercept);
  const auto [lo, hi] = std::minmax_element(res.begin(), res.end());
  if (*hi - *lo <= kOscillationSpread) return trend.slope;

  int sign_changes = 0;
  int last_sign = 0;
  for (std::size_t i = 1; i < res.size(); ++i) {
    const double d = res[i] - res[i - 1];
    const int s = (d > 0.0) - (d < 0.0);
    if (s == 0) continue;
    if (last_sign != 0 && s != last_sign) ++sign_changes;
    last_sign = s;
  }
  if (sign_changes <= kOscillationSignChanges) return trend.slope;

  // Norm maxima relative to the trend are minima of the detrended -log||U||.
  std::vector<double> peak_t, peak_y;
  for (std::size_t i = 1; i + 1 < res.size(); ++i) {
    if (!(res[i] < res[i - 1] && res[i] <= res[i + 1])) continue;
    const double h = 0.5 * (t[i + 1] - t[i - 1]);
    const double curv = res[i - 1] - 2.0 * res[i] + res[i + 1];
    double offset = 0.0, value = res[i];
    if (curv > 0.0) {
      offset = h * (res[i - 1] - res[i + 1]) / (2.0 * curv);
      value = res[i] - (res[i - 1] - res[i + 1]) * (res[i - 1] - res[i + 1]) / (8.0 * curv);
    }
    const double tp = t[i] + offset;
    peak_t.push_back(tp);
    peak_y.push_back(trend.slope * tp + trend.intercept + value);
  }
  if (peak_t.size() < 2) return trend.slope;
  return least_squares(peak_t, peak_y).slope;
}

AdmissibleInitial admissible_initial(const ComplexMatrix& beta, const HelmholtzFrames& frames,
                                     const ComplexVector& v0) {
  if (beta.rows() != frames.n1() || v0.size() != frames.n1()) {
    throw Error(ErrorKind::DimensionMismatch, "beta, frames and v0 must share H1", "v0");
  }
  const auto lu = invertible_lu(beta, ErrorKind::NotInvertible, "beta");
  AdmissibleInitial out;
  const ComplexVector projected = frames.iota1 * (frames.iota1.adjoint() * (beta * v0));
  out.v_adm = lu.solve(projected);
  out.residual = (out.v_adm - v0).norm();
  return out;
}

ComplexMatrix block_inverse(const ComplexMatrix& A, const ComplexMatrix& B,
                            const ComplexMatrix& C) {
  require_square(A, "A");
  const Index n = A.rows();
  if (B.rows() != n || C.cols() != n || B.cols() != C.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "blocks of [[A, B], [C, 0]] do not fit");
  }
  const auto lu_b = invertible_lu(B, ErrorKind::SingularBlock, "B");
  const auto lu_c = invertible_lu(C, ErrorKind::SingularBlock, "C");
  const ComplexMatrix b_inv = lu_b.inverse();
  const ComplexMatrix c_inv = lu_c.inverse();

  ComplexMatrix out = ComplexMatrix::Zero(2 * n, 2 * n);
  out.topRightCorner(n, n) = c_inv;
  out.bottomLeftCorner(n, n) = b_inv;
  out.bottomRightCorner(n, n) = -b_inv * A * c_inv;
  return out;
}

ComplexMatrix shifted_damping_matrix(const ComplexMatrix& gamma, const ComplexMatrix& D_inv,
                                     double delta) {
  require_square(gamma, "gamma");
  const Index n0 = gamma.rows();
  const Index n1 = D_inv.cols();
  if (D_inv.rows() != n0) {
    throw Error(ErrorKind::DimensionMismatch, "D^{-1} must map H1 into H0", "D_inv");
  }
  const ComplexMatrix damped = gamma - delta * identity(n0);
  ComplexMatrix m = ComplexMatrix::Zero(n0 + n1, n0 + n1);
  m.topLeftCorner(n0, n0) = damped;
  m.topRightCorner(n0, n1) = delta * damped * D_inv;
  m.bottomRightCorner(n1, n1) = delta * identity(n1);
  return m;
}

double change_of_variables_residual(const NormalizedSystem& ns, Complex z, double delta,
                                    const ComplexVector& U, const ComplexVector& F) {
  if (z == Complex(0.0, 0.0)) {
    throw Error(ErrorKind::ZeroFrequency, "the shifted variables need z != 0", "z");
  }
  if (std::abs(z + delta) <= 1e-14 * std::max(1.0, std::abs(z))) {
    throw Error(ErrorKind::DegenerateShift, "delta = -z makes the change of variables singular",
                "delta", delta);
  }
  const Index n0 = ns.n0();
  const Index n1 = ns.n1();
  if (U.size() != n0 + n1 || F.size() != n0 + n1) {
    throw Error(ErrorKind::DimensionMismatch, "U and F must live in H0 x H1");
  }
  if (n0 != n1) {
    throw Error(ErrorKind::NotInvertible, "D is not square", "D");
  }
  const auto lu = invertible_lu(ns.D, ErrorKind::NotInvertible, "D");
  const ComplexMatrix D_inv = lu.inverse();

  const ComplexMatrix z_minus_b = z * identity(n0 + n1) - assemble_generator(ns);
  const double mismatch = (z_minus_b * U - F).norm();
  const double scale = operator_norm(z_minus_b) * U.norm() + F.norm();
  if (mismatch > 1e3 * ns.tolerances.solve_tol * scale) {
    throw Error(ErrorKind::PreconditionViolation, "(z - B) U = F does not hold", "U", mismatch);
  }

  const Complex factor = 1.0 + delta / z;
  ComplexVector u_delta = U;
  u_delta.head(n0) *= factor;

  const ComplexMatrix damped = ns.gamma_tilde - delta * identity(n0);
  ComplexVector f_delta(n0 + n1);
  f_delta.head(n0) = F.head(n0) + (delta / z) * (damped * (D_inv * F.tail(n1)));
  f_delta.tail(n1) = factor * F.tail(n1);

  ComplexMatrix op = z * identity(n0 + n1) + shifted_damping_matrix(ns.gamma_tilde, D_inv, delta);
  op.topRightCorner(n0, n1) -= ns.D.adjoint();
  op.bottomLeftCorner(n1, n0) += ns.D;
  return (op * u_delta - f_delta).norm();
}

}  // namespace stabcert
