// SPDX-License-Identifier: Apache-2.0
#include "stabcert/maxwell.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "stabcert/helmholtz.hpp"
#include "stabcert/normalize.hpp"

namespace stabcert::maxwell {

namespace {

constexpr double kMonotoneSlack = 1e-10;

void check_spec(const GridSpec& spec, Index dense_limit) {
  if (spec.N < 2 || !(spec.h > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "grid needs N >= 2 and h > 0", "grid");
  }
  const Index rows = 3 * spec.cells();
  if (rows > dense_limit) {
    throw Error(ErrorKind::GridTooLarge,
                "3N^3 = " + std::to_string(rows) + " exceeds the dense limit " +
                    std::to_string(dense_limit),
                "N", spec.N);
  }
}

ComplexVector random_vector(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> normal;
  ComplexVector v(n);
  for (Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

}  // namespace

ComplexMatrix axis_difference(const GridSpec& spec, int axis) {
  const int N = spec.N;
  const Index n = spec.cells();
  const Index stride = axis == 0 ? 1 : axis == 1 ? N : static_cast<Index>(N) * N;
  const double w = 1.0 / (2.0 * spec.h);
  ComplexMatrix d = ComplexMatrix::Zero(n, n);
  for (Index cell = 0; cell < n; ++cell) {
    const Index pos = (cell / stride) % N;
    const Index base = cell - pos * stride;
    const Index next = base + ((pos + 1) % N) * stride;
    const Index prev = base + ((pos + N - 1) % N) * stride;
    // For N = 2 both neighbours coincide and the stencil vanishes.
    d(cell, next) += w;
    d(cell, prev) -= w;
  }
  return d;
}

DiscreteCurl build_curl(const GridSpec& spec, Index dense_limit) {
  check_spec(spec, dense_limit);
  const Index n = spec.cells();
  const ComplexMatrix dx = axis_difference(spec, 0);
  const ComplexMatrix dy = axis_difference(spec, 1);
  const ComplexMatrix dz = axis_difference(spec, 2);

  DiscreteCurl curl;
  curl.K = ComplexMatrix::Zero(3 * n, 3 * n);
  curl.K.block(0, n, n, n) = -dz;
  curl.K.block(0, 2 * n, n, n) = dy;
  curl.K.block(n, 0, n, n) = dz;
  curl.K.block(n, 2 * n, n, n) = -dx;
  curl.K.block(2 * n, 0, n, n) = -dy;
  curl.K.block(2 * n, n, n, n) = dx;

  curl.grad.resize(3 * n, n);
  curl.grad.topRows(n) = dx;
  curl.grad.middleRows(n, n) = dy;
  curl.grad.bottomRows(n) = dz;

  const HelmholtzFrames frames = decompose(curl.K);
  curl.rank = frames.rank;
  curl.sigma_min_pos = frames.sigma_min_pos;
  return curl;
}

ComplexMatrix MaterialProfile::diagonal(Index cells) const {
  const Index rows = 3 * cells;
  ComplexVector diag(rows);
  const auto count = static_cast<Index>(values.size());
  if (count == 1) {
    diag.setConstant(values.front());
  } else if (count == cells) {
    for (int comp = 0; comp < 3; ++comp) {
      for (Index c = 0; c < cells; ++c) diag(comp * cells + c) = values[c];
    }
  } else if (count == rows) {
    for (Index i = 0; i < rows; ++i) diag(i) = values[i];
  } else {
    throw Error(ErrorKind::DimensionMismatch,
                "material profile needs 1, N^3 or 3N^3 values, got " + std::to_string(count),
                "material");
  }
  return diag.asDiagonal();
}

BlockSystem build_maxwell_system(const GridSpec& spec, const Materials& materials,
                                 const Tolerances& tol, Index dense_limit) {
  const DiscreteCurl curl = build_curl(spec, dense_limit);
  const Index cells = spec.cells();
  RawSystem raw;
  raw.alpha = materials.eps.diagonal(cells);
  raw.beta = materials.mu.diagonal(cells);
  raw.gamma = materials.sigma.diagonal(cells);
  raw.C = curl.K;
  return validate_system(raw, tol);
}

bool MaxwellReport::sweeps_regular() const {
  return sweep_axis.singular_points.empty() && sweep_half.singular_points.empty();
}

bool MaxwellReport::sweeps_bounded() const {
  const double bound = certificate.M_total * (1.0 + 1e-6);
  return sweeps_regular() && sweep_axis.max_norm <= bound && sweep_half.max_norm <= bound;
}

bool MaxwellReport::abscissa_sound() const {
  return spectral_abscissa <= -certificate.delta_cert + 1e-9;
}

bool MaxwellReport::rate_sound() const {
  return trajectory.fitted_rate.has_value() &&
         *trajectory.fitted_rate >= certificate.delta_cert - 1e-6;
}

bool MaxwellReport::all_passed() const {
  return certificate.delta_cert > 0.0 && sweeps_bounded() && abscissa_sound() && rate_sound() &&
         energy_monotone;
}

MaxwellReport maxwell_report(const GridSpec& spec, const Materials& materials,
                             const RunOptions& options) {
  MaxwellReport rep;
  rep.seed = options.seed;
  rep.curl = build_curl(spec, options.dense_limit);
  rep.curl_grad_max = (rep.curl.K * rep.curl.grad).cwiseAbs().maxCoeff();

  const BlockSystem sys = build_maxwell_system(spec, materials, {}, options.dense_limit);
  rep.certificate = full_certificate(sys, options.certificate);

  const NormalizedSystem ns = normalize_system(sys);
  const HelmholtzFrames frames_d = decompose(ns.D, ns.tolerances);
  const ComplexMatrix restricted = restricted_generator(ns, frames_d);
  rep.sweep_axis = gp_sweep(restricted, 0.0, options.lambda_max, options.sweep_points);
  rep.sweep_half = gp_sweep(restricted, -0.5 * rep.certificate.delta_cert, options.lambda_max,
                            options.sweep_points);
  rep.spectral_abscissa = spectral_abscissa(restricted);

  std::mt19937_64 rng(options.seed);
  const Index n0 = sys.n0();
  const Index n1 = sys.n1();
  const ComplexVector u0 = random_vector(rng, n0);
  const ComplexVector v0 = random_vector(rng, n1);
  const HelmholtzFrames frames_c = decompose(sys.C(), sys.tolerances());
  const AdmissibleInitial adm = admissible_initial(sys.beta(), frames_c, v0);
  rep.admissible_residual = adm.residual;

  const ComplexMatrix generator = assemble_original_generator(sys);
  ComplexVector start(n0 + n1);
  start << u0, adm.v_adm;
  rep.trajectory = simulate(generator, start, options.t_end, options.samples);

  double previous = map_state(ns, rep.trajectory.states.front(), MapDirection::Forward).norm();
  const double slack = kMonotoneSlack * previous;
  rep.energy_monotone = true;
  for (const ComplexVector& state : rep.trajectory.states) {
    const double e = map_state(ns, state, MapDirection::Forward).norm();
    if (e > previous + slack) rep.energy_monotone = false;
    previous = e;
  }

  ComplexVector raw_start(n0 + n1);
  raw_start << u0, v0;
  const TrajectoryTrace raw = simulate(generator, raw_start, options.t_end, 2);
  rep.unprojected_final_ratio = raw.state_norms.back() / raw.state_norms.front();
  return rep;
}

}  // namespace stabcert::maxwell
