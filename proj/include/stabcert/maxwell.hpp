// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "stabcert/certificate.hpp"
#include "stabcert/model.hpp"
#include "stabcert/verify.hpp"

namespace stabcert::maxwell {

inline constexpr Index kDefaultDenseLimit = 1536;

enum class Boundary { Periodic };

/// N cells per axis with spacing h on the periodic unit torus.  Cell (i, j, k)
/// has linear index i + N j + N^2 k.
struct GridSpec {
  int N = 2;
  double h = 1.0;
  Boundary bc = Boundary::Periodic;

  Index cells() const noexcept { return static_cast<Index>(N) * N * N; }
};

/// Central-difference curl on a periodic grid.  Field vectors are stacked by
/// component: (x-component over all cells, y-component, z-component).
struct DiscreteCurl {
  ComplexMatrix K;     // 3 N^3 x 3 N^3, Hermitian
  ComplexMatrix grad;  // 3 N^3 x N^3
  Index rank = 0;
  double sigma_min_pos = 0.0;  // 0 when K = 0 (N = 2)
};

/// Periodic central difference along one axis (skew-symmetric).
ComplexMatrix axis_difference(const GridSpec& spec, int axis);

DiscreteCurl build_curl(const GridSpec& spec, Index dense_limit = kDefaultDenseLimit);

/// One value (uniform), N^3 values (per cell, shared by the three components)
/// or 3 N^3 values (per entry).
struct MaterialProfile {
  std::vector<Complex> values;

  static MaterialProfile uniform(Complex v) { return {{v}}; }
  ComplexMatrix diagonal(Index cells) const;
};

struct Materials {
  MaterialProfile eps = MaterialProfile::uniform(1.0);
  MaterialProfile mu = MaterialProfile::uniform(1.0);
  MaterialProfile sigma = MaterialProfile::uniform(1.0);
};

/// alpha = eps, beta = mu, gamma = sigma, C = K, validated.
BlockSystem build_maxwell_system(const GridSpec& spec, const Materials& materials,
                                 const Tolerances& tol = {},
                                 Index dense_limit = kDefaultDenseLimit);

struct RunOptions {
  double t_end = 20.0;
  int samples = 401;
  double lambda_max = 50.0;
  int sweep_points = 401;
  std::uint64_t seed = 20240601;
  CertificateOptions certificate;
  Index dense_limit = kDefaultDenseLimit;
};

struct MaxwellReport {
  DiscreteCurl curl;
  double curl_grad_max = 0.0;  // max |K grad| entry
  StabilityCertificate certificate;
  ResolventSweepReport sweep_axis;  // Re z = 0
  ResolventSweepReport sweep_half;  // Re z = -delta_cert / 2
  double spectral_abscissa = 0.0;   // restricted normalized generator
  TrajectoryTrace trajectory;       // admissible data, original variables
  double admissible_residual = 0.0;
  double unprojected_final_ratio = 0.0;  // ||U(T)|| / ||U(0)|| without projection
  bool energy_monotone = false;
  std::uint64_t seed = 0;

  bool sweeps_regular() const;
  bool sweeps_bounded() const;
  bool abscissa_sound() const;
  bool rate_sound() const;
  bool all_passed() const;
};

MaxwellReport maxwell_report(const GridSpec& spec, const Materials& materials,
                             const RunOptions& options = {});

}  // namespace stabcert::maxwell
