// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stabcert/certificate.hpp"
#include "stabcert/cli/problem_io.hpp"
#include "stabcert/maxwell.hpp"

namespace stabcert::cli {

enum ExitCode : int { kExitPass = 0, kExitInputError = 1, kExitVerdictFailed = 2 };

inline constexpr std::uint64_t kDefaultSeed = 20240601;

/// Every report carries "verdicts" (name -> bool) and "all_passed".
struct CommandResult {
  nlohmann::json report;
  bool all_passed = false;
};

struct CertifyOptions {
  double lambda_max = 50.0;
  int points = 401;
  int samples = 401;
  std::uint64_t seed = kDefaultSeed;
  CertificateOptions certificate;
};

struct SweepOptions {
  double abscissa = 0.0;
  double lambda_max = 50.0;
  int points = 401;
};

struct SimulateOptions {
  double t_end = 20.0;
  int samples = 401;
  std::optional<ComplexVector> u0;  // full state (u, v); seeded random when absent
  std::uint64_t seed = kDefaultSeed;
};

struct MaxwellGenOptions {
  maxwell::GridSpec grid;
  double eps = 1.0;
  double mu = 1.0;
  double sigma = 1.0;
  Index dense_limit = maxwell::kDefaultDenseLimit;
};

CommandResult certify(const ProblemFile& problem, const CertifyOptions& options = {});
CommandResult sweep(const ProblemFile& problem, const SweepOptions& options = {});
CommandResult simulate(const ProblemFile& problem, const SimulateOptions& options = {});
CommandResult reduce(const ProblemFile& problem, Complex z);
ProblemFile maxwell_gen(const MaxwellGenOptions& options);

nlohmann::json certificate_to_json(const StabilityCertificate& cert);

/// Dense-size guard, overridden by STABCERT_DENSE_LIMIT when set.
Index dense_limit_from_env();

/// Single-line machine-readable error record.
std::string error_line(const Error& e);

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace stabcert::cli
