// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string_view>

#include <json.hpp>

#include "stabcert/model.hpp"

namespace stabcert::cli {

inline constexpr int kSchemaVersion = 1;

/// Problem file layout (JSON):
///   { "schema_version": 1,
///     "alpha": [[[re, im], ...], ...], "beta": ..., "gamma": ..., "C": ...,
///     "tolerances": { "hermitian_tol": ..., ... }   // optional
///   }
/// Matrices are row-major nested arrays of [re, im] pairs.
struct ProblemFile {
  int schema_version = kSchemaVersion;
  RawSystem system;
  Tolerances tolerances;
};

nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j, std::string_view name);

nlohmann::json vector_to_json(const ComplexVector& v);
ComplexVector vector_from_json(const nlohmann::json& j, std::string_view name);

nlohmann::json problem_to_json(const ProblemFile& problem);
ProblemFile problem_from_json(const nlohmann::json& j);

nlohmann::json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace stabcert::cli
