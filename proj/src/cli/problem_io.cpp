// SPDX-License-Identifier: Apache-2.0
#include "stabcert/cli/problem_io.hpp"

#include <fstream>
#include <string>

namespace stabcert::cli {

namespace {

Complex complex_from_json(const nlohmann::json& j, std::string_view name) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorKind::InvalidInput,
                std::string(name) + ": complex entries must be [re, im] pairs", std::string(name));
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j, std::string_view name) {
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorKind::InvalidInput, std::string(name) + " must be a non-empty array of rows",
                std::string(name));
  }
  const auto rows = static_cast<Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) {
    throw Error(ErrorKind::InvalidInput, std::string(name) + " rows must be non-empty arrays",
                std::string(name));
  }
  const auto cols = static_cast<Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw Error(ErrorKind::InvalidInput, std::string(name) + " is ragged", std::string(name));
    }
    for (Index k = 0; k < cols; ++k) {
      m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)], name);
    }
  }
  require_finite(m, name);
  return m;
}

nlohmann::json vector_to_json(const ComplexVector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

ComplexVector vector_from_json(const nlohmann::json& j, std::string_view name) {
  if (!j.is_array()) {
    throw Error(ErrorKind::InvalidInput, std::string(name) + " must be an array",
                std::string(name));
  }
  ComplexVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = complex_from_json(j[i], name);
  return v;
}

nlohmann::json problem_to_json(const ProblemFile& problem) {
  const Tolerances& t = problem.tolerances;
  return {
      {"schema_version", problem.schema_version},
      {"alpha", matrix_to_json(problem.system.alpha)},
      {"beta", matrix_to_json(problem.system.beta)},
      {"gamma", matrix_to_json(problem.system.gamma)},
      {"C", matrix_to_json(problem.system.C)},
      {"tolerances",
       {{"hermitian_tol", t.hermitian_tol},
        {"rank_rel_tol", t.rank_rel_tol},
        {"solve_tol", t.solve_tol},
        {"eig_tol", t.eig_tol}}},
  };
}

ProblemFile problem_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidInput, "problem file must be a JSON object");
  ProblemFile p;
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer()) {
    throw Error(ErrorKind::InvalidInput, "missing integer schema_version", "schema_version");
  }
  p.schema_version = j["schema_version"].get<int>();
  if (p.schema_version != kSchemaVersion) {
    throw Error(ErrorKind::InvalidInput,
                "unsupported schema_version " + std::to_string(p.schema_version),
                "schema_version", p.schema_version);
  }
  for (const char* key : {"alpha", "beta", "gamma", "C"}) {
    if (!j.contains(key)) {
      throw Error(ErrorKind::InvalidInput, std::string("missing matrix ") + key, key);
    }
  }
  p.system.alpha = matrix_from_json(j["alpha"], "alpha");
  p.system.beta = matrix_from_json(j["beta"], "beta");
  p.system.gamma = matrix_from_json(j["gamma"], "gamma");
  p.system.C = matrix_from_json(j["C"], "C");
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    if (!t.is_object()) throw Error(ErrorKind::InvalidInput, "tolerances must be an object");
    p.tolerances.hermitian_tol = t.value("hermitian_tol", p.tolerances.hermitian_tol);
    p.tolerances.rank_rel_tol = t.value("rank_rel_tol", p.tolerances.rank_rel_tol);
    p.tolerances.solve_tol = t.value("solve_tol", p.tolerances.solve_tol);
    p.tolerances.eig_tol = t.value("eig_tol", p.tolerances.eig_tol);
  }
  return p;
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path.string(), "path");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, path.string() + ": " + e.what(), "path");
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path.string(), "path");
  out << j.dump(2) << '\n';
}

}  // namespace stabcert::cli
