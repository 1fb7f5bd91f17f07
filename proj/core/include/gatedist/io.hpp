#pragma once

#include "gatedist/control.hpp"
#include "gatedist/fidelity.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace gatedist {

using Json = nlohmann::ordered_json;

/// Malformed input file. Messages carry path plus line:column where known.
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// On-disk matrix: row-major [re, im] pairs plus optional bipartite metadata.
struct MatrixFile {
  Matrix matrix;
  std::optional<std::string> label;
  std::optional<int> n_s;
  std::optional<int> n_b;
  std::optional<Ordering> ordering;
};

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& context);

MatrixFile read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const Matrix& m,
                       const std::optional<std::string>& label = std::nullopt,
                       std::optional<int> n_s = std::nullopt,
                       std::optional<int> n_b = std::nullopt,
                       std::optional<Ordering> ordering = std::nullopt);

/// Problem file: Hamiltonians inline as matrix objects, segment count, dt,
/// bounds, and the target gate.
ControlProblem read_problem_file(const std::string& path);
void write_problem_file(const std::string& path, const ControlProblem& p);

RealVector real_vector_from_json(const Json& j, const std::string& context);
Json real_vector_to_json(const RealVector& v);

/// Parses text (path is only for error messages) into JSON with
/// line:column-precise errors.
Json parse_json_text(const std::string& text, const std::string& path);
Json read_json_file(const std::string& path);

/// FNV-1a 64-bit hash of a file's bytes, as a hex string.
std::string file_hash_hex(const std::string& path);

/// Shortest round-trip decimal form of a double (17 significant digits max).
std::string format_double(double x);

}  // namespace gatedist
