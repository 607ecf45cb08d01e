#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qgeom/types.hpp"

namespace qgeom::cli {

// On-disk representation: a JSON object with a matrix (or vector / list of
// matrices) of [re, im] entries, an optional factor-dimension list, and a
// kind tag that selects the validation applied on load.
struct MatrixFile {
  std::string kind;  // hermitian | density | vector | kraus
  std::optional<std::vector<Eigen::Index>> dims;
  std::vector<Matrix> matrices;  // singleton unless kind == "kraus"
  Vector vector_data;            // used when kind == "vector"
};

// Thrown for malformed files (parse / shape problems): exit code 2.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a well-formed file fails semantic validation: exit code 1.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reads path ("-" = stdin) and returns raw bytes.
std::string read_input(const std::string& path);

// With validate = false the per-kind semantic checks (density validation,
// hermiticity) are skipped so callers can report residuals themselves.
MatrixFile parse_matrix_file(const std::string& text, bool validate = true);

nlohmann::ordered_json matrix_to_json(const Matrix& m);
nlohmann::ordered_json vector_to_json(const Vector& v);
nlohmann::ordered_json matrix_file_json(const MatrixFile& file);

// FNV-1a 64-bit digest of the input bytes, reported for reproducibility.
std::string input_digest(const std::string& bytes);

}  // namespace qgeom::cli
