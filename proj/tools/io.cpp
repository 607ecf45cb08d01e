#include "io.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace qgeom::cli {

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

namespace {

Complex parse_entry(const nlohmann::json& cell) {
  if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
      !cell[1].is_number()) {
    throw ParseError("matrix entries must be [re, im] number pairs");
  }
  return Complex(cell[0].get<double>(), cell[1].get<double>());
}

Matrix parse_matrix(const nlohmann::json& rows) {
  if (!rows.is_array() || rows.empty()) {
    throw ParseError("matrix must be a non-empty array of rows");
  }
  const std::size_t ncols = rows[0].is_array() ? rows[0].size() : 0;
  if (ncols == 0) {
    throw ParseError("matrix rows must be non-empty arrays");
  }
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(ncols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != ncols) {
      throw ParseError("matrix rows must all have the same length");
    }
    for (std::size_t j = 0; j < ncols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          parse_entry(rows[i][j]);
    }
  }
  return m;
}

Vector parse_vector(const nlohmann::json& cells) {
  if (!cells.is_array() || cells.empty()) {
    throw ParseError("vector must be a non-empty array of [re, im] pairs");
  }
  Vector v(static_cast<Eigen::Index>(cells.size()));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = parse_entry(cells[i]);
  }
  return v;
}

}  // namespace

MatrixFile parse_matrix_file(const std::string& text, bool validate) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw ParseError(std::string("invalid JSON: ") + err.what());
  }
  if (!doc.is_object()) {
    throw ParseError("input must be a JSON object");
  }
  MatrixFile file;
  if (!doc.contains("kind") || !doc["kind"].is_string()) {
    throw ParseError("missing string field 'kind'");
  }
  file.kind = doc["kind"].get<std::string>();
  if (file.kind != "hermitian" && file.kind != "density" &&
      file.kind != "vector" && file.kind != "kraus") {
    throw ParseError("kind must be hermitian, density, vector, or kraus");
  }
  if (doc.contains("dims")) {
    if (!doc["dims"].is_array() || doc["dims"].empty()) {
      throw ParseError("dims must be a non-empty array of integers");
    }
    std::vector<Eigen::Index> dims;
    for (const auto& d : doc["dims"]) {
      if (!d.is_number_integer() || d.get<long long>() < 1) {
        throw ParseError("dims entries must be positive integers");
      }
      dims.push_back(static_cast<Eigen::Index>(d.get<long long>()));
    }
    file.dims = std::move(dims);
  }
  if (!doc.contains("matrix")) {
    throw ParseError("missing field 'matrix'");
  }
  const auto& body = doc["matrix"];
  if (file.kind == "vector") {
    file.vector_data = parse_vector(body);
  } else if (file.kind == "kraus") {
    if (!body.is_array() || body.empty()) {
      throw ParseError("kraus matrix field must be a list of matrices");
    }
    for (const auto& item : body) {
      file.matrices.push_back(parse_matrix(item));
    }
  } else {
    file.matrices.push_back(parse_matrix(body));
  }
  // Semantic validation per kind.
  if (!validate) {
    return file;
  }
  try {
    if (file.kind == "hermitian") {
      HermitianOperator check(file.matrices[0]);
      (void)check;
    } else if (file.kind == "density") {
      DensityState check(file.matrices[0]);
      (void)check;
    }
  } catch (const std::invalid_argument& err) {
    throw DomainError(err.what());
  }
  return file;
}

nlohmann::ordered_json matrix_to_json(const Matrix& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::ordered_json vector_to_json(const Vector& v) {
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    cells.push_back({v(i).real(), v(i).imag()});
  }
  return cells;
}

nlohmann::ordered_json matrix_file_json(const MatrixFile& file) {
  nlohmann::ordered_json doc;
  doc["kind"] = file.kind;
  if (file.dims) {
    nlohmann::ordered_json dims = nlohmann::ordered_json::array();
    for (const auto d : *file.dims) {
      dims.push_back(static_cast<long long>(d));
    }
    doc["dims"] = std::move(dims);
  }
  if (file.kind == "vector") {
    doc["matrix"] = vector_to_json(file.vector_data);
  } else if (file.kind == "kraus") {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& m : file.matrices) {
      list.push_back(matrix_to_json(m));
    }
    doc["matrix"] = std::move(list);
  } else {
    doc["matrix"] = matrix_to_json(file.matrices[0]);
  }
  return doc;
}

std::string input_digest(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    hash ^= static_cast<std::uint64_t>(c);
    hash *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return std::string(buf);
}

}  // namespace qgeom::cli
