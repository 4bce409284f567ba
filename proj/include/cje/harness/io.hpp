#pragma once

// Tabular output (CSV with a config-hash comment line, or JSON) and JSON
// encodings of coefficient sequences and matrices.

#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "cje/errors.hpp"
#include "cje/matrix_models.hpp"
#include "cje/types.hpp"

namespace cje::harness {

/// Shortest decimal string that round-trips the double.
inline std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, r.ptr);
}

/// Column-major description, row-major storage. Every cell is a double;
/// integer-valued columns print without a fractional part.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row) {
    if (row.size() != columns.size()) throw ParameterError("Table: row width mismatch");
    rows.push_back(std::move(row));
  }
};

inline void write_csv(std::ostream& os, const Table& t, const std::string& hash) {
  os << "# config_hash=" << hash << "\n";
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_double(row[c]);
    os << "\n";
  }
}

inline nlohmann::json table_json(const Table& t, const std::string& hash) {
  nlohmann::json j;
  j["config_hash"] = hash;
  j["columns"] = t.columns;
  j["rows"] = t.rows;
  return j;
}

inline void write_table(std::ostream& os, const Table& t, const std::string& hash,
                        const std::string& format) {
  if (format == "json") {
    os << table_json(t, hash).dump(1) << "\n";
  } else {
    write_csv(os, t, hash);
  }
}

inline nlohmann::json complex_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

/// [[re, im], ...]
inline nlohmann::json coefficients_json(std::span<const cplx> values) {
  nlohmann::json j = nlohmann::json::array();
  for (const cplx z : values) j.push_back(complex_json(z));
  return j;
}

/// Rows of [re, im] pairs, row-major.
inline nlohmann::json matrix_json(const ComplexMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Write `text` to `path`, throwing std::runtime_error on failure.
inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace cje::harness
