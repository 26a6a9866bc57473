#pragma once

// Minimal CSV output with full double precision, and a reader for the
// numeric bearing-stream files consumed by the CLI.

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "botl/errors.hpp"

namespace botl::csv {

/// 17 significant digits, '.' decimal separator, "nan"/"inf"/"-inf" for
/// non-finite values. Round-trips every double exactly.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void comment(std::string_view key, std::string_view value) {
    out_ << "# meta: " << key << '=' << value << '\n';
  }

  void header(const std::vector<std::string>& columns) { row_strings(columns); }

  void row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  template <typename... Cells>
  void row(const Cells&... cells) {
    std::vector<std::string> s{cell(cells)...};
    row_strings(s);
  }

  static std::string cell(double v) { return format_double(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }
  template <typename Int>
    requires std::is_integral_v<Int>
  static std::string cell(Int v) {
    return std::to_string(v);
  }

 private:
  std::ostream& out_;
};

/// Parsed numeric table: named columns, one vector of values per row.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    throw InvalidInput("missing CSV column '" + std::string(name) + "'");
  }
};

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

/// Reads a header line and numeric rows. Blank lines and lines starting
/// with '#' are skipped.
inline Table read_numeric(std::istream& in) {
  Table t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (t.columns.empty()) {
      t.columns = std::move(cells);
      continue;
    }
    if (cells.size() != t.columns.size()) {
      throw InvalidInput("CSV line " + std::to_string(line_no) + ": expected " +
                         std::to_string(t.columns.size()) + " fields, got " +
                         std::to_string(cells.size()));
    }
    std::vector<double> values;
    for (const auto& c : cells) {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(c, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != c.size() || c.empty()) {
        throw InvalidInput("CSV line " + std::to_string(line_no) + ": '" + c +
                           "' is not a number");
      }
      values.push_back(v);
    }
    t.rows.push_back(std::move(values));
  }
  if (t.columns.empty()) throw InvalidInput("CSV input has no header");
  return t;
}

}  // namespace botl::csv
