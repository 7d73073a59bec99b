#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace gwi::cli {

/// Empty cells print as "" in CSV and null in JSON.
using Cell = std::variant<std::monostate, std::int64_t, std::uint64_t, double, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws DomainError when the row width differs from the header.
  void add(std::vector<Cell> row);
};

enum class Format { csv, json };

Format parse_format(const std::string& name);

/// Shortest round-trip text (%.17g); inf and nan as "inf", "-inf", "nan".
std::string format_double(double x);

/// CSV: header row then one line per row, fields quoted only when needed.
/// JSON: an array of row objects keyed by column; non-finite doubles become strings.
void write_table(const Table& table, Format format, std::ostream& out);
std::string render_table(const Table& table, Format format);

}  // namespace gwi::cli
