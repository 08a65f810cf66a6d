#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace mdrlab::cli {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

enum class Format { Csv, Json };

/// One header line, then one line per row; floats at 17 significant digits.
std::string to_csv(const Table& table);
/// {"column": [values...], ...} in column order.
std::string to_json(const Table& table);
std::string render(const Table& table, Format format);

/// Thrown for any failure to produce an output file.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Writes through a sibling temporary file and renames it into place, so a
/// failed run never leaves a partial file. "-" writes to stdout.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace mdrlab::cli
