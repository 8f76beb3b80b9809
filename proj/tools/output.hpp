#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace lab {

using Cell = std::variant<double, long, std::string>;
using Row = std::vector<Cell>;

// 17 significant digits round-trips any double.
std::string format_double(double v);

// RFC 4180 field quoting: only when the field holds a comma, quote or line break.
std::string quote_field(const std::string& s);

struct Table {
  std::vector<std::string> columns;
  std::vector<Row> rows;
};

std::string to_csv(const Table& table);

// Where results go: --out-dir, else $CTFIM_LAB_OUTPUT_DIR, else the working directory.
std::filesystem::path resolve_output_dir(const std::string& flag);

// Writes <dir>/<stem>.csv and <dir>/<stem>.json; returns the CSV path.
std::filesystem::path write_outputs(const std::filesystem::path& dir, const std::string& stem, const Table& table,
                                    nlohmann::ordered_json metadata);

}  // namespace lab
