#include "output.hpp"

#include <Eigen/Core>
#include <boost/version.hpp>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "ctfim/errors.hpp"
#include "ctfim/version.hpp"

namespace lab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string quote_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string to_csv(const Table& table) {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += quote_field(fields[i]);
    }
    out += '\n';
  };
  emit(table.columns);
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw std::logic_error("row width does not match the header");
    std::vector<std::string> fields;
    for (const auto& cell : row) {
      fields.push_back(std::visit(
          [](const auto& v) -> std::string {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, double>) return format_double(v);
            else if constexpr (std::is_same_v<V, long>) return std::to_string(v);
            else return v;
          },
          cell));
    }
    emit(fields);
  }
  return out;
}

std::filesystem::path resolve_output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("CTFIM_LAB_OUTPUT_DIR"); env && *env) return env;
  return std::filesystem::current_path();
}

std::filesystem::path write_outputs(const std::filesystem::path& dir, const std::string& stem, const Table& table,
                                    nlohmann::ordered_json metadata) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ctfim::InvalidParameter("cannot create output directory " + dir.string() + ": " + ec.message());
  metadata["columns"] = table.columns;
  metadata["rows"] = table.rows.size();
  metadata["versions"] = {
      {"ctfim", ctfim::kVersion},
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION)},
      {"boost", BOOST_LIB_VERSION},
  };
  const auto csv_path = dir / (stem + ".csv");
  const auto json_path = dir / (stem + ".json");
  std::ofstream csv(csv_path, std::ios::binary);
  csv << to_csv(table);
  std::ofstream json(json_path, std::ios::binary);
  json << metadata.dump(2) << '\n';
  if (!csv || !json) throw ctfim::InvalidParameter("failed to write outputs under " + dir.string());
  return csv_path;
}

}  // namespace lab
