#include "sweep.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "ctfim/errors.hpp"

namespace lab {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double to_real(const std::string& text, const std::string& field) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != end || !std::isfinite(v))
    throw ctfim::InvalidParameter(field + ": '" + text + "' is not a finite number");
  return v;
}

}  // namespace

std::vector<double> parse_reals(const std::string& text, const std::string& field) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(to_real(parts[0], field));
      continue;
    }
    if (parts.size() != 3) throw ctfim::InvalidParameter(field + ": range '" + item + "' must be start:stop:step");
    const double start = to_real(parts[0], field), stop = to_real(parts[1], field), step = to_real(parts[2], field);
    if (!(step > 0.0)) throw ctfim::InvalidParameter(field + ": range step must be positive in '" + item + "'");
    // Integer multiples of the step avoid accumulating roundoff; the stop is excluded.
    const double span = (stop - start) / step;
    const long count = static_cast<long>(std::ceil(span - 1e-9));
    if (count > 10'000'000) throw ctfim::InvalidParameter(field + ": range '" + item + "' is too long");
    for (long n = 0; n < count; ++n) out.push_back(start + n * step);
  }
  if (out.empty()) throw ctfim::InvalidParameter(field + ": no values given");
  return out;
}

std::vector<std::optional<int>> parse_sizes(const std::string& text, const std::string& field, bool allow_infinite) {
  std::vector<std::optional<int>> out;
  std::string finite;
  for (const auto& item : split(text, ',')) {
    if (item == "inf") {
      if (!allow_infinite) throw ctfim::InvalidParameter(field + ": 'inf' is not accepted here");
      out.emplace_back(std::nullopt);
      continue;
    }
    for (double v : parse_reals(item, field)) {
      if (v != std::floor(v) || v < 1 || v > 1e9) throw ctfim::InvalidParameter(field + ": " + item + " is not a size");
      out.emplace_back(static_cast<int>(v));
    }
  }
  return out;
}

std::string failure_category(const std::exception& e) {
  if (dynamic_cast<const ctfim::InvalidParameter*>(&e)) return "config";
  if (dynamic_cast<const ctfim::UnsupportedConfiguration*>(&e)) return "unsupported";
  return "numerical";
}

}  // namespace lab
