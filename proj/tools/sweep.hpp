#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace lab {

// Comma-separated items, each a number or start:stop:step (stop excluded).
std::vector<double> parse_reals(const std::string& text, const std::string& field);

// Integer version; "inf" is accepted when allow_infinite is set and maps to std::nullopt.
std::vector<std::optional<int>> parse_sizes(const std::string& text, const std::string& field,
                                            bool allow_infinite = false);

struct PointFailure {
  std::size_t index;
  std::string category;  // "config", "numerical" or "unsupported"
  std::string message;
};

std::string failure_category(const std::exception& e);

// Runs job(i) for i in [0, count) on `jobs` threads. Results come back in index
// order; points that throw are reported instead of returned.
template <class R>
std::vector<std::optional<R>> run_sweep(std::size_t count, unsigned jobs, const std::function<R(std::size_t)>& job,
                                        std::vector<PointFailure>& failures) {
  std::vector<std::optional<R>> results(count);
  std::vector<std::optional<PointFailure>> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        results[i] = job(i);
      } catch (const std::exception& e) {
        errors[i] = PointFailure{i, failure_category(e), e.what()};
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) failures.push_back(*e);
  return results;
}

}  // namespace lab
