#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cuefid {

// Seeded random source whose outputs are identical on every platform.
// std::mt19937_64 is fully specified by the standard; the distributions in
// <random> are not, so the derived draws are implemented here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n);

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  // Standard normal draw (Box-Muller).
  double normal();

  bool bernoulli(double p) { return uniform01() < p; }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[uniform_index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Splits on every occurrence of `sep`; keeps empty fields.
std::vector<std::string_view> split(std::string_view text, char sep);

// Splits on `sep` into at most `max_fields` fields; the last one keeps the
// remainder verbatim.
std::vector<std::string_view> split_n(std::string_view text, char sep,
                                      std::size_t max_fields);

std::string_view trim(std::string_view text);

// Iterates lines, stripping a trailing '\r'. Line numbers are 1-based.
std::vector<std::pair<std::size_t, std::string_view>> lines_of(
    std::string_view content);

std::optional<std::int64_t> parse_int(std::string_view text);
std::optional<double> parse_double(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

// Lower-case hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

}  // namespace cuefid
