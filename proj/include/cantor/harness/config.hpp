#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cantor/random.hpp"

namespace cantor::harness {

enum class OutputFormat { Text, Json };

inline constexpr std::size_t kMaxOracleDepth = 6;
inline constexpr std::size_t kMaxOracleSetSize = 7;
inline constexpr std::uint64_t kDefaultSeed = 20240917;

struct Config {
  std::vector<std::string> suites;  // empty selects the default suites
  std::size_t trials = 10000;
  std::size_t max_pre = 16;
  std::size_t max_per = 8;
  std::size_t oracle_depth = 4;
  std::size_t oracle_max_size = 5;
  std::uint64_t seed = kDefaultSeed;
  std::string scheme = "canonical";
  OutputFormat format = OutputFormat::Text;

  GenBounds bounds() const { return {max_pre, max_per}; }

  /// Throws std::invalid_argument on a guard violation. Suite names and the
  /// scheme are checked by run_suite.
  void validate() const {
    if (oracle_depth > kMaxOracleDepth)
      throw std::invalid_argument("oracle depth " + std::to_string(oracle_depth) + " exceeds " +
                                  std::to_string(kMaxOracleDepth));
    if (oracle_max_size > kMaxOracleSetSize)
      throw std::invalid_argument("oracle set size " + std::to_string(oracle_max_size) + " exceeds " +
                                  std::to_string(kMaxOracleSetSize));
    if (max_per < 1) throw std::invalid_argument("max period must be at least 1");
  }
};

}  // namespace cantor::harness
