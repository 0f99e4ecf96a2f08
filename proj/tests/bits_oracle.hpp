#pragma once

// Independent reference arithmetic for tests: points as raw preperiod/cycle
// strings, expanded bit by bit. Nothing here uses the library's normal form.

#include <cstddef>
#include <numeric>
#include <string>

#include "cantor/point.hpp"

namespace oracle {

inline std::string expand(const std::string& pre, const std::string& cyc, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) out += i < pre.size() ? pre[i] : cyc[(i - pre.size()) % cyc.size()];
  return out;
}

inline std::string expand(const cantor::Point& p, std::size_t n) {
  return expand(p.preperiod().str(), p.cycle().str(), n);
}

// Enough bits to decide equality of two eventually periodic sequences.
inline std::size_t horizon(const cantor::Point& a, const cantor::Point& b) {
  return std::max(a.preperiod().size(), b.preperiod().size()) + 2 * std::lcm(a.cycle().size(), b.cycle().size());
}

inline int compare(const cantor::Point& a, const cantor::Point& b) {
  std::size_t n = horizon(a, b);
  return expand(a, n).compare(expand(b, n)) < 0 ? -1 : expand(a, n) == expand(b, n) ? 0 : 1;
}

inline long first_diff(const cantor::Point& a, const cantor::Point& b) {
  std::size_t n = horizon(a, b);
  std::string x = expand(a, n), y = expand(b, n);
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] != y[i]) return static_cast<long>(i);
  return -1;
}

inline std::string xor_bits(const std::string& a, const std::string& b) {
  std::string out(a.size(), '0');
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] == b[i] ? '0' : '1';
  return out;
}

}  // namespace oracle
