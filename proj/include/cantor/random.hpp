#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

#include "cantor/point.hpp"

namespace cantor {

/// Engine used for every generated input. std::mt19937_64 output is fixed by
/// the standard; the helpers below avoid the implementation-defined
/// distributions so that seeds replay identically on every toolchain.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

/// Independent stream for one trial of one suite.
inline Rng trial_rng(std::uint64_t seed, std::string_view stream, std::uint64_t trial) {
  return Rng(splitmix64(splitmix64(seed ^ fnv1a(stream)) + trial));
}

/// Uniform integer in [0, bound] by rejection.
inline std::uint64_t uniform_upto(Rng& rng, std::uint64_t bound) {
  if (bound == ~std::uint64_t{0}) return rng();
  const std::uint64_t range = bound + 1;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % range);
  std::uint64_t v;
  do v = rng();
  while (v >= limit);
  return v % range;
}

inline Word random_word(Rng& rng, std::size_t length) {
  Word w;
  for (std::size_t i = 0; i < length; ++i) w.push_back(static_cast<Bit>(rng() >> 63));
  return w;
}

struct GenBounds {
  std::size_t max_pre = 16;
  std::size_t max_per = 8;
};

/// Random preperiod of length <= max_pre and cycle of length in [1, max_per],
/// normalized. Normalization only shortens, so the bounds still hold.
inline Point gen_point(Rng& rng, std::size_t max_pre, std::size_t max_per) {
  if (max_per < 1) throw std::invalid_argument("gen_point: max_per must be at least 1");
  std::size_t pre = uniform_upto(rng, max_pre);
  std::size_t per = 1 + uniform_upto(rng, max_per - 1);
  Word a = random_word(rng, pre);
  Word b = random_word(rng, per);
  return Point::normalize(std::move(a), std::move(b));
}

inline Point gen_point(Rng& rng, const GenBounds& b) { return gen_point(rng, b.max_pre, b.max_per); }

/// A random member of Q (finite support).
inline Point gen_point_Q(Rng& rng, const GenBounds& b) {
  return Point::constant_tail(random_word(rng, uniform_upto(rng, b.max_pre)), 0);
}

/// A random member of P (infinite support): the cycle is forced to contain a 1.
inline Point gen_point_P(Rng& rng, const GenBounds& b) {
  Word pre = random_word(rng, uniform_upto(rng, b.max_pre));
  Word cyc = random_word(rng, 1 + uniform_upto(rng, b.max_per - 1));
  if (cyc.all(0)) cyc = cyc.flipped(uniform_upto(rng, cyc.size() - 1));
  return Point::normalize(std::move(pre), std::move(cyc));
}

/// Random point inside B(c).
inline Point gen_point_in(Rng& rng, const Cylinder& c, const GenBounds& b) {
  return prepend(c.word(), gen_point(rng, b));
}

}  // namespace cantor
