#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cantor/errors.hpp"
#include "cantor/word.hpp"

namespace cantor {

/*
 * Points of the Cantor set C = D^omega.
 *
 * Only eventually periodic sequences preperiod . cycle . cycle . ... are
 * represented. Every operation in this library (prefix replacement, tail
 * extraction, bitwise xor, selecting a member of a finite set) maps such
 * sequences to such sequences, so all arithmetic is exact.
 *
 * Normal form: the cycle is primitive (not a power of a shorter word) and the
 * preperiod is as short as possible, i.e. its last bit differs from the last
 * bit of the cycle. The two conditions determine the representation uniquely,
 * so value equality is field equality.
 *
 * Two eventually periodic sequences with preperiods a, b and periods m, n that
 * agree on the first max(a, b) + lcm(m, n) bits agree everywhere.
 */
class Point {
 public:
  /// The all-zero sequence (0).
  Point() : cycle_("0") {}

  static Point normalize(Word preperiod, Word cycle) {
    if (cycle.empty()) throw std::invalid_argument("Point: the cycle must be nonempty");
    cycle = primitive_root(cycle);
    while (!preperiod.empty() && preperiod.back() == cycle.back()) {
      Bit b = cycle.back();
      preperiod.pop_back();
      Word rotated;
      rotated.push_back(b);
      rotated += cycle.substr(0, cycle.size() - 1);
      cycle = std::move(rotated);
    }
    return Point(std::move(preperiod), std::move(cycle));
  }

  static Point normalize(std::string_view preperiod, std::string_view cycle) {
    return normalize(Word(preperiod), Word(cycle));
  }

  /// The eventually constant sequence w b b b ...
  static Point constant_tail(const Word& w, Bit b = 0) { return normalize(w, Word::repeat(b, 1)); }

  const Word& preperiod() const noexcept { return preperiod_; }
  const Word& cycle() const noexcept { return cycle_; }

  Bit bit_at(std::size_t n) const noexcept {
    if (n < preperiod_.size()) return preperiod_[n];
    return cycle_[(n - preperiod_.size()) % cycle_.size()];
  }

  /// x|k, the first k bits.
  Word prefix(std::size_t k) const {
    Word w;
    for (std::size_t i = 0; i < k; ++i) w.push_back(bit_at(i));
    return w;
  }

  /// Number of leading bits that decide equality with `other`.
  std::size_t decision_bound(const Point& other) const noexcept {
    return std::max(preperiod_.size(), other.preperiod_.size()) +
           std::lcm(cycle_.size(), other.cycle_.size());
  }

  friend bool operator==(const Point&, const Point&) = default;

  /// Lexicographic order of C.
  friend std::strong_ordering operator<=>(const Point& a, const Point& b) noexcept {
    if (a == b) return std::strong_ordering::equal;
    std::size_t bound = a.decision_bound(b);
    for (std::size_t i = 0; i < bound; ++i) {
      Bit x = a.bit_at(i), y = b.bit_at(i);
      if (x != y) return x <=> y;
    }
    // Unreachable for normal forms: differing normal forms differ within the bound.
    return std::strong_ordering::equal;
  }

 private:
  Point(Word preperiod, Word cycle) : preperiod_(std::move(preperiod)), cycle_(std::move(cycle)) {}

  static Word primitive_root(const Word& w) {
    const std::size_t n = w.size();
    for (std::size_t d = 1; d < n; ++d) {
      if (n % d != 0) continue;
      bool periodic = true;
      for (std::size_t i = d; i < n && periodic; ++i) periodic = w[i] == w[i - d];
      if (periodic) return w.substr(0, d);
    }
    return w;
  }

  Word preperiod_;
  Word cycle_;
};

// ---------------------------------------------------------------------------
// Free operations on points.

inline Bit bit_at(const Point& p, std::size_t n) noexcept { return p.bit_at(n); }

inline std::strong_ordering lex_cmp(const Point& p, const Point& q) noexcept { return p <=> q; }

/// Least index where p and q differ, or nullopt when p == q.
inline std::optional<std::size_t> first_diff(const Point& p, const Point& q) noexcept {
  if (p == q) return std::nullopt;
  std::size_t bound = p.decision_bound(q);
  for (std::size_t i = 0; i < bound; ++i)
    if (p.bit_at(i) != q.bit_at(i)) return i;
  return std::nullopt;
}

enum class SupportKind { Finite, Infinite };

/// Finite support (a member of Q) iff the tail is identically zero.
inline SupportKind support_kind(const Point& p) noexcept {
  return p.cycle().all(0) ? SupportKind::Finite : SupportKind::Infinite;
}

inline bool in_Q(const Point& p) noexcept { return support_kind(p) == SupportKind::Finite; }
inline bool in_P(const Point& p) noexcept { return support_kind(p) == SupportKind::Infinite; }

/// c followed by the bits of p.
inline Point prepend(const Word& c, const Point& p) { return Point::normalize(c + p.preperiod(), p.cycle()); }

/// The sequence with the first k bits removed.
inline Point drop(const Point& p, std::size_t k) {
  const Word& pre = p.preperiod();
  const Word& cyc = p.cycle();
  if (k <= pre.size()) return Point::normalize(pre.substr(k), cyc);
  std::size_t shift = (k - pre.size()) % cyc.size();
  return Point::normalize(Word(), cyc.substr(shift) + cyc.substr(0, shift));
}

/// Bitwise sum in the Boolean group (C, xor).
inline Point xor_points(const Point& a, const Point& b) {
  std::size_t head = std::max(a.preperiod().size(), b.preperiod().size());
  std::size_t period = std::lcm(a.cycle().size(), b.cycle().size());
  Word pre, cyc;
  for (std::size_t i = 0; i < head; ++i) pre.push_back(a.bit_at(i) ^ b.bit_at(i));
  for (std::size_t i = head; i < head + period; ++i) cyc.push_back(a.bit_at(i) ^ b.bit_at(i));
  return Point::normalize(std::move(pre), std::move(cyc));
}

// ---------------------------------------------------------------------------
// Cylinders B(c) = { x : x|len(c) = c }.

class Cylinder {
 public:
  Cylinder() = default;
  explicit Cylinder(Word w) : word_(std::move(w)) {}
  explicit Cylinder(std::string_view bits) : word_(bits) {}

  const Word& word() const noexcept { return word_; }
  std::size_t depth() const noexcept { return word_.size(); }

  /// B(this) contains B(other).
  bool contains(const Cylinder& other) const noexcept { return word_.is_prefix_of(other.word_); }
  bool contains(const Point& p) const noexcept {
    for (std::size_t i = 0; i < word_.size(); ++i)
      if (p.bit_at(i) != word_[i]) return false;
    return true;
  }
  bool disjoint(const Cylinder& other) const noexcept { return !contains(other) && !other.contains(*this); }

  Cylinder child(Bit b) const {
    Word w = word_;
    w.push_back(b);
    return Cylinder(std::move(w));
  }

  friend bool operator==(const Cylinder&, const Cylinder&) = default;
  friend std::strong_ordering operator<=>(const Cylinder&, const Cylinder&) = default;

 private:
  Word word_;
};

inline bool in_cylinder(const Point& p, const Cylinder& c) noexcept { return c.contains(p); }

/// U_k(x) = B(x|k+1).
inline Cylinder u_k(const Point& x, std::size_t k) { return Cylinder(x.prefix(k + 1)); }

/// V_k(x) = B(x_0 ... x_{k-1} (1 - x_k)), the sibling of U_k(x).
inline Cylinder v_k(const Point& x, std::size_t k) { return Cylinder(x.prefix(k + 1).flipped(k)); }

// ---------------------------------------------------------------------------
// Text grammar: bits "(" bits ")", cycle nonempty, e.g. "01(10)".

inline std::string format_point(const Point& p) {
  return p.preperiod().str() + "(" + p.cycle().str() + ")";
}

inline Point parse_point(std::string_view text) {
  std::size_t i = 0;
  auto read_bits = [&] {
    std::size_t start = i;
    while (i < text.size() && (text[i] == '0' || text[i] == '1')) ++i;
    return Word(text.substr(start, i - start));
  };
  Word pre = read_bits();
  if (i >= text.size() || text[i] != '(') throw ParseError("point: expected '0', '1' or '('", i);
  ++i;
  std::size_t cycle_start = i;
  Word cyc = read_bits();
  if (i >= text.size() || text[i] != ')') throw ParseError("point: expected '0', '1' or ')'", i);
  if (cyc.empty()) throw ParseError("point: empty cycle", cycle_start);
  ++i;
  if (i != text.size()) throw ParseError("point: trailing characters", i);
  return Point::normalize(std::move(pre), std::move(cyc));
}

inline std::ostream& operator<<(std::ostream& os, const Point& p) { return os << format_point(p); }

inline std::string format_cylinder(const Cylinder& c) { return c.word().empty() ? "ε" : c.word().str(); }

/// Accepts the raw word, with "ε" or "" for the root cylinder.
inline Cylinder parse_cylinder(std::string_view text) {
  if (text == "ε" || text.empty()) return Cylinder();
  for (std::size_t i = 0; i < text.size(); ++i)
    if (text[i] != '0' && text[i] != '1') throw ParseError("cylinder: expected '0' or '1'", i);
  return Cylinder(text);
}

inline std::ostream& operator<<(std::ostream& os, const Cylinder& c) { return os << format_cylinder(c); }

}  // namespace cantor

template <>
struct std::hash<cantor::Point> {
  std::size_t operator()(const cantor::Point& p) const noexcept {
    return std::hash<std::string>{}(p.preperiod().str() + "|" + p.cycle().str());
  }
};
