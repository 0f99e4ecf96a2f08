#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iterator>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cantor/base_tree.hpp"
#include "cantor/point.hpp"

namespace cantor {

/*
 * B(C): finite subsets of C with symmetric difference as addition. The
 * topology comes from the subgroups H(gamma) of elements meeting every cell of
 * a cylinder partition gamma evenly. The depth partitions gamma_n are cofinal
 * among cylinder partitions, so the chain H(gamma_0) > H(gamma_1) > ... is a
 * neighbourhood base at zero and the quotients B / H(gamma_n) are finite with
 * at most 2^(2^n) cosets.
 */
class GroupElement {
 public:
  GroupElement() = default;

  /// The set {points...}; repeated points collapse.
  GroupElement(std::initializer_list<Point> points) : points_(points) { canonicalize(); }
  explicit GroupElement(std::vector<Point> points) : points_(std::move(points)) { canonicalize(); }

  /// The group sum {p_1} + {p_2} + ...; repeated points cancel in pairs.
  static GroupElement sum_of(std::vector<Point> points) {
    std::sort(points.begin(), points.end());
    GroupElement g;
    for (std::size_t i = 0; i < points.size();) {
      std::size_t j = i;
      while (j < points.size() && points[j] == points[i]) ++j;
      if ((j - i) % 2 == 1) g.points_.push_back(points[i]);
      i = j;
    }
    return g;
  }

  const std::vector<Point>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  bool contains(const Point& p) const { return std::binary_search(points_.begin(), points_.end(), p); }

  friend GroupElement operator+(const GroupElement& g, const GroupElement& h) {
    GroupElement out;
    std::set_symmetric_difference(g.points_.begin(), g.points_.end(), h.points_.begin(), h.points_.end(),
                                  std::back_inserter(out.points_));
    return out;
  }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;

 private:
  void canonicalize() {
    std::sort(points_.begin(), points_.end());
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
  }

  std::vector<Point> points_;  // sorted lexicographically, no duplicates
};

inline GroupElement add(const GroupElement& g, const GroupElement& h) { return g + h; }

enum class Parity { Even, Odd };

inline Parity parity(const GroupElement& g) noexcept { return g.size() % 2 ? Parity::Odd : Parity::Even; }

inline Parity operator^(Parity a, Parity b) noexcept { return a == b ? Parity::Even : Parity::Odd; }

/// Membership in H(gamma): every cell holds an even number of points of g.
inline bool in_H(const GroupElement& g, const Partition& gamma) {
  std::map<Cylinder, std::size_t> counts;
  for (const auto& p : g) ++counts[gamma.cell_of(p)];
  return std::all_of(counts.begin(), counts.end(), [](const auto& kv) { return kv.second % 2 == 0; });
}

/// Image of g in B / H(gamma_n): the parity of |g ∩ B(w)| for every depth-n word w,
/// indexed by w read as a binary number.
class ParityVector {
 public:
  explicit ParityVector(std::size_t depth) : depth_(depth), bits_(std::size_t{1} << depth, false) {}

  std::size_t depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return bits_.size(); }
  bool operator[](std::size_t i) const { return bits_[i]; }
  void flip(std::size_t i) { bits_[i] = !bits_[i]; }

  bool all_zero() const noexcept { return std::none_of(bits_.begin(), bits_.end(), [](bool b) { return b; }); }

  /// Sum of all entries mod 2; equals |g| mod 2.
  Parity total() const noexcept {
    return std::count(bits_.begin(), bits_.end(), true) % 2 ? Parity::Odd : Parity::Even;
  }

  friend ParityVector operator^(ParityVector a, const ParityVector& b) {
    if (a.depth_ != b.depth_) throw std::invalid_argument("ParityVector: depth mismatch");
    for (std::size_t i = 0; i < a.bits_.size(); ++i) a.bits_[i] = a.bits_[i] != b.bits_[i];
    return a;
  }

  friend bool operator==(const ParityVector&, const ParityVector&) = default;
  friend auto operator<=>(const ParityVector& a, const ParityVector& b) {
    if (auto c = a.depth_ <=> b.depth_; c != 0) return c;
    return std::lexicographical_compare_three_way(a.bits_.begin(), a.bits_.end(), b.bits_.begin(), b.bits_.end());
  }

 private:
  std::size_t depth_;
  std::vector<bool> bits_;
};

inline ParityVector coset_signature(const GroupElement& g, std::size_t n) {
  if (n > kMaxPartitionDepth) throw std::out_of_range("coset_signature: depth too large");
  ParityVector sig(n);
  for (const auto& p : g) sig.flip(p.prefix(n).to_index());
  return sig;
}

/// A distance value: 0 or 2^-n for n >= 0.
class Dyadic {
 public:
  static Dyadic zero() noexcept { return Dyadic(); }
  static Dyadic one() noexcept { return pow2_neg(0); }
  static Dyadic pow2_neg(std::size_t n) noexcept {
    Dyadic d;
    d.exponent_ = n;
    return d;
  }

  bool is_zero() const noexcept { return !exponent_; }
  /// n for the value 2^-n; meaningless for zero.
  std::size_t exponent() const noexcept { return exponent_.value_or(0); }

  friend bool operator==(const Dyadic&, const Dyadic&) = default;
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) noexcept {
    if (a.is_zero() || b.is_zero()) return !a.is_zero() <=> !b.is_zero();
    return *b.exponent_ <=> *a.exponent_;
  }

  std::string str() const {
    if (is_zero()) return "0";
    if (*exponent_ == 0) return "1";
    if (*exponent_ < 63) return "1/" + std::to_string(std::uint64_t{1} << *exponent_);
    return "2^-" + std::to_string(*exponent_);
  }

 private:
  std::optional<std::size_t> exponent_;
};

inline std::ostream& operator<<(std::ostream& os, const Dyadic& d) { return os << d.str(); }

/// Ultrametric making the balls around g exactly the cosets g + H(gamma_n):
/// 0 if equal, 1 if the difference is odd, else 2^-n for the largest n with
/// g + h in H(gamma_n).
inline Dyadic group_distance(const GroupElement& g, const GroupElement& h) {
  GroupElement diff = g + h;
  if (diff.empty()) return Dyadic::zero();
  if (parity(diff) == Parity::Odd) return Dyadic::one();
  // Distinct points separate by depth max(first_diff) + 1, where every cell is
  // odd or empty, so the loop terminates.
  for (std::size_t n = 1;; ++n) {
    std::map<Word, std::size_t> counts;
    for (const auto& p : diff) ++counts[p.prefix(n)];
    for (const auto& [w, c] : counts)
      if (c % 2) return Dyadic::pow2_neg(n - 1);
  }
}

/// h_y(g) = g + {y}; swaps the parity cosets.
inline GroupElement translate(const GroupElement& g, const Point& y) { return g + GroupElement{y}; }

using PointPredicate = std::function<bool(const Point&)>;

inline bool subset_of(const GroupElement& g, const PointPredicate& pred) {
  return std::all_of(g.begin(), g.end(), pred);
}

/// Membership in a finite union of cylinders.
inline PointPredicate in_union(CylinderFamily family) {
  return [family = std::move(family)](const Point& p) {
    return std::any_of(family.begin(), family.end(), [&](const Cylinder& c) { return c.contains(p); });
  };
}

// Text form: {p1; p2; ...}, canonically sorted, {} for zero.

inline std::string format_group_element(const GroupElement& g) {
  std::string out = "{";
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) out += "; ";
    out += format_point(g.points()[i]);
  }
  return out + "}";
}

/// Parses "{p1; p2; ...}" as a set. Whitespace around items is ignored;
/// a repeated point is rejected since a set cannot list it twice.
inline GroupElement parse_group_element(std::string_view text) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n'; };
  std::size_t lo = 0, hi = text.size();
  while (lo < hi && is_space(text[lo])) ++lo;
  while (hi > lo && is_space(text[hi - 1])) --hi;
  if (lo == hi || text[lo] != '{') throw ParseError("group element: expected '{'", lo);
  if (text[hi - 1] != '}') throw ParseError("group element: expected '}'", hi);
  std::vector<Point> points;
  std::size_t pos = lo + 1;
  const std::size_t end = hi - 1;
  bool any = false;
  for (std::size_t k = pos; k < end; ++k) any = any || !is_space(text[k]);
  if (!any) return GroupElement();
  while (pos <= end) {
    std::size_t semi = text.find(';', pos);
    if (semi == std::string_view::npos || semi > end) semi = end;
    std::size_t a = pos, b = semi;
    while (a < b && is_space(text[a])) ++a;
    while (b > a && is_space(text[b - 1])) --b;
    try {
      points.push_back(parse_point(text.substr(a, b - a)));
    } catch (const ParseError& e) {
      throw ParseError(std::string("group element: ") + e.what(), a + e.position());
    }
    pos = semi + 1;
  }
  GroupElement g(points);
  if (g.size() != points.size()) throw ParseError("group element: repeated point", lo);
  return g;
}

inline std::ostream& operator<<(std::ostream& os, const GroupElement& g) { return os << format_group_element(g); }

}  // namespace cantor
