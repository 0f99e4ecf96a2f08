#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "cantor/point.hpp"

namespace cantor {

/*
 * The standard non-Archimedean base of C is the binary word tree: B(c) contains
 * B(c') iff c is a prefix of c', and two cylinders are disjoint iff neither
 * word is a prefix of the other. Everything here is exact word arithmetic on
 * finite families of cylinders.
 */

using CylinderFamily = std::set<Cylinder>;

namespace detail {

/// Every prefix (including the word itself) of every member.
inline std::set<Word> prefix_closure(const CylinderFamily& family) {
  std::set<Word> out;
  for (const auto& c : family)
    for (std::size_t len = 0; len <= c.depth(); ++len) out.insert(c.word().substr(0, len));
  return out;
}

inline bool has_proper_prefix_in(const Word& w, const std::set<Cylinder>& family) {
  for (std::size_t len = 0; len < w.size(); ++len)
    if (family.count(Cylinder(w.substr(0, len)))) return true;
  return false;
}

}  // namespace detail

/// Members of the family not strictly contained in another member.
inline CylinderFamily maximal_elements(const CylinderFamily& family) {
  CylinderFamily out;
  for (const auto& c : family)
    if (!detail::has_proper_prefix_in(c.word(), family)) out.insert(c);
  return out;
}

/// The partition of the union of `family` into maximal basic subcylinders.
/// For a family of cylinders every basic subset of a member already lies
/// under a maximal member, so this coincides with maximal_elements.
inline CylinderFamily inscribe(const CylinderFamily& family) { return maximal_elements(family); }

inline constexpr std::size_t kMaxPartitionDepth = 24;

/// All 2^n cylinders of depth n.
inline CylinderFamily depth_partition(std::size_t n) {
  if (n > kMaxPartitionDepth)
    throw std::out_of_range("depth_partition: depth " + std::to_string(n) + " exceeds " +
                            std::to_string(kMaxPartitionDepth));
  CylinderFamily out;
  for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) out.insert(Cylinder(Word::from_index(i, n)));
  return out;
}

struct PartitionCheck {
  bool ok = false;
  std::optional<std::pair<Cylinder, Cylinder>> overlap;  // (outer, inner)
  std::optional<Cylinder> uncovered;
  std::optional<Cylinder> outside;  // member not inside the carrier

  explicit operator bool() const noexcept { return ok; }
};

/// Searches the carrier for a basic cylinder meeting no member.
///
/// Descends the prefix tree of the family from the carrier: a node that is a
/// member is covered, a node that is not a prefix of any member is an
/// uncovered witness. Overlapping members are harmless here.
inline std::optional<Cylinder> uncovered_witness(const CylinderFamily& family,
                                                 const Cylinder& carrier = Cylinder()) {
  const std::set<Word> prefixes = detail::prefix_closure(family);
  // Some member may contain the whole carrier.
  for (std::size_t len = 0; len <= carrier.depth(); ++len)
    if (family.count(Cylinder(carrier.word().substr(0, len)))) return std::nullopt;

  std::optional<Cylinder> witness;
  auto descend = [&](auto&& self, const Word& w) -> bool {
    if (family.count(Cylinder(w))) return true;
    if (!prefixes.count(w)) {
      witness = Cylinder(w);
      return false;
    }
    Word w0 = w, w1 = w;
    w0.push_back(0);
    w1.push_back(1);
    return self(self, w0) && self(self, w1);
  };
  descend(descend, carrier.word());
  return witness;
}

inline bool covers(const CylinderFamily& family, const Cylinder& carrier = Cylinder()) {
  return !uncovered_witness(family, carrier).has_value();
}

/// True iff the family is an antichain lying in `carrier` whose union is `carrier`.
inline PartitionCheck is_partition(const CylinderFamily& family, const Cylinder& carrier = Cylinder()) {
  PartitionCheck check;
  for (const auto& c : family) {
    if (!carrier.contains(c)) {
      check.outside = c;
      return check;
    }
  }
  // std::set order puts a prefix immediately before some extension of it if
  // one exists, so comparing neighbours finds every overlap.
  const Cylinder* prev = nullptr;
  for (const auto& c : family) {
    if (prev && prev->contains(c)) {
      check.overlap = std::make_pair(*prev, c);
      return check;
    }
    prev = &c;
  }
  check.uncovered = uncovered_witness(family, carrier);
  check.ok = !check.uncovered;
  return check;
}

/// A validated cylinder partition of C.
class Partition {
 public:
  explicit Partition(CylinderFamily members) : members_(std::move(members)) {
    auto check = is_partition(members_);
    if (!check) {
      std::string why = check.overlap     ? "overlapping members " + format_cylinder(check.overlap->first) +
                                                " and " + format_cylinder(check.overlap->second)
                        : check.uncovered ? "uncovered cylinder " + format_cylinder(*check.uncovered)
                                          : "member outside C";
      throw std::invalid_argument("not a partition of C: " + why);
    }
  }

  static Partition depth(std::size_t n) { return Partition(depth_partition(n)); }

  const CylinderFamily& members() const noexcept { return members_; }

  /// The member containing p.
  const Cylinder& cell_of(const Point& p) const {
    // Members form an antichain, so exactly one prefix of p is a member.
    Word w;
    std::size_t len = 0;
    for (;;) {
      auto it = members_.find(Cylinder(w));
      if (it != members_.end()) return *it;
      w.push_back(p.bit_at(len++));
    }
  }

  std::size_t max_depth() const noexcept {
    std::size_t d = 0;
    for (const auto& c : members_) d = std::max(d, c.depth());
    return d;
  }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  CylinderFamily members_;
};

/// Every member of `fine` lies inside some member of `coarse`.
inline bool refines(const CylinderFamily& fine, const CylinderFamily& coarse) {
  for (const auto& c : fine) {
    bool inside = false;
    for (const auto& d : coarse) inside = inside || d.contains(c);
    if (!inside) return false;
  }
  return true;
}

// Text form: {w1,w2,...} with ε for the empty word.

inline std::string format_family(const CylinderFamily& family) {
  std::string out = "{";
  bool first = true;
  for (const auto& c : family) {
    if (!first) out += ",";
    out += format_cylinder(c);
    first = false;
  }
  return out + "}";
}

inline CylinderFamily parse_family(std::string_view text) {
  if (text.size() < 2 || text.front() != '{' || text.back() != '}')
    throw ParseError("family: expected '{...}'", text.empty() || text.front() != '{' ? 0 : text.size());
  CylinderFamily out;
  std::size_t pos = 1;
  const std::size_t end = text.size() - 1;
  if (pos == end) return out;
  while (pos <= end) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos || comma > end) comma = end;
    std::string_view item = text.substr(pos, comma - pos);
    try {
      out.insert(parse_cylinder(item));
    } catch (const ParseError& e) {
      throw ParseError("family: bad cylinder '" + std::string(item) + "'", pos + e.position());
    }
    pos = comma + 1;
  }
  return out;
}

}  // namespace cantor
