#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cantor/base_tree.hpp"
#include "cantor/boolean_group.hpp"
#include "cantor/errors.hpp"
#include "cantor/point.hpp"

namespace cantor {

/*
 * The open retraction r: B^1(C) -> C.
 *
 * For odd g, Upsilon(g) is the set of maximal cylinders meeting g in a
 * nonzero even number of points, R(g) is g minus their union, and r(g) is the
 * lexicographically least point of R(g).
 *
 * Upsilon is found by walking the trie of g's points: the root count |g| is
 * odd, and along any root path the first even-count cylinder is the maximal
 * even cylinder above everything below it. So from an odd node with more
 * than one point we visit both children, emit a child with even nonzero
 * count, and stop at a child holding a single point.
 */

namespace detail {

inline void require_odd(const GroupElement& g, const char* op) {
  if (parity(g) != Parity::Odd)
    throw ParityError(std::string(op) + ": defined on odd-cardinality elements only, got |g| = " +
                      std::to_string(g.size()));
}

// pts is a lexicographically sorted run sharing the first `depth` bits.
inline void collect_even(std::span<const Point> pts, std::size_t depth, CylinderFamily& out) {
  auto split = pts.begin();
  while (split != pts.end() && split->bit_at(depth) == 0) ++split;
  std::span<const Point> halves[2] = {{pts.begin(), split}, {split, pts.end()}};
  for (const auto& half : halves) {
    if (half.empty() || half.size() == 1) continue;
    if (half.size() % 2 == 0)
      out.insert(Cylinder(half.front().prefix(depth + 1)));
    else
      collect_even(half, depth + 1, out);
  }
}

}  // namespace detail

inline CylinderFamily upsilon(const GroupElement& g) {
  detail::require_odd(g, "upsilon");
  CylinderFamily out;
  if (g.size() > 1) detail::collect_even(g.points(), 0, out);
  return out;
}

/// R(g): the points of g outside every Upsilon cylinder.
inline GroupElement survivors(const GroupElement& g) {
  CylinderFamily ups = upsilon(g);
  std::vector<Point> keep;
  for (const auto& p : g) {
    bool covered = false;
    for (const auto& c : ups) covered = covered || c.contains(p);
    if (!covered) keep.push_back(p);
  }
  return GroupElement(std::move(keep));
}

inline Point retract(const GroupElement& g) {
  detail::require_odd(g, "retract");
  if (g.size() == 1) return g.points().front();
  return survivors(g).points().front();
}

/// r restricted to B^1(C | Y) for Y given by a predicate.
inline Point retract_restricted(const GroupElement& g, const PointPredicate& in_y) {
  detail::require_odd(g, "retract_restricted");
  for (const auto& p : g)
    if (!in_y(p)) throw PredicateError("retract_restricted: point " + format_point(p) + " is outside the subspace");
  return retract(g);
}

struct OpennessWitness {
  Point x;              // r(g)
  Cylinder U;           // basic neighbourhood of x missing every Upsilon cylinder
  std::size_t depth;    // depth of U, at least the requested one
  bool verified = false;
  std::size_t checked = 0;
  std::optional<Point> counterexample;  // y in U with r(g + {x, y}) != y
};

/// Sample points of B(c): c followed by every word of length `extra`, each
/// continued by the tails (0), (1) and (01).
inline std::vector<Point> cylinder_samples(const Cylinder& c, std::size_t extra) {
  static const Point tails[] = {Point::normalize("", "0"), Point::normalize("", "1"), Point::normalize("", "01")};
  std::vector<Point> out;
  for (std::size_t i = 0; i < (std::size_t{1} << extra); ++i)
    for (const auto& t : tails) out.push_back(prepend(c.word() + Word::from_index(i, extra), t));
  return out;
}

/// Checks that moving the selected point anywhere inside U moves r along:
/// Upsilon(g + {x, y}) = Upsilon(g) and r(g + {x, y}) = y.
inline bool openness_holds_at(const GroupElement& g, const CylinderFamily& ups, const Point& x, const Point& y) {
  GroupElement h = g + GroupElement::sum_of({x, y});
  return upsilon(h) == ups && retract(h) == y;
}

/// Smallest cylinder at r(g) of depth >= n avoiding the union of Upsilon(g),
/// verified on cylinder_samples(U, sample_depth) plus any extra probes.
inline OpennessWitness openness_witness(const GroupElement& g, std::size_t n, std::size_t sample_depth = 3,
                                        std::span<const Point> probes = {}) {
  detail::require_odd(g, "openness_witness");
  const CylinderFamily ups = upsilon(g);
  const Point x = retract(g);
  // x lies in no Upsilon cylinder, so B(x|d) misses B(w) iff x|d is not a prefix of w.
  std::size_t depth = n;
  for (const auto& c : ups) depth = std::max(depth, x.prefix(c.depth()).common_prefix(c.word()) + 1);

  OpennessWitness w{x, Cylinder(x.prefix(depth)), depth, false, 0, std::nullopt};
  auto check = [&](const Point& y) {
    ++w.checked;
    if (!openness_holds_at(g, ups, x, y) && !w.counterexample) w.counterexample = y;
  };
  for (const auto& y : cylinder_samples(w.U, sample_depth)) check(y);
  for (const auto& y : probes)
    if (w.U.contains(y)) check(y);
  w.verified = !w.counterexample;
  return w;
}

/// The Mal'tsev operation r({x} + {y} + {z}); its value is always one of x, y, z.
inline Point phi_ret(const Point& x, const Point& y, const Point& z) {
  return retract(GroupElement::sum_of({x, y, z}));
}

}  // namespace cantor
