#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cantor/boolean_group.hpp"
#include "cantor/harness/config.hpp"
#include "cantor/harness/report.hpp"
#include "cantor/retraction.hpp"

namespace cantor::harness {

/*
 * Brute-force check of the retraction on a finite model.
 *
 * The grid of depth n is the 2^n points w(0) with |w| = n. For every odd
 * subset g of the grid with |g| <= max_size the definitions are evaluated
 * literally (all cylinder words of length <= n+1, pairwise maximality) and
 * compared with the trie algorithm in retraction.hpp.
 */

struct OracleReport {
  std::size_t depth = 0;
  std::size_t max_size = 0;
  std::map<std::size_t, std::size_t> cases_by_size;
  std::size_t cases = 0;
  std::size_t openness_checks = 0;
  std::size_t continuity_checks = 0;
  std::size_t subgroup_checks = 0;
  std::size_t failures = 0;
  std::string first_failure;  // which law, empty if none
  Replay counterexample;

  bool passed() const noexcept { return failures == 0; }
};

namespace oracle_detail {

inline std::vector<Point> grid(std::size_t n) {
  std::vector<Point> pts;
  for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) pts.push_back(Point::constant_tail(Word::from_index(i, n)));
  return pts;
}

inline std::size_t count_in(const std::vector<Point>& pts, const Word& w) {
  std::size_t c = 0;
  for (const auto& p : pts)
    if (p.prefix(w.size()) == w) ++c;
  return c;
}

/// Upsilon straight from the definition: every word of length <= max_len with
/// even nonzero count, then drop those having another such word as a proper prefix.
inline CylinderFamily upsilon(const std::vector<Point>& pts, std::size_t max_len) {
  std::vector<Word> even;
  for (std::size_t len = 0; len <= max_len; ++len)
    for (std::size_t i = 0; i < (std::size_t{1} << len); ++i) {
      Word w = Word::from_index(i, len);
      std::size_t c = count_in(pts, w);
      if (c > 0 && c % 2 == 0) even.push_back(w);
    }
  CylinderFamily out;
  for (const auto& a : even) {
    bool maximal = true;
    for (const auto& b : even)
      if (b != a && b.is_prefix_of(a)) maximal = false;
    if (maximal) out.insert(Cylinder(a));
  }
  return out;
}

/// Points of g all of whose prefix cylinders (length <= max_len) meet g oddly.
inline std::vector<Point> prefix_odd(const std::vector<Point>& pts, std::size_t max_len) {
  std::vector<Point> out;
  for (const auto& p : pts) {
    bool odd = true;
    for (std::size_t len = 0; len <= max_len && odd; ++len) odd = count_in(pts, p.prefix(len)) % 2 == 1;
    if (odd) out.push_back(p);
  }
  return out;
}

/// All k-subsets of {0..n-1} in lexicographic order.
template <typename F>
void for_each_combination(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace oracle_detail

inline OracleReport exhaustive_oracle(std::size_t n, std::size_t max_size) {
  if (n > kMaxOracleDepth) throw std::invalid_argument("exhaustive_oracle: depth exceeds guard");
  if (max_size > kMaxOracleSetSize) throw std::invalid_argument("exhaustive_oracle: set size exceeds guard");
  namespace od = oracle_detail;

  OracleReport rep;
  rep.depth = n;
  rep.max_size = max_size;
  const std::vector<Point> grid = od::grid(n);
  const std::size_t max_len = n + 1;

  auto fail = [&](const std::string& law, const GroupElement& g, Replay extra = {}) {
    if (rep.failures++ == 0) {
      rep.first_failure = law;
      rep.counterexample = {{"g", format_group_element(g)}};
      for (auto& kv : extra) rep.counterexample.push_back(std::move(kv));
    }
  };

  std::vector<GroupElement> all;
  for (std::size_t s = 1; s <= max_size; s += 2) {
    od::for_each_combination(grid.size(), s, [&](const std::vector<std::size_t>& idx) {
      std::vector<Point> pts;
      for (auto i : idx) pts.push_back(grid[i]);
      GroupElement g(pts);
      all.push_back(g);
      ++rep.cases;
      ++rep.cases_by_size[s];

      // (a) Upsilon, R and r against the literal definitions.
      const CylinderFamily ups = od::upsilon(pts, max_len);
      if (ups != cantor::upsilon(g)) return fail("upsilon", g);
      std::vector<Point> rest;
      for (const auto& p : pts)
        if (std::none_of(ups.begin(), ups.end(), [&](const Cylinder& c) { return c.contains(p); }))
          rest.push_back(p);
      if (GroupElement(rest) != survivors(g)) return fail("survivors", g);
      const Point x = retract(g);
      if (x != *std::min_element(rest.begin(), rest.end())) return fail("retract", g);

      // (b) r(g) is the unique point whose every prefix cylinder meets g oddly.
      auto odd = od::prefix_odd(pts, max_len);
      if (odd.size() != 1 || odd.front() != x) return fail("prefix-odd uniqueness", g);

      // (c) openness: r(g + {x, y}) = y for every grid y in the witness cylinder.
      OpennessWitness w = openness_witness(g, 0, 0);
      std::vector<Point> in_u;
      for (const auto& y : grid)
        if (w.U.contains(y)) in_u.push_back(y);
      for (const auto& y : in_u) {
        ++rep.openness_checks;
        GroupElement h = g + GroupElement::sum_of({x, y});
        if (od::upsilon(h.points(), max_len) != ups || retract(h) != y)
          return fail("openness", g, {{"y", format_point(y)}, {"U", format_cylinder(w.U)}});
      }

      // Moving g by an even set supported in U keeps r inside U.
      const std::size_t m = in_u.size();
      auto check_shift = [&](const std::vector<Point>& e) {
        ++rep.continuity_checks;
        GroupElement h = g + GroupElement(e);
        if (!w.U.contains(retract(h)))
          return fail("continuity", g, {{"e", format_group_element(GroupElement(e))}}), false;
        return true;
      };
      if (m <= 6) {
        for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
          std::vector<Point> e;
          for (std::size_t i = 0; i < m; ++i)
            if (mask >> i & 1U) e.push_back(in_u[i]);
          if (e.size() % 2 == 0 && !check_shift(e)) return;
        }
      } else {
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = i + 1; j < m; ++j)
            if (!check_shift({in_u[i], in_u[j]})) return;
      }
    });
  }

  // (d) H(gamma_m) for m <= n on sums of enumerated elements: differences of two
  // odd elements are even, lie in H exactly when the signatures agree, and H is
  // closed under addition.
  const std::size_t N = all.size();
  for (std::size_t i = 0; i < N && rep.failures == 0; ++i) {
    const GroupElement& a = all[i];
    const GroupElement& b = all[(i + 1) % N];
    const GroupElement& c = all[(i * 31 + 7) % N];
    for (std::size_t depth = 0; depth <= n; ++depth) {
      ++rep.subgroup_checks;
      const Partition gamma = Partition::depth(depth);
      const GroupElement ab = a + b, bc = b + c;
      const bool same_ab = coset_signature(a, depth) == coset_signature(b, depth);
      const bool same_bc = coset_signature(b, depth) == coset_signature(c, depth);
      if (in_H(ab, gamma) != same_ab || in_H(bc, gamma) != same_bc) {
        fail("coset membership", ab);
        break;
      }
      if (same_ab && same_bc && !in_H(ab + bc, gamma)) {
        fail("subgroup closure", ab + bc);
        break;
      }
      if (!in_H(GroupElement(), gamma)) {
        fail("zero in H", GroupElement());
        break;
      }
    }
  }
  return rep;
}

inline SuiteResult oracle_suite_result(const OracleReport& rep) {
  SuiteResult r;
  r.name = "oracle";
  r.trials = rep.cases;
  r.status = rep.passed() ? Status::Pass : Status::Fail;
  std::string sizes;
  for (const auto& [s, c] : rep.cases_by_size) sizes += (sizes.empty() ? "" : ",") + std::to_string(s) + ":" + std::to_string(c);
  r.detail = "depth=" + std::to_string(rep.depth) + " max_size=" + std::to_string(rep.max_size) +
             " subsets=" + std::to_string(rep.cases) + " by_size={" + sizes + "} openness=" +
             std::to_string(rep.openness_checks) + " continuity=" + std::to_string(rep.continuity_checks) +
             " subgroup=" + std::to_string(rep.subgroup_checks);
  if (!rep.passed()) {
    r.detail += " first_failure=" + rep.first_failure;
    r.counterexample = rep.counterexample;
  }
  return r;
}

}  // namespace cantor::harness
