#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <functional>
#include <future>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cantor/cantor.hpp"
#include "cantor/harness/config.hpp"
#include "cantor/harness/oracle.hpp"
#include "cantor/harness/report.hpp"

namespace cantor::harness {

/*
 * Property suites. Each suite draws trial i of property P from
 * trial_rng(seed, "<suite>/<P>", i), so a report depends only on the config
 * and never on scheduling. A suite stops at its first failing trial and
 * records the inputs in text grammar.
 */

struct SuiteContext {
  const Config& config;
  std::shared_ptr<const ThetaScheme> scheme;
};

using Check = std::optional<Replay>;

inline Check ok() { return std::nullopt; }
inline Check bad(Replay r) { return r; }
inline std::string fmt(const Point& p) { return format_point(p); }

class SuiteBuilder {
 public:
  SuiteBuilder(std::string name, const SuiteContext& ctx) : ctx_(ctx) { result_.name = std::move(name); }

  /// Runs `f(rng)` for config.trials trials (or `trials` when given).
  template <typename F>
  SuiteBuilder& property(std::string_view prop, F&& f, std::optional<std::size_t> trials = std::nullopt) {
    if (failed()) return *this;
    const std::size_t n = trials.value_or(ctx_.config.trials);
    const std::string stream = result_.name + "/" + std::string(prop);
    for (std::size_t i = 0; i < n; ++i) {
      Rng rng = trial_rng(ctx_.config.seed, stream, i);
      ++result_.trials;
      if (Check c = f(rng)) {
        record(prop, std::move(*c), i);
        break;
      }
    }
    return *this;
  }

  /// A single deterministic check.
  SuiteBuilder& check(std::string_view prop, const std::function<Check()>& f) {
    if (failed()) return *this;
    ++result_.trials;
    if (Check c = f()) record(prop, std::move(*c), std::nullopt);
    return *this;
  }

  SuiteBuilder& note(std::string text) {
    if (!result_.detail.empty()) result_.detail += "; ";
    result_.detail += std::move(text);
    return *this;
  }

  bool failed() const noexcept { return result_.status == Status::Fail; }
  SuiteResult finish() { return std::move(result_); }

 private:
  void record(std::string_view prop, Replay r, std::optional<std::size_t> trial) {
    result_.status = Status::Fail;
    result_.counterexample.emplace_back("property", std::string(prop));
    if (trial) result_.counterexample.emplace_back("trial", std::to_string(*trial));
    for (auto& kv : r) result_.counterexample.push_back(std::move(kv));
  }

  const SuiteContext& ctx_;
  SuiteResult result_;
};

// ---------------------------------------------------------------------------
// Generators shared by the suites.

/// Odd-size set whose points share short random prefixes, so that Upsilon is
/// nontrivial far more often than for independent points.
inline GroupElement gen_clustered(Rng& rng, const GenBounds& b, std::size_t max_size, bool odd) {
  for (;;) {
    std::size_t n = uniform_upto(rng, max_size);
    std::vector<Point> pts;
    for (std::size_t i = 0; i < n; ++i)
      pts.push_back(prepend(random_word(rng, uniform_upto(rng, 4)), gen_point(rng, b)));
    GroupElement g(pts);
    if (!odd || g.size() % 2 == 1) return g;
  }
}

inline GroupElement gen_element(Rng& rng, const GenBounds& b, std::size_t max_size = 6) {
  return gen_clustered(rng, b, max_size, false);
}

/// An element of H(gamma_n): pairs of points in common depth-n cells.
inline GroupElement gen_in_H(Rng& rng, const GenBounds& b, std::size_t n) {
  GroupElement g;
  std::size_t pairs = uniform_upto(rng, 3);
  for (std::size_t i = 0; i < pairs; ++i) {
    Cylinder cell(random_word(rng, n));
    g = g + GroupElement::sum_of({gen_point_in(rng, cell, b), gen_point_in(rng, cell, b)});
  }
  return g;
}

/// Random cylinder partition of C by repeated splitting, depth <= max_depth.
inline CylinderFamily gen_partition(Rng& rng, std::size_t max_depth) {
  CylinderFamily out;
  auto grow = [&](auto&& self, const Word& w) -> void {
    if (w.size() >= max_depth || uniform_upto(rng, 2) == 0) {
      out.insert(Cylinder(w));
      return;
    }
    Word a = w, c = w;
    a.push_back(0);
    c.push_back(1);
    self(self, a);
    self(self, c);
  };
  grow(grow, Word());
  return out;
}

inline CylinderFamily gen_family(Rng& rng, std::size_t max_members, std::size_t max_len) {
  CylinderFamily f;
  std::size_t n = uniform_upto(rng, max_members);
  for (std::size_t i = 0; i < n; ++i) f.insert(Cylinder(random_word(rng, uniform_upto(rng, max_len))));
  return f;
}

inline Cylinder gen_proper_cylinder(Rng& rng, std::size_t max_depth) {
  return Cylinder(random_word(rng, 1 + uniform_upto(rng, max_depth - 1)));
}

inline std::set<Word> words_at_depth(const CylinderFamily& f, std::size_t d) {
  std::set<Word> out;
  for (const auto& c : f)
    for (std::size_t i = 0; i < (std::size_t{1} << (d - c.depth())); ++i)
      out.insert(c.word() + Word::from_index(i, d - c.depth()));
  return out;
}

// ---------------------------------------------------------------------------
// points

inline SuiteResult suite_points_normal_form(const SuiteContext& ctx) {
  const GenBounds b = ctx.config.bounds();
  SuiteBuilder s("points_normal_form", ctx);
  s.property("normalize idempotent", [&](Rng& rng) -> Check {
    Point p = gen_point(rng, b);
    if (Point::normalize(p.preperiod(), p.cycle()) != p) return bad({{"p", fmt(p)}});
    if (parse_point(format_point(p)) != p) return bad({{"p", fmt(p)}});
    // Same sequence, padded representation.
    Point padded = Point::normalize(p.preperiod() + p.cycle(), p.cycle() + p.cycle());
    if (padded != p) return bad({{"p", fmt(p)}, {"padded", fmt(padded)}});
    return ok();
  });
  s.property("lex total order", [&](Rng& rng) -> Check {
    Point p = gen_point(rng, b), q = gen_point(rng, b), r = gen_point(rng, b);
    if (uniform_upto(rng, 3) == 0) q = prepend(p.prefix(uniform_upto(rng, 20)), q);
    Replay in{{"p", fmt(p)}, {"q", fmt(q)}, {"r", fmt(r)}};
    auto pq = p <=> q, qp = q <=> p;
    if ((pq < 0) != (qp > 0) || (pq == 0) != (p == q) || (pq == 0) != (qp == 0)) return bad(in);
    if (p < q && q < r && !(p < r)) return bad(in);
    // Bit expansion oracle at four times the decision bound.
    std::size_t n = 4 * p.decision_bound(q);
    std::optional<std::size_t> d;
    for (std::size_t i = 0; i < n && !d; ++i)
      if (p.bit_at(i) != q.bit_at(i)) d = i;
    if (d != first_diff(p, q)) return bad(in);
    if (d && *d >= p.decision_bound(q)) return bad(in);
    if (d && ((p.bit_at(*d) < q.bit_at(*d)) != (pq < 0))) return bad(in);
    return ok();
  });
  s.property("support kind", [&](Rng& rng) -> Check {
    Point p = uniform_upto(rng, 1) ? gen_point(rng, b) : gen_point_Q(rng, b);
    bool zero_tail = true;
    for (std::size_t i = 64; i < 128; ++i) zero_tail = zero_tail && p.bit_at(i) == 0;
    if (zero_tail != (support_kind(p) == SupportKind::Finite)) return bad({{"p", fmt(p)}});
    return ok();
  });
  return s.finish();
}

inline SuiteResult suite_points_uv_laws(const SuiteContext& ctx) {
  const GenBounds b = ctx.config.bounds();
  SuiteBuilder s("points_uv_laws", ctx);
  s.property("U2 partition", [&](Rng& rng) -> Check {
    Point x = gen_point(rng, b);
    std::size_t k = uniform_upto(rng, 16);
    CylinderFamily f{u_k(x, k)};
    for (std::size_t n = 0; n <= k; ++n) f.insert(v_k(x, n));
    if (!is_partition(f)) return bad({{"x", fmt(x)}, {"k", std::to_string(k)}});
    return ok();
  });
  s.property("U3 V-cell of z", [&](Rng& rng) -> Check {
    Point x = gen_point(rng, b), z = gen_point(rng, b);
    auto k = first_diff(z, x);
    if (k && !v_k(x, *k).contains(z)) return bad({{"x", fmt(x)}, {"z", fmt(z)}});
    return ok();
  });
  s.property("U5", [&](Rng& rng) -> Check {
    Point x = gen_point(rng, b);
    std::size_t k = uniform_upto(rng, 16);
    Point y = gen_point_in(rng, u_k(x, k), b);
    if (u_k(y, k) != u_k(x, k) || v_k(y, k) != v_k(x, k) || !u_k(y, k).contains(x))
      return bad({{"x", fmt(x)}, {"y", fmt(y)}, {"k", std::to_string(k)}});
    return ok();
  });
  s.property("U6", [&](Rng& rng) -> Check {
    Point x = gen_point(rng, b);
    std::size_t k = uniform_upto(rng, 16);
    Point y = gen_point_in(rng, v_k(x, k), b);
    if (v_k(y, k) != u_k(x, k) || u_k(y, k) != v_k(x, k) || !v_k(y, k).contains(x))
      return bad({{"x", fmt(x)}, {"y", fmt(y)}, {"k", std::to_string(k)}});
    return ok();
  });
  return s.finish();
}

// ---------------------------------------------------------------------------
// base_tree

inline SuiteResult suite_base_tree(const SuiteContext& ctx) {
  SuiteBuilder s("base_tree", ctx);
  s.property("maximal elements vs pairwise oracle", [&](Rng& rng) -> Check {
    CylinderFamily f = gen_family(rng, 12, 6);
    CylinderFamily expect;
    for (const auto& a : f) {
      bool dominated = false;
      for (const auto& c : f) dominated = dominated || (c != a && c.contains(a));
      if (!dominated) expect.insert(a);
    }
    CylinderFamily got = maximal_elements(f);
    Replay in{{"family", format_family(f)}, {"got", format_family(got)}};
    if (got != expect || maximal_elements(got) != got) return bad(in);
    for (const auto& a : got)
      for (const auto& c : got)
        if (a != c && !a.disjoint(c)) return bad(in);
    return ok();
  });
  s.property("inscribe keeps union", [&](Rng& rng) -> Check {
    CylinderFamily f = gen_family(rng, 12, 6);
    CylinderFamily g = inscribe(f);
    for (const auto& c : g)
      if (!f.count(c)) return bad({{"family", format_family(f)}});
    std::size_t d = 0;
    for (const auto& c : f) d = std::max(d, c.depth());
    if (words_at_depth(f, d) != words_at_depth(g, d)) return bad({{"family", format_family(f)}});
    return ok();
  });
  s.property("partitions", [&](Rng& rng) -> Check {
    CylinderFamily p = gen_partition(rng, 6);
    Replay in{{"partition", format_family(p)}};
    if (!is_partition(p)) return bad(in);
    if (p.size() > 1) {
      CylinderFamily q = p;
      q.erase(std::next(q.begin(), static_cast<std::ptrdiff_t>(uniform_upto(rng, q.size() - 1))));
      auto chk = is_partition(q);
      if (chk || !chk.uncovered) return bad(in);
      for (const auto& c : q)
        if (!c.disjoint(*chk.uncovered)) return bad(in);
    }
    CylinderFamily r = p;
    r.insert(p.begin()->child(1));
    auto chk = is_partition(r);
    if (chk || !chk.overlap) return bad(in);
    return ok();
  });
  s.property("depth partitions refine", [&](Rng& rng) -> Check {
    std::size_t m = uniform_upto(rng, 6), n = m + uniform_upto(rng, 3);
    if (!refines(depth_partition(n), depth_partition(m)) || depth_partition(n).size() != (std::size_t{1} << n))
      return bad({{"m", std::to_string(m)}, {"n", std::to_string(n)}});
    return ok();
  }, 64);
  return s.finish();
}

// ---------------------------------------------------------------------------
// boolean_group

inline SuiteResult suite_group_laws(const SuiteContext& ctx) {
  const GenBounds b = ctx.config.bounds();
  SuiteBuilder s("group_laws", ctx);
  s.property("Boolean laws", [&](Rng& rng) -> Check {
    GroupElement g = gen_element(rng, b), h = gen_element(rng, b), k = gen_element(rng, b);
    Replay in{{"g", format_group_element(g)}, {"h", format_group_element(h)}, {"k", format_group_element(k)}};
    if ((g + h) + k != g + (h + k) || g + h != h + g || !(g + g).empty() || g + GroupElement() != g) return bad(in);
    if (parity(g + h) != (parity(g) ^ parity(h))) return bad(in);
    return ok();
  });
  s.property("H subgroup", [&](Rng& rng) -> Check {
    std::size_t n = uniform_upto(rng, 8);
    GroupElement g = gen_in_H(rng, b, n), h = gen_in_H(rng, b, n);
    Partition gamma = Partition::depth(n);
    Replay in{{"n", std::to_string(n)}, {"g", format_group_element(g)}, {"h", format_group_element(h)}};
    if (!in_H(g, gamma) || !in_H(h, gamma) || !in_H(g + h, gamma) || !in_H(GroupElement(), gamma)) return bad(in);
    return ok();
  });
  s.property("coset signature", [&](Rng& rng) -> Check {
    std::size_t n = uniform_upto(rng, 8);
    GroupElement g = gen_element(rng, b), h = gen_element(rng, b);
    Replay in{{"n", std::to_string(n)}, {"g", format_group_element(g)}, {"h", format_group_element(h)}};
    ParityVector sg = coset_signature(g, n), sh = coset_signature(h, n);
    if (coset_signature(g + h, n) != (sg ^ sh)) return bad(in);
    if (sg.all_zero() != in_H(g, Partition::depth(n))) return bad(in);
    if (sg.total() != parity(g)) return bad(in);
    if (sg.all_zero() && group_distance(g, GroupElement()) > Dyadic::pow2_neg(n)) return bad(in);
    return ok();
  });
  s.property("ultrametric", [&](Rng& rng) -> Check {
    GroupElement g = gen_element(rng, b), h = gen_element(rng, b), k = gen_element(rng, b);
    // Bias toward close elements so small distances occur.
    if (uniform_upto(rng, 1)) h = g + gen_in_H(rng, b, uniform_upto(rng, 6));
    if (uniform_upto(rng, 1)) k = h + gen_in_H(rng, b, uniform_upto(rng, 6));
    Replay in{{"g", format_group_element(g)}, {"h", format_group_element(h)}, {"k", format_group_element(k)}};
    Dyadic gh = group_distance(g, h), gk = group_distance(g, k), kh = group_distance(k, h);
    if (gh != group_distance(h, g) || gh > std::max(gk, kh) || gh.is_zero() != (g == h)) return bad(in);
    return ok();
  });
  s.property("translation", [&](Rng& rng) -> Check {
    GroupElement g = gen_element(rng, b);
    Point y = gen_point(rng, b);
    GroupElement t = translate(g, y);
    if (parity(t) == parity(g) || translate(t, y) != g)
      return bad({{"g", format_group_element(g)}, {"y", fmt(y)}});
    return ok();
  });
  s.property("cylinder partitions refined by depth", [&](Rng& rng) -> Check {
    CylinderFamily members = gen_partition(rng, 6);
    Partition p(members);
    std::size_t d = p.max_depth();
    GroupElement g = gen_in_H(rng, b, d);
    Replay in{{"partition", format_family(members)}, {"g", format_group_element(g)}};
    if (!refines(depth_partition(d), members) || !in_H(g, p)) return bad(in);
    return ok();
  });

  // Finite quotient at small depth.
  std::vector<std::set<ParityVector>> seen(4);
  s.property("signature count bound", [&](Rng& rng) -> Check {
    GroupElement g = gen_element(rng, b, 8);
    for (std::size_t n = 0; n <= 3; ++n) {
      seen[n].insert(coset_signature(g, n));
      if (seen[n].size() > (std::size_t{1} << (std::size_t{1} << n)))
        return bad({{"n", std::to_string(n)}, {"g", format_group_element(g)}});
    }
    return ok();
  });
  std::string counts;
  for (std::size_t n = 0; n <= 3; ++n) counts += (n ? "," : "") + std::to_string(seen[n].size());
  s.note("distinct signatures at depth 0..3: " + counts);
  return s.finish();
}

// ---------------------------------------------------------------------------
// retraction

inline SuiteResult suite_retraction_contract(const SuiteContext& ctx) {
  const GenBounds b = ctx.config.bounds();
  SuiteBuilder s("retraction_contract", ctx);
  s.property("r({x}) = x", [&](Rng& rng) -> Check {
    Point x = gen_point(rng, b);
    if (retract(GroupElement{x}) != x) return bad({{"x", fmt(x)}});
    return ok();
  });
  s.property("phi_ret Mal'tsev and membership", [&](Rng& rng) -> Check {
    Point x = gen_point(rng, b), y = gen_point(rng, b), z = gen_point(rng, b);
    Replay in{{"x", fmt(x)}, {"y", fmt(y)}, {"z", fmt(z)}};
    if (phi_ret(x, y, y) != x || phi_ret(y, y, x) != x) return bad(in);
    Point w = phi_ret(x, y, z);
    if (w != x && w != y && w != z) return bad(in);
    return ok();
  });
  return s.finish();
}

inline SuiteResult suite_retraction_structure(const SuiteContext& ctx) {
  const GenBounds b = ctx.config.bounds();
  SuiteBuilder s("retraction_structure", ctx);
  s.property("upsilon, survivors, uniqueness", [&](Rng& rng) -> Check {
    GroupElement g = gen_clustered(rng, b, 7, true);
    Replay in{{"g", format_group_element(g)}};
    const CylinderFamily ups = upsilon(g);
    const GroupElement rest = survivors(g);
    const Point x = retract(g);
    if (!g.contains(x) || rest.size() != 1 || rest.points().front() != x) return bad(in);
    auto count = [&](const Word& w) {
      return std::count_if(g.begin(), g.end(), [&](const Point& p) { return Cylinder(w).contains(p); });
    };
    for (const auto& c : ups) {
      if (count(c.word()) == 0 || count(c.word()) % 2 != 0) return bad(in);
      for (std::size_t len = 0; len < c.depth(); ++len)
        if (count(c.word().substr(0, len)) % 2 != 1) return bad(in);
    }
    // Prefix-odd oracle up to the separation depth of g.
    std::size_t sep = 0;
    for (const auto& p : g)
      for (const auto& q : g)
        if (auto d = first_diff(p, q)) sep = std::max(sep, *d + 1);
    std::vector<Point> odd;
    for (const auto& p : g) {
      bool all_odd = true;
      for (std::size_t len = 0; len <= sep && all_odd; ++len) all_odd = count(p.prefix(len)) % 2 == 1;
      if (all_odd) odd.push_back(p);
    }
    if (odd.size() != 1 || odd.front() != x) return bad(in);
    return ok();
  });
  s.property("restricted retraction", [&](Rng& rng) -> Check {
    const bool q_side = uniform_upto(rng, 1);
    std::vector<Point> pts;
    std::size_t n = 1 + 2 * uniform_upto(rng, 3);
    for (std::size_t i = 0; i < n; ++i) pts.push_back(q_side ? gen_point_Q(rng, b) : gen_point_P(rng, b));
    GroupElement g(pts);
    if (g.size() % 2 == 0) return ok();
    Point r = retract_restricted(g, q_side ? PointPredicate(in_Q) : PointPredicate(in_P));
    if (!g.contains(r) || (q_side ? !in_Q(r) : !in_P(r))) return bad({{"g", format_group_element(g)}});
    CylinderFamily cells = gen_family(rng, 3, 3);
    if (!cells.empty()) {
      std::vector<Point> inside;
      std::vector<Cylinder> list(cells.begin(), cells.end());
      for (std::size_t i = 0; i < n; ++i) inside.push_back(gen_point_in(rng, list[uniform_upto(rng, list.size() - 1)], b));
      GroupElement h(inside);
      if (h.size() % 2 == 1 && !in_union(cells)(retract_restricted(h, in_union(cells))))
        return bad({{"g", format_group_element(h)}, {"cells", format_family(cells)}});
    }
    return ok();
  });
  return s.finish();
}

inline SuiteResult suite_openness(const SuiteContext& ctx) {
  const GenBounds b = ctx.config.bounds();
  SuiteBuilder s("openness", ctx);
  s.property("witness locality", [&](Rng& rng) -> Check {
    GroupElement g = gen_clustered(rng, b, 7, true);
    std::size_t n = uniform_upto(rng, 3);
    OpennessWitness w = openness_witness(g, n, 2);
    std::vector<Point> probes;
    for (int i = 0; i < 4; ++i) probes.push_back(gen_point_in(rng, w.U, b));
    OpennessWitness w2 = openness_witness(g, n, 2, probes);
    Replay in{{"g", format_group_element(g)}, {"n", std::to_string(n)}, {"U", format_cylinder(w2.U)}};
    if (w2.counterexample) in.emplace_back("y", fmt(*w2.counterexample));
    if (!w2.verified || w.U != w2.U || w2.depth < n) return bad(in);
    // An even shift supported in U keeps r(g) inside U.
    GroupElement e = GroupElement::sum_of({gen_point_in(rng, w.U, b), gen_point_in(rng, w.U, b)});
    if (!w.U.contains(retract(g + e))) {
      in.emplace_back("e", format_group_element(e));
      return bad(in);
    }
    return ok();
  });
  return s.finish();
}

inline SuiteResult suite_oracle(const SuiteContext& ctx) {
  SuiteResult r = oracle_suite_result(exhaustive_oracle(ctx.config.oracle_depth, ctx.config.oracle_max_size));
  return r;
}

// ---------------------------------------------------------------------------
// Mal'tsev identities

inline SuiteResult identity_suite(const SuiteContext& ctx, std::string name, const TernaryOp& op,
                                  std::initializer_list<Identity> ids) {
  SuiteResult r;
  r.name = std::move(name);
  for (Identity id : ids) {
    IdentityReport rep = check_identity(op, id, ctx.config.trials, ctx.config.seed, ctx.config.bounds());
    r.trials += rep.trials;
    if (!rep.passed()) {
      r.status = Status::Fail;
      r.counterexample = {{"property", std::string(identity_name(id))}};
      for (auto& kv : to_replay(*rep.counterexample)) r.counterexample.push_back(std::move(kv));
      break;
    }
  }
  return r;
}

inline SuiteResult suite_phi_h_identities(const SuiteContext& ctx) {
  return identity_suite(ctx, "phi_h_identities", make_phi_h(ctx.scheme), {Identity::Phi1, Identity::Phi2, Identity::Phi3});
}

inline SuiteResult suite_phi_xor_identities(const SuiteContext& ctx) {
  return identity_suite(ctx, "phi_xor_identities", make_phi_xor(), {Identity::Phi1, Identity::Phi2, Identity::Phi3});
}

inline SuiteResult suite_phi_ret_phi1(const SuiteContext& ctx) {
  return identity_suite(ctx, "phi_ret_phi1", make_phi_ret(), {Identity::Phi1});
}

/// The tuple on which phi_ret breaks phi3: phi_ret(y, x, u) = y, hence
/// phi_ret(x, y, y) = x instead of u.
struct RecordedPhi3Failure {
  Point x = parse_point("(0)");
  Point y = parse_point("1(0)");
  Point u = parse_point("01(0)");
};

/// Plain phi3 check of phi_ret. Expected to fail; not in the default set.
inline SuiteResult suite_phi_ret_phi3(const SuiteContext& ctx) {
  const RecordedPhi3Failure rec;
  SuiteResult r;
  r.name = "phi_ret_phi3";
  r.trials = 1;
  if (auto cex = check_identity_at(make_phi_ret(), Identity::Phi3, rec.x, rec.y, rec.x, rec.u)) {
    r.status = Status::Fail;
    r.counterexample = {{"property", "phi3"}};
    for (auto& kv : to_replay(*cex)) r.counterexample.push_back(std::move(kv));
    return r;
  }
  SuiteResult rand = identity_suite(ctx, "phi_ret_phi3", make_phi_ret(), {Identity::Phi3});
  rand.trials += 1;
  return rand;
}

/// phi_ret is Mal'tsev but not homogeneous: the recorded counterexample must
/// reproduce exactly and random search must find violations too.
inline SuiteResult suite_phi_ret_phi3_negative(const SuiteContext& ctx) {
  const RecordedPhi3Failure rec;
  SuiteBuilder s("phi_ret_phi3_negative", ctx);
  s.check("recorded counterexample reproduces", [&]() -> Check {
    Point inner = phi_ret(rec.y, rec.x, rec.u);
    Point outer = phi_ret(rec.x, rec.y, inner);
    if (inner != rec.y || outer != rec.x || outer == rec.u)
      return bad({{"x", fmt(rec.x)}, {"y", fmt(rec.y)}, {"u", fmt(rec.u)}, {"inner", fmt(inner)}, {"lhs", fmt(outer)}});
    return ok();
  });
  std::optional<IdentityReport> found;
  s.check("random search finds a violation", [&]() -> Check {
    found = check_identity(make_phi_ret(), Identity::Phi3, ctx.config.trials, ctx.config.seed, ctx.config.bounds());
    if (found->passed()) return bad({{"trials", std::to_string(found->trials)}});
    return ok();
  });
  if (found && found->counterexample) {
    std::string desc;
    for (const auto& [k, v] : to_replay(*found->counterexample)) desc += k + "=" + v + " ";
    s.note("random violation after " + std::to_string(found->trials) + " trials: " + desc);
  }
  return s.finish();
}

/// phi_h and phi_xor are different operations.
inline SuiteResult suite_separation_h_xor(const SuiteContext& ctx) {
  const GenBounds b = ctx.config.bounds();
  SuiteBuilder s("separation_h_xor", ctx);
  const ThetaScheme& scheme = *ctx.scheme;
  s.check("recorded witness", [&]() -> Check {
    Point x = parse_point("(1)"), y = parse_point("(0)"), z = parse_point("(10)");
    Point h = phi_h(x, y, z, scheme), v = phi_xor(x, y, z);
    if (h == v) return bad({{"x", fmt(x)}, {"y", fmt(y)}, {"z", fmt(z)}, {"phi_h", fmt(h)}, {"phi_xor", fmt(v)}});
    return ok();
  });
  std::optional<std::string> witness;
  s.property("random search finds a witness", [&](Rng& rng) -> Check {
    Point x = gen_point(rng, b), y = gen_point(rng, b), z = gen_point(rng, b);
    Point h = phi_h(x, y, z, scheme), v = phi_xor(x, y, z);
    if (h != v && !witness)
      witness = "x=" + fmt(x) + " y=" + fmt(y) + " z=" + fmt(z) + " phi_h=" + fmt(h) + " phi_xor=" + fmt(v);
    return ok();
  }, 64);
  if (!s.failed() && !witness) s.check("witness found", [] { return bad({{"searched", "64"}}); });
  if (witness) s.note("found " + *witness);
  return s.finish();
}

// ---------------------------------------------------------------------------
// h and Theta laws

inline SuiteResult suite_h_laws(const SuiteContext& ctx) {
  const GenBounds b = ctx.config.bounds();
  const ThetaScheme& sc = *ctx.scheme;
  auto h = [&](const Point& x, const Point& y, const Point& z) { return h_map(x, y, z, sc); };
  SuiteBuilder s("h_laws", ctx);
  s.property("h1 bijection and trace", [&](Rng& rng) -> Check {
    Point x = gen_point(rng, b), y = gen_point(rng, b), z = gen_point(rng, b);
    Replay in{{"x", fmt(x)}, {"y", fmt(y)}, {"z", fmt(z)}};
    if (h(y, x, h(x, y, z)) != z) return bad(in);
    const bool q_side = uniform_upto(rng, 1);
    auto gen = [&] { return q_side ? gen_point_Q(rng, b) : gen_point_P(rng, b); };
    Point a = gen(), c = gen();
    Point inside = gen(), outside = q_side ? gen_point_P(rng, b) : gen_point_Q(rng, b);
    Replay in2{{"x", fmt(a)}, {"y", fmt(c)}, {"z_in", fmt(inside)}, {"z_out", fmt(outside)}};
    if (support_kind(h(a, c, inside)) != support_kind(inside)) return bad(in2);
    if (support_kind(h(a, c, outside)) != support_kind(outside)) return bad(in2);
    return ok();
  });
  s.property("h2 h3 h4", [&](Rng& rng) -> Check {
    Point x = gen_point(rng, b), y = gen_point(rng, b), z = gen_point(rng, b), w = gen_point(rng, b);
    if (uniform_upto(rng, 3) == 0) w = z;
    Replay in{{"x", fmt(x)}, {"y", fmt(y)}, {"z", fmt(z)}, {"w", fmt(w)}};
    if (h(x, x, w) != w || h(x, y, y) != x) return bad(in);
    if (h(x, y, h(y, z, w)) != h(x, z, w)) return bad(in);
    return ok();
  });
  s.property("h5 images of U_k and V_k", [&](Rng& rng) -> Check {
    Point x = gen_point(rng, b), y = gen_point(rng, b);
    std::size_t k = uniform_upto(rng, 12);
    Replay in{{"x", fmt(x)}, {"y", fmt(y)}, {"k", std::to_string(k)}};
    if (sc.is_prefix_transport()) {
      if (cylinder_image(x, y, u_k(y, k), sc) != u_k(x, k) || cylinder_image(x, y, v_k(y, k), sc) != v_k(x, k))
        return bad(in);
      // Pointwise check of cylinder_image on an arbitrary cylinder.
      Cylinder c(random_word(rng, uniform_upto(rng, 8)));
      Point z = gen_point_in(rng, c, b);
      if (!cylinder_image(x, y, c, sc).contains(h(x, y, z))) {
        in.emplace_back("c", format_cylinder(c));
        return bad(in);
      }
    }
    Point zu = gen_point_in(rng, u_k(y, k), b), zv = gen_point_in(rng, v_k(y, k), b);
    if (!u_k(x, k).contains(h(x, y, zu)) || !v_k(x, k).contains(h(x, y, zv))) return bad(in);
    return ok();
  });
  s.property("h6 locality", [&](Rng& rng) -> Check {
    Point x = gen_point(rng, b), y = gen_point(rng, b);
    std::size_t k = uniform_upto(rng, 12);
    Point x2 = gen_point_in(rng, u_k(x, k), b), y2 = gen_point_in(rng, u_k(y, k), b);
    Point z = gen_point_in(rng, v_k(y, k), b);
    if (h(x, y, z) != h(x2, y2, z))
      return bad({{"x", fmt(x)}, {"y", fmt(y)}, {"x'", fmt(x2)}, {"y'", fmt(y2)}, {"z", fmt(z)}});
    return ok();
  });
  if (sc.is_prefix_transport()) {
    s.property("continuity prefix law", [&](Rng& rng) -> Check {
      Point x = gen_point(rng, b), y = gen_point(rng, b);
      std::size_t k = uniform_upto(rng, 12);
      Point z = gen_point_in(rng, v_k(y, k), b);
      Point out = h(x, y, z);
      if (out.prefix(k + 1) != v_k(x, k).word() || drop(out, k + 1) != drop(z, k + 1))
        return bad({{"x", fmt(x)}, {"y", fmt(y)}, {"z", fmt(z)}, {"k", std::to_string(k)}});
      return ok();
    });
  }
  return s.finish();
}

inline SuiteResult suite_theta_laws(const SuiteContext& ctx) {
  const GenBounds b = ctx.config.bounds();
  const ThetaScheme& sc = *ctx.scheme;
  SuiteBuilder s("theta_laws", ctx);
  s.property("theta2 theta3 and trace", [&](Rng& rng) -> Check {
    Cylinder U = gen_proper_cylinder(rng, 8), V = gen_proper_cylinder(rng, 8), W = gen_proper_cylinder(rng, 8);
    Point z = gen_point_in(rng, W, b), zu = gen_point_in(rng, U, b);
    Replay in{{"U", format_cylinder(U)}, {"V", format_cylinder(V)}, {"W", format_cylinder(W)}, {"z", fmt(z)}};
    if (theta(U, U, zu, sc) != zu) return bad(in);
    Point direct = theta(U, W, z, sc);
    if (!U.contains(direct) || theta(U, V, theta(V, W, z, sc), sc) != direct) return bad(in);
    if (theta(W, U, direct, sc) != z) return bad(in);
    if (support_kind(direct) != support_kind(z)) return bad(in);
    Point zq = gen_point_in(rng, W, {b.max_pre, 1});
    zq = Point::constant_tail(zq.prefix(W.depth() + uniform_upto(rng, b.max_pre)));
    if (!in_Q(theta(U, W, zq, sc))) return bad(in);
    return ok();
  });
  s.property("theta1 grid bijection", [&](Rng& rng) -> Check {
    Cylinder U = gen_proper_cylinder(rng, 6), V = gen_proper_cylinder(rng, 6);
    std::size_t r = uniform_upto(rng, 4);
    std::set<Word> images;
    for (std::size_t i = 0; i < (std::size_t{1} << r); ++i) {
      Point z = Point::constant_tail(V.word() + Word::from_index(i, r));
      Point t = theta(U, V, z, sc);
      if (!U.contains(t)) return bad({{"U", format_cylinder(U)}, {"V", format_cylinder(V)}, {"z", fmt(z)}});
      images.insert(t.prefix(U.depth() + r));
    }
    if (images.size() != (std::size_t{1} << r))
      return bad({{"U", format_cylinder(U)}, {"V", format_cylinder(V)}, {"r", std::to_string(r)}});
    return ok();
  });
  return s.finish();
}

// ---------------------------------------------------------------------------
// Homogeneous algebra

inline SuiteResult suite_homogeneous_algebra(const SuiteContext& ctx) {
  const GenBounds b = ctx.config.bounds();
  SuiteBuilder s("homogeneous_algebra", ctx);
  const TernaryOp ops[] = {make_phi_h(ctx.scheme), make_phi_xor()};
  for (const auto& op : ops) {
    for (std::size_t j = 0; j < 3; ++j) {
      Rng base_rng = trial_rng(ctx.config.seed, "homogeneous_algebra/basepoint", j);
      const Point e = gen_point(base_rng, b);
      const std::string tag = op.name + " e=" + fmt(e);
      HomogeneousAlgebra alg = derive_p_q(op, e, 256, ctx.config.seed);
      Rectification rect = rectification(op, e, 256, ctx.config.seed);
      s.check(tag + " derivation verified", [&]() -> Check {
        if (!alg.verified || !rect.verified) return bad({{"op", op.name}, {"e", fmt(e)}});
        return ok();
      });
      s.property(tag + " p/q laws", [&](Rng& rng) -> Check {
        Point x = gen_point(rng, b), y = gen_point(rng, b), z = gen_point(rng, b);
        Replay in{{"op", op.name}, {"e", fmt(e)}, {"x", fmt(x)}, {"y", fmt(y)}};
        if (alg.p(x, x) != e || alg.q(x, e) != x) return bad(in);
        if (alg.q(x, alg.p(x, y)) != y || alg.p(x, alg.q(x, y)) != y) return bad(in);
        const PointPair xy{x, y};
        if (rect.psi_inv(rect.psi(xy)) != xy || rect.psi(rect.psi_inv(xy)) != xy) return bad(in);
        // The Mal'tsev operation rebuilt from the algebra: q(x, p(y, z)).
        auto rebuilt = [&](const Point& a, const Point& c, const Point& d) { return alg.q(a, alg.p(c, d)); };
        if (rebuilt(x, z, z) != x || rebuilt(z, z, x) != x) return bad(in);
        return ok();
      });
    }
  }
  return s.finish();
}

// ---------------------------------------------------------------------------
// Subspace preservation

inline SuiteResult suite_subset_preservation(const SuiteContext& ctx) {
  const GenBounds b = ctx.config.bounds();
  const ThetaScheme& sc = *ctx.scheme;
  SuiteBuilder s("subset_preservation", ctx);
  s.property("Q triples", [&](Rng& rng) -> Check {
    Point x = gen_point_Q(rng, b), y = gen_point_Q(rng, b), z = gen_point_Q(rng, b);
    if (!in_Q(phi_h(x, y, z, sc))) return bad({{"x", fmt(x)}, {"y", fmt(y)}, {"z", fmt(z)}});
    return ok();
  });
  s.property("P triples", [&](Rng& rng) -> Check {
    Point x = gen_point_P(rng, b), y = gen_point_P(rng, b), z = gen_point_P(rng, b);
    if (!in_P(phi_h(x, y, z, sc))) return bad({{"x", fmt(x)}, {"y", fmt(y)}, {"z", fmt(z)}});
    return ok();
  });
  s.property("restricted retraction by membership", [&](Rng& rng) -> Check {
    CylinderFamily cells = gen_family(rng, 3, 4);
    if (cells.empty()) cells.insert(Cylinder());
    std::vector<Cylinder> list(cells.begin(), cells.end());
    std::vector<Point> pts;
    std::size_t n = 1 + 2 * uniform_upto(rng, 2);
    for (std::size_t i = 0; i < n; ++i) pts.push_back(gen_point_in(rng, list[uniform_upto(rng, list.size() - 1)], b));
    GroupElement g(pts);
    if (g.size() % 2 == 0) return ok();
    PointPredicate pred = in_union(cells);
    Point r = retract_restricted(g, pred);
    if (!pred(r) || !g.contains(r)) return bad({{"g", format_group_element(g)}, {"cells", format_family(cells)}});
    return ok();
  });
  return s.finish();
}

// ---------------------------------------------------------------------------
// Translate covers

inline SuiteResult suite_translate_cover(const SuiteContext& ctx) {
  SuiteBuilder s("translate_cover", ctx);
  const ThetaScheme& sc = canonical_scheme();
  auto describe = [](const Point& e, const Cylinder& U, const CoverResult& r) {
    Replay out{{"e", fmt(e)}, {"U", format_cylinder(U)}};
    std::string m;
    for (const auto& y : r.M) m += (m.empty() ? "" : "; ") + fmt(y);
    out.emplace_back("M", "{" + m + "}");
    out.emplace_back("images", format_family(r.images));
    if (r.uncovered) out.emplace_back("uncovered", format_cylinder(*r.uncovered));
    return out;
  };
  s.check("e=(0) U=B(0)", [&]() -> Check {
    Point e = parse_point("(0)");
    Cylinder U("0");
    CoverResult r = cover_search(e, U, sc, 64);
    std::vector<Point> expect{parse_point("(0)"), parse_point("1(0)")};
    if (!r.ok || r.M != expect) return bad(describe(e, U, r));
    return ok();
  });
  s.check("e=(0) U=C", [&]() -> Check {
    Point e = parse_point("(0)");
    CoverResult r = cover_search(e, Cylinder(), sc, 64);
    if (!r.ok || r.M != std::vector<Point>{e}) return bad(describe(e, Cylinder(), r));
    return ok();
  });
  for (const char* es : {"(0)", "(1)"}) {
    for (const auto& U : depth_partition(2)) {
      Point e = parse_point(es);
      s.check("e=" + fmt(e) + " U=B(" + format_cylinder(U) + ")", [&]() -> Check {
        CoverResult r = cover_search(e, U, sc, 64);
        if (!r.ok) return bad(describe(e, U, r));
        return ok();
      });
    }
  }
  return s.finish();
}

// ---------------------------------------------------------------------------
// Registry and runner.

struct SuiteInfo {
  std::string_view name;
  bool in_default;
  SuiteResult (*run)(const SuiteContext&);
};

inline const std::vector<SuiteInfo>& suite_registry() {
  static const std::vector<SuiteInfo> registry = {
      {"points_normal_form", true, suite_points_normal_form},
      {"points_uv_laws", true, suite_points_uv_laws},
      {"base_tree", true, suite_base_tree},
      {"group_laws", true, suite_group_laws},
      {"retraction_contract", true, suite_retraction_contract},
      {"retraction_structure", true, suite_retraction_structure},
      {"openness", true, suite_openness},
      {"oracle", true, suite_oracle},
      {"phi_h_identities", true, suite_phi_h_identities},
      {"phi_xor_identities", true, suite_phi_xor_identities},
      {"phi_ret_phi1", true, suite_phi_ret_phi1},
      {"phi_ret_phi3", false, suite_phi_ret_phi3},
      {"phi_ret_phi3_negative", true, suite_phi_ret_phi3_negative},
      {"separation_h_xor", true, suite_separation_h_xor},
      {"h_laws", true, suite_h_laws},
      {"theta_laws", true, suite_theta_laws},
      {"homogeneous_algebra", true, suite_homogeneous_algebra},
      {"subset_preservation", true, suite_subset_preservation},
      {"translate_cover", true, suite_translate_cover},
  };
  return registry;
}

/// Accepts the registry names plus "Φ" spelled out, e.g. "phi_ret_Φ3".
inline std::string canonical_suite_name(std::string_view name) {
  std::string out(name);
  const std::string phi = "Φ";
  for (std::size_t pos; (pos = out.find(phi)) != std::string::npos;) out.replace(pos, phi.size(), "phi");
  return out;
}

inline Report run_suite(const Config& config) {
  config.validate();
  auto scheme = make_scheme(config.scheme);

  std::vector<const SuiteInfo*> selected;
  if (config.suites.empty()) {
    for (const auto& info : suite_registry())
      if (info.in_default) selected.push_back(&info);
  } else {
    for (const auto& raw : config.suites) {
      const std::string name = canonical_suite_name(raw);
      auto it = std::find_if(suite_registry().begin(), suite_registry().end(),
                             [&](const SuiteInfo& i) { return i.name == name; });
      if (it == suite_registry().end()) throw std::invalid_argument("unknown suite '" + raw + "'");
      selected.push_back(&*it);
    }
  }

  const SuiteContext ctx{config, scheme};
  std::vector<std::future<SuiteResult>> running;
  for (const SuiteInfo* info : selected) {
    running.push_back(std::async(std::launch::async, [info, &ctx] {
      auto t0 = std::chrono::steady_clock::now();
      SuiteResult r = info->run(ctx);
      r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      return r;
    }));
  }
  Report report{config, {}};
  for (auto& f : running) report.suites.push_back(f.get());
  return report;
}

}  // namespace cantor::harness
