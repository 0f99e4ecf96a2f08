#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cantor/base_tree.hpp"
#include "cantor/point.hpp"
#include "cantor/random.hpp"
#include "cantor/retraction.hpp"

namespace cantor {

// ---------------------------------------------------------------------------
// Ternary operations and the identities
//   (phi1) F(x,y,y) = F(y,y,x) = x
//   (phi2) F(x,y,F(y,z,u)) = F(x,z,u)
//   (phi3) F(x,y,F(y,x,u)) = u
// A Mal'tsev operation satisfies phi1, a homogeneous one phi1 and phi3, a
// strong one phi1 and phi2 (phi3 follows by putting z = x).

enum class OpClass { Maltsev, Homogeneous, Strong };

using TernaryFn = std::function<Point(const Point&, const Point&, const Point&)>;

struct TernaryOp {
  std::string name;
  OpClass declared = OpClass::Maltsev;  // a claim to be checked, not a guarantee
  TernaryFn eval;

  Point operator()(const Point& x, const Point& y, const Point& z) const { return eval(x, y, z); }
};

// ---------------------------------------------------------------------------
// Transport schemes. A scheme fixes homeomorphisms f_U: C -> U for every
// proper basic cylinder U and transports V onto U by f_U o f_V^{-1}. Any such
// family satisfies Theta[U,U] = id and Theta[U,V] o Theta[V,W] = Theta[U,W].

class ThetaScheme {
 public:
  virtual ~ThetaScheme() = default;

  virtual std::string_view name() const noexcept = 0;
  /// f_U(x).
  virtual Point embed(const Cylinder& U, const Point& x) const = 0;
  /// f_U^{-1}(z) for z in U.
  virtual Point unembed(const Cylinder& U, const Point& z) const = 0;
  /// Whether Theta maps every subcylinder of V onto a subcylinder of U by
  /// replacing the leading word only.
  virtual bool is_prefix_transport() const noexcept { return false; }

  Point transport(const Cylinder& U, const Cylinder& V, const Point& z) const { return embed(U, unembed(V, z)); }
};

/// f_{B(c)}(x) = c x. Concatenation keeps supports finite or infinite, so the
/// transports restrict to bijections of Q and of P.
class CanonicalScheme final : public ThetaScheme {
 public:
  std::string_view name() const noexcept override { return "canonical"; }
  Point embed(const Cylinder& U, const Point& x) const override { return prepend(U.word(), x); }
  Point unembed(const Cylinder& U, const Point& z) const override { return drop(z, U.depth()); }
  bool is_prefix_transport() const noexcept override { return true; }
};

/// f_{B(c)}(x) = c (x xor c000...). Still preserves Q and P, but transports are
/// no longer prefix replacements.
class MaskedScheme final : public ThetaScheme {
 public:
  std::string_view name() const noexcept override { return "masked"; }
  Point embed(const Cylinder& U, const Point& x) const override {
    return prepend(U.word(), xor_points(x, Point::constant_tail(U.word())));
  }
  Point unembed(const Cylinder& U, const Point& z) const override {
    return xor_points(drop(z, U.depth()), Point::constant_tail(U.word()));
  }
};

inline std::shared_ptr<const ThetaScheme> make_scheme(std::string_view name) {
  if (name == "canonical") return std::make_shared<CanonicalScheme>();
  if (name == "masked") return std::make_shared<MaskedScheme>();
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

inline const ThetaScheme& canonical_scheme() {
  static const CanonicalScheme scheme;
  return scheme;
}

inline Point canonical_f(const Cylinder& U, const Point& x) { return prepend(U.word(), x); }

/// Theta[U,V](z) for z in V.
inline Point theta(const Cylinder& U, const Cylinder& V, const Point& z, const ThetaScheme& scheme) {
  if (!V.contains(z))
    throw std::invalid_argument("theta: " + format_point(z) + " is not in B(" + format_cylinder(V) + ")");
  return scheme.transport(U, V, z);
}

/// h_{x,y}: C -> C with h(y) = x and h = Theta[V_k(x), V_k(y)] on V_k(y).
///
/// The sets V_k(y) together with {y} partition C, which is why the second
/// case is taken over z in V_k(y) rather than V_k(x).
inline Point h_map(const Point& x, const Point& y, const Point& z, const ThetaScheme& scheme) {
  auto k = first_diff(z, y);
  if (!k) return x;
  return scheme.transport(v_k(x, *k), v_k(y, *k), z);
}

inline Point phi_h(const Point& x, const Point& y, const Point& z, const ThetaScheme& scheme) {
  return h_map(x, y, z, scheme);
}

/// x y^{-1} z in the Boolean group (C, xor), where y^{-1} = y.
inline Point phi_xor(const Point& x, const Point& y, const Point& z) { return xor_points(xor_points(x, y), z); }

inline TernaryOp make_phi_h(std::shared_ptr<const ThetaScheme> scheme) {
  std::string name = "phi_h[" + std::string(scheme->name()) + "]";
  return {std::move(name), OpClass::Strong,
          [scheme = std::move(scheme)](const Point& x, const Point& y, const Point& z) {
            return h_map(x, y, z, *scheme);
          }};
}

inline TernaryOp make_phi_xor() {
  return {"phi_xor", OpClass::Strong, [](const Point& x, const Point& y, const Point& z) { return phi_xor(x, y, z); }};
}

inline TernaryOp make_phi_ret() {
  return {"phi_ret", OpClass::Maltsev, [](const Point& x, const Point& y, const Point& z) { return phi_ret(x, y, z); }};
}

// ---------------------------------------------------------------------------
// Identity checking.

enum class Identity { Phi1, Phi2, Phi3 };

inline std::string_view identity_name(Identity id) noexcept {
  switch (id) {
    case Identity::Phi1: return "phi1";
    case Identity::Phi2: return "phi2";
    case Identity::Phi3: return "phi3";
  }
  return "?";
}

struct Counterexample {
  std::vector<std::pair<std::string, Point>> inputs;
  Point lhs;
  Point rhs;
};

struct IdentityReport {
  std::string op;
  Identity identity = Identity::Phi1;
  std::size_t trials = 0;
  std::optional<Counterexample> counterexample;

  bool passed() const noexcept { return !counterexample; }
};

/// Evaluates one identity at (x, y, z, u); unused variables are ignored.
inline std::optional<Counterexample> check_identity_at(const TernaryOp& op, Identity which, const Point& x,
                                                       const Point& y, const Point& z, const Point& u) {
  switch (which) {
    case Identity::Phi1: {
      Point a = op(x, y, y);
      if (a != x) return Counterexample{{{"x", x}, {"y", y}}, a, x};
      Point b = op(y, y, x);
      if (b != x) return Counterexample{{{"x", x}, {"y", y}}, b, x};
      return std::nullopt;
    }
    case Identity::Phi2: {
      Point lhs = op(x, y, op(y, z, u));
      Point rhs = op(x, z, u);
      if (lhs != rhs) return Counterexample{{{"x", x}, {"y", y}, {"z", z}, {"u", u}}, lhs, rhs};
      return std::nullopt;
    }
    case Identity::Phi3: {
      Point lhs = op(x, y, op(y, x, u));
      if (lhs != u) return Counterexample{{{"x", x}, {"y", y}, {"u", u}}, lhs, u};
      return std::nullopt;
    }
  }
  return std::nullopt;
}

/// Random search for a violation. Trial i draws its inputs from its own
/// stream, so the first counterexample does not depend on evaluation order.
inline IdentityReport check_identity(const TernaryOp& op, Identity which, std::size_t trials, std::uint64_t seed,
                                     const GenBounds& bounds = {}) {
  IdentityReport report{op.name, which, 0, std::nullopt};
  const std::string stream = op.name + "/" + std::string(identity_name(which));
  for (std::size_t i = 0; i < trials; ++i) {
    Rng rng = trial_rng(seed, stream, i);
    Point x = gen_point(rng, bounds), y = gen_point(rng, bounds), z = gen_point(rng, bounds),
          u = gen_point(rng, bounds);
    ++report.trials;
    if (auto cex = check_identity_at(op, which, x, y, z, u)) {
      report.counterexample = std::move(cex);
      break;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Homogeneous algebra p(x,y) = F(e,x,y), q(x,y) = F(x,e,y) and the
// rectification Psi(x,y) = (x, p(x,y)) with inverse (x, q(x,y)).

using BinaryFn = std::function<Point(const Point&, const Point&)>;
using PointPair = std::pair<Point, Point>;
using PairMap = std::function<PointPair(const PointPair&)>;

struct HomogeneousAlgebra {
  Point e;
  BinaryFn p;
  BinaryFn q;
  bool verified = false;                  // phi1 and phi3 spot checks passed
  std::optional<IdentityReport> failure;  // first failed spot check
};

inline HomogeneousAlgebra derive_p_q(const TernaryOp& op, const Point& e, std::size_t spot_trials = 256,
                                     std::uint64_t seed = 0) {
  HomogeneousAlgebra alg{e, [op, e](const Point& x, const Point& y) { return op(e, x, y); },
                         [op, e](const Point& x, const Point& y) { return op(x, e, y); }, false, std::nullopt};
  alg.verified = true;
  for (Identity id : {Identity::Phi1, Identity::Phi3}) {
    IdentityReport r = check_identity(op, id, spot_trials, seed);
    if (!r.passed()) {
      alg.verified = false;
      alg.failure = std::move(r);
      break;
    }
  }
  return alg;
}

struct Rectification {
  PairMap psi;
  PairMap psi_inv;
  bool verified = false;
};

inline Rectification rectification(const TernaryOp& op, const Point& e, std::size_t spot_trials = 256,
                                   std::uint64_t seed = 0) {
  HomogeneousAlgebra alg = derive_p_q(op, e, spot_trials, seed);
  return {[p = alg.p](const PointPair& xy) { return PointPair{xy.first, p(xy.first, xy.second)}; },
          [q = alg.q](const PointPair& xy) { return PointPair{xy.first, q(xy.first, xy.second)}; }, alg.verified};
}

// ---------------------------------------------------------------------------
// Images of cylinders and translate covers.

/// h_{x,y}(B(c)) for a prefix-transport scheme.
///
/// If y is in B(c) then B(c) = U_{|c|-1}(y), which goes to B(x|len c).
/// Otherwise B(c) lies in V_k(y) for the first k where c and y differ, and the
/// leading k+1 bits are replaced by x_0 .. x_{k-1} (1 - x_k).
inline Cylinder cylinder_image(const Point& x, const Point& y, const Cylinder& c, const ThetaScheme& scheme) {
  if (!scheme.is_prefix_transport())
    throw std::invalid_argument("cylinder_image: scheme '" + std::string(scheme.name()) +
                                "' does not map cylinders to cylinders");
  const Word& w = c.word();
  std::size_t k = 0;
  while (k < w.size() && w[k] == y.bit_at(k)) ++k;
  if (k == w.size()) return Cylinder(x.prefix(w.size()));
  Word image = x.prefix(k + 1).flipped(k);
  image += w.substr(k + 1);
  return Cylinder(std::move(image));
}

struct CoverResult {
  bool ok = false;
  std::vector<Point> M;
  CylinderFamily images;              // F(e, y, U) for y in M
  std::optional<Cylinder> uncovered;  // set when ok is false
  std::size_t candidates_examined = 0;
};

inline constexpr std::size_t kMaxCoverDepth = 20;

/// Looks for a finite M with C = union over y in M of F(e, y, U), F = phi_h.
///
/// Candidates are y = w (0) for the depth-|U| words w in lexicographic order,
/// at most `budget` of them. Greedy set cover over the depth-|U| grid, ties
/// going to the earliest candidate. The result is re-verified by an exact
/// trie coverage check and a failure carries an uncovered cylinder.
inline CoverResult cover_search(const Point& e, const Cylinder& U, const ThetaScheme& scheme, std::size_t budget) {
  if (!scheme.is_prefix_transport())
    throw std::invalid_argument("cover_search: scheme '" + std::string(scheme.name()) + "' is not supported");
  const std::size_t depth = U.depth();
  if (depth > kMaxCoverDepth) throw std::out_of_range("cover_search: cylinder too deep");

  struct Candidate {
    Point y;
    Cylinder image;
  };
  std::vector<Candidate> candidates;
  const std::size_t grid = std::size_t{1} << depth;
  for (std::size_t i = 0; i < grid && candidates.size() < budget; ++i) {
    Point y = Point::constant_tail(Word::from_index(i, depth));
    candidates.push_back({y, cylinder_image(e, y, U, scheme)});
  }

  CoverResult result;
  result.candidates_examined = candidates.size();
  // Cells of the depth-|U| grid not yet under a chosen image.
  std::vector<bool> covered(grid, false);
  auto gain = [&](const Cylinder& img) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < grid; ++i)
      if (!covered[i] && img.contains(Cylinder(Word::from_index(i, depth)))) ++n;
    return n;
  };
  std::vector<bool> used(candidates.size(), false);
  for (;;) {
    std::size_t best = candidates.size(), best_gain = 0;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      if (used[j]) continue;
      std::size_t g = gain(candidates[j].image);
      if (g > best_gain) best = j, best_gain = g;
    }
    if (best == candidates.size()) break;
    used[best] = true;
    result.M.push_back(candidates[best].y);
    result.images.insert(candidates[best].image);
    for (std::size_t i = 0; i < grid; ++i)
      if (candidates[best].image.contains(Cylinder(Word::from_index(i, depth)))) covered[i] = true;
  }

  result.uncovered = uncovered_witness(result.images);
  result.ok = !result.uncovered;
  return result;
}

}  // namespace cantor
