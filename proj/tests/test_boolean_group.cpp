#include <gtest/gtest.h>

#include <map>
#include <set>

#include "cantor/boolean_group.hpp"
#include "cantor/random.hpp"

using namespace cantor;

namespace {

Point P(const char* text) { return parse_point(text); }

GroupElement G(const char* text) { return parse_group_element(text); }

GroupElement random_element(Rng& rng, std::size_t max_size) {
  std::vector<Point> pts;
  std::size_t n = uniform_upto(rng, max_size);
  for (std::size_t i = 0; i < n; ++i) {
    // Shared prefixes make the parity structure nontrivial.
    Word head = random_word(rng, uniform_upto(rng, 3));
    pts.push_back(prepend(head, gen_point(rng, 5, 3)));
  }
  return GroupElement(pts);
}

// Reference distance from counts at every depth: largest n with all depth-n
// cells even, reported as 2^-n; 1 for odd differences.
std::string distance_oracle(const GroupElement& g, const GroupElement& h) {
  std::vector<Point> diff;
  for (const auto& p : g)
    if (!h.contains(p)) diff.push_back(p);
  for (const auto& p : h)
    if (!g.contains(p)) diff.push_back(p);
  if (diff.empty()) return "0";
  if (diff.size() % 2) return "1";
  std::size_t best = 0;
  for (std::size_t n = 1; n < 64; ++n) {
    std::map<std::string, int> c;
    for (const auto& p : diff) ++c[p.prefix(n).str()];
    bool even = true;
    for (const auto& kv : c) even = even && kv.second % 2 == 0;
    if (!even) break;
    best = n;
  }
  return best == 0 ? "1" : "1/" + std::to_string(std::uint64_t{1} << best);
}

}  // namespace

TEST(Add, Examples) {
  Point a = P("(0)"), b = P("1(0)"), c = P("11(0)");
  EXPECT_EQ(add(GroupElement{a, b}, GroupElement{b, c}), (GroupElement{a, c}));
  GroupElement g{a, b, c};
  EXPECT_TRUE((g + g).empty());
  EXPECT_EQ(add(GroupElement{a}, GroupElement{b}), (GroupElement{a, b}));
}

TEST(Add, SumOfCancelsPairs) {
  Point a = P("(0)"), b = P("1(0)");
  EXPECT_EQ(GroupElement::sum_of({a, b, a}), GroupElement{b});
  EXPECT_EQ(GroupElement::sum_of({a, a, a}), GroupElement{a});
  EXPECT_EQ((GroupElement{a, a}), GroupElement{a});
}

TEST(Parity, Examples) {
  EXPECT_EQ(parity(GroupElement()), Parity::Even);
  EXPECT_EQ(parity(G("{(0)}")), Parity::Odd);
  EXPECT_EQ(parity(G("{(0); 1(0); 11(0)}")), Parity::Odd);
}

TEST(InH, Examples) {
  GroupElement g = G("{(0); 01(0)}");
  EXPECT_TRUE(in_H(g, Partition::depth(1)));
  EXPECT_FALSE(in_H(g, Partition::depth(2)));
  EXPECT_TRUE(in_H(GroupElement(), Partition::depth(5)));
  EXPECT_TRUE(in_H(GroupElement(), Partition(CylinderFamily{Cylinder("0"), Cylinder("10"), Cylinder("11")})));
}

TEST(CosetSignature, Examples) {
  auto bits = [](const ParityVector& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += v[i] ? '1' : '0';
    return s;
  };
  EXPECT_EQ(bits(coset_signature(G("{(0)}"), 1)), "10");
  EXPECT_EQ(bits(coset_signature(G("{(0); 01(0)}"), 1)), "00");
  EXPECT_EQ(bits(coset_signature(G("{(0); 1(0)}"), 1)), "11");
  EXPECT_EQ(bits(coset_signature(G("{(0); 1(0)}"), 0)), "0");
  EXPECT_THROW(coset_signature(G("{(0)}"), kMaxPartitionDepth + 1), std::out_of_range);
}

TEST(GroupDistance, Examples) {
  GroupElement g = G("{(0); 1(0)}");
  EXPECT_EQ(group_distance(g, g), Dyadic::zero());
  EXPECT_EQ(group_distance(G("{(0)}"), GroupElement()).str(), "1");
  EXPECT_EQ(group_distance(G("{(0); 01(0)}"), GroupElement()).str(), "1/2");
  EXPECT_EQ(group_distance(G("{(0); 001(0)}"), GroupElement()).str(), "1/4");
  EXPECT_EQ(group_distance(G("{(0); 1(0)}"), GroupElement()).str(), "1");
}

TEST(Translate, Examples) {
  EXPECT_TRUE(translate(G("{(0)}"), P("(0)")).empty());
  EXPECT_EQ(translate(GroupElement(), P("(0)")), G("{(0)}"));
  EXPECT_EQ(translate(G("{(0); 1(0); 11(0)}"), P("1(0)")), G("{(0); 11(0)}"));
}

TEST(SubsetOf, Examples) {
  PointPredicate q = [](const Point& p) { return in_Q(p); };
  EXPECT_TRUE(subset_of(G("{(0); 01(0)}"), q));
  EXPECT_FALSE(subset_of(G("{(10)}"), q));
  EXPECT_TRUE(subset_of(GroupElement(), [](const Point&) { return false; }));
  PointPredicate u = in_union({Cylinder("00"), Cylinder("1")});
  EXPECT_TRUE(u(P("1(0)")));
  EXPECT_FALSE(u(P("01(0)")));
}

TEST(GroupLaws, RandomInstances) {
  for (std::uint64_t i = 0; i < 3000; ++i) {
    Rng rng = trial_rng(21, "laws", i);
    GroupElement a = random_element(rng, 6), b = random_element(rng, 6), c = random_element(rng, 6);
    ASSERT_EQ(a + b, b + a);
    ASSERT_EQ((a + b) + c, a + (b + c));
    ASSERT_EQ(a + GroupElement(), a);
    ASSERT_TRUE((a + a).empty());
    ASSERT_EQ(parity(a + b), parity(a) ^ parity(b));
    for (std::size_t n = 0; n <= 4; ++n) {
      ASSERT_EQ(coset_signature(a + b, n), coset_signature(a, n) ^ coset_signature(b, n));
      ASSERT_EQ(coset_signature(a, n).total(), parity(a));
      ASSERT_EQ(coset_signature(a, n).all_zero(), in_H(a, Partition::depth(n)));
      if (in_H(a, Partition::depth(n)) && in_H(b, Partition::depth(n))) {
        ASSERT_TRUE(in_H(a + b, Partition::depth(n)));
      }
    }
    Dyadic ab = group_distance(a, b), bc = group_distance(b, c), ac = group_distance(a, c);
    ASSERT_LE(ac, std::max(ab, bc));
    ASSERT_EQ(ab, group_distance(b, a));
    ASSERT_EQ(ab.str(), distance_oracle(a, b)) << a << " " << b;
    ASSERT_EQ(group_distance(a + c, b + c), ab);
  }
}

// At depth n the quotient B / H(gamma_n) is (Z/2)^(2^n); grid elements at
// depth n+1 hit every signature.
TEST(CosetSignature, ExhaustiveCountsOnGrid) {
  for (std::size_t n = 0; n <= 3; ++n) {
    const std::size_t pts = std::size_t{1} << (n + 1);
    std::set<ParityVector> sigs;
    for (std::size_t mask = 0; mask < (std::size_t{1} << pts); ++mask) {
      std::vector<Point> chosen;
      for (std::size_t i = 0; i < pts; ++i)
        if (mask >> i & 1) chosen.push_back(Point::constant_tail(Word::from_index(i, n + 1)));
      sigs.insert(coset_signature(GroupElement(chosen), n));
    }
    EXPECT_EQ(sigs.size(), std::size_t{1} << (std::size_t{1} << n)) << "n=" << n;
  }
}

TEST(Text, GroupElementRoundTripAndErrors) {
  GroupElement g = G("  { 1(0) ;(0);  0(10)} ");
  EXPECT_EQ(format_group_element(g), "{(0); (01); 1(0)}");
  EXPECT_EQ(G(format_group_element(g).c_str()), g);
  EXPECT_TRUE(G("{}").empty());
  EXPECT_TRUE(G("{  }").empty());
  EXPECT_THROW(G("(0)"), ParseError);
  EXPECT_THROW(G("{(0); (0)}"), ParseError);
  EXPECT_THROW(G("{(0);}"), ParseError);
  try {
    G("{(0); 1(2)}");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 8u);
  }
}

TEST(DyadicOrder, Comparisons) {
  EXPECT_LT(Dyadic::zero(), Dyadic::pow2_neg(40));
  EXPECT_LT(Dyadic::pow2_neg(3), Dyadic::pow2_neg(2));
  EXPECT_EQ(Dyadic::one(), Dyadic::pow2_neg(0));
  EXPECT_EQ(Dyadic::pow2_neg(70).str(), "2^-70");
}
