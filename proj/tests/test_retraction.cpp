#include <gtest/gtest.h>

#include <algorithm>

#include "cantor/random.hpp"
#include "cantor/retraction.hpp"

using namespace cantor;

namespace {

Point P(const char* text) { return parse_point(text); }
GroupElement G(const char* text) { return parse_group_element(text); }

CylinderFamily F(std::initializer_list<const char*> words) {
  CylinderFamily f;
  for (const char* w : words) f.insert(Cylinder(w));
  return f;
}

// Definition-level Upsilon: enumerate every cylinder up to the separation
// depth of g, keep the nonzero even ones, then the maximal ones.
CylinderFamily upsilon_by_definition(const GroupElement& g) {
  std::size_t sep = 0;
  for (const auto& a : g)
    for (const auto& b : g)
      if (auto d = first_diff(a, b)) sep = std::max(sep, *d + 1);
  std::vector<Word> even;
  for (const auto& p : g)
    for (std::size_t len = 0; len <= sep; ++len) {
      Word w = p.prefix(len);
      std::size_t c = std::count_if(g.begin(), g.end(), [&](const Point& q) { return q.prefix(len) == w; });
      if (c > 0 && c % 2 == 0) even.push_back(w);
    }
  CylinderFamily out;
  for (const auto& a : even)
    if (std::none_of(even.begin(), even.end(), [&](const Word& b) { return b != a && b.is_prefix_of(a); }))
      out.insert(Cylinder(a));
  return out;
}

GroupElement random_odd(Rng& rng) {
  for (;;) {
    std::vector<Point> pts;
    std::size_t n = 1 + 2 * uniform_upto(rng, 3);
    for (std::size_t i = 0; i < n; ++i) pts.push_back(prepend(random_word(rng, uniform_upto(rng, 4)), gen_point(rng, 4, 3)));
    GroupElement g(pts);
    if (parity(g) == Parity::Odd) return g;
  }
}

}  // namespace

TEST(Upsilon, Examples) {
  EXPECT_TRUE(upsilon(G("{(0)}")).empty());
  EXPECT_EQ(upsilon(G("{(0); 01(0); 011(0)}")), F({"01"}));
  EXPECT_EQ(upsilon(G("{(0); 001(0); 01(0); 1(0); 11(0)}")), F({"00", "1"}));
}

TEST(Survivors, Examples) {
  EXPECT_EQ(survivors(G("{(0)}")), G("{(0)}"));
  EXPECT_EQ(survivors(G("{(0); 01(0); 011(0)}")), G("{(0)}"));
  EXPECT_EQ(survivors(G("{(0); 001(0); 01(0); 1(0); 11(0)}")), G("{01(0)}"));
}

TEST(Retract, Examples) {
  EXPECT_EQ(retract(G("{(0); 1(0); 11(0)}")), P("(0)"));
  EXPECT_EQ(retract(G("{(0); 01(0); 1(0)}")), P("1(0)"));
  for (const char* x : {"(0)", "(1)", "0110(101)"}) EXPECT_EQ(retract(GroupElement{P(x)}), P(x));
}

TEST(Retract, EvenInputRejected) {
  EXPECT_THROW(retract(GroupElement()), ParityError);
  EXPECT_THROW(retract(G("{(0); 1(0)}")), ParityError);
  EXPECT_THROW(upsilon(G("{(0); 1(0)}")), ParityError);
  EXPECT_THROW(survivors(GroupElement()), ParityError);
  EXPECT_THROW(openness_witness(GroupElement(), 1), ParityError);
}

TEST(RetractRestricted, Examples) {
  PointPredicate q = [](const Point& p) { return in_Q(p); };
  PointPredicate pp = [](const Point& p) { return in_P(p); };
  EXPECT_EQ(retract_restricted(G("{(0)}"), q), P("(0)"));
  EXPECT_EQ(retract_restricted(G("{(0); 01(0); 011(0)}"), q), P("(0)"));
  GroupElement g = G("{(10); (01); 1(10)}");
  Point r = retract_restricted(g, pp);
  EXPECT_TRUE(g.contains(r));
  EXPECT_EQ(support_kind(r), SupportKind::Infinite);
}

TEST(RetractRestricted, ErrorsAreDistinct) {
  PointPredicate q = [](const Point& p) { return in_Q(p); };
  EXPECT_THROW(retract_restricted(G("{(0); (10); 1(0)}"), q), PredicateError);
  EXPECT_THROW(retract_restricted(G("{(0); 1(0)}"), q), ParityError);
  // Parity is checked first.
  EXPECT_THROW(retract_restricted(G("{(10); (01)}"), q), ParityError);
}

TEST(OpennessWitness, Examples) {
  OpennessWitness a = openness_witness(G("{(0)}"), 1);
  EXPECT_EQ(a.U, Cylinder("0"));
  EXPECT_TRUE(a.verified);
  EXPECT_EQ(retract(G("{(0)}") + G("{(0); 01(0)}")), P("01(0)"));

  GroupElement g = G("{(0); 01(0); 011(0)}");
  OpennessWitness b = openness_witness(g, 2);
  EXPECT_EQ(b.U, Cylinder("00"));
  EXPECT_TRUE(b.verified);
  EXPECT_EQ(retract(g + G("{(0); 001(0)}")), P("001(0)"));
  EXPECT_EQ(upsilon(g + G("{(0); 001(0)}")), F({"01"}));

  GroupElement h = G("{(0); 1(0); 11(0)}");
  OpennessWitness c = openness_witness(h, 1);
  EXPECT_EQ(c.U, Cylinder("0"));
  for (std::size_t i = 0; i < 4; ++i) {
    Point y = Point::constant_tail(Cylinder("0").word() + Word::from_index(i, 2));
    EXPECT_EQ(retract(h + GroupElement::sum_of({c.x, y})), y) << y;
  }
}

TEST(OpennessWitness, DepthGrowsPastUpsilonWords) {
  // x = (0), Upsilon = {B(01)}: a depth-1 cylinder at x would meet B(01).
  OpennessWitness w = openness_witness(G("{(0); 01(0); 011(0)}"), 0);
  EXPECT_EQ(w.depth, 2u);
  EXPECT_TRUE(w.verified);
  EXPECT_GT(w.checked, 0u);
}

TEST(Retract, RandomAgainstDefinition) {
  for (std::uint64_t i = 0; i < 3000; ++i) {
    Rng rng = trial_rng(31, "retract", i);
    GroupElement g = random_odd(rng);
    CylinderFamily ups = upsilon_by_definition(g);
    ASSERT_EQ(upsilon(g), ups) << g;
    GroupElement rest = survivors(g);
    ASSERT_EQ(rest.size(), 1u) << g;
    Point r = retract(g);
    ASSERT_EQ(r, rest.points().front());
    ASSERT_TRUE(g.contains(r));
    for (const auto& c : ups) {
      std::size_t cnt = std::count_if(g.begin(), g.end(), [&](const Point& p) { return c.contains(p); });
      ASSERT_EQ(cnt % 2, 0u);
      ASSERT_GT(cnt, 0u);
    }
    // Every prefix cylinder of r meets g oddly.
    for (std::size_t len = 0; len < 24; ++len) {
      Cylinder c(r.prefix(len));
      ASSERT_EQ(std::count_if(g.begin(), g.end(), [&](const Point& p) { return c.contains(p); }) % 2, 1);
    }
    OpennessWitness w = openness_witness(g, uniform_upto(rng, 3), 2);
    ASSERT_TRUE(w.verified) << g << " y=" << *w.counterexample;
  }
}

TEST(PhiRet, Examples) {
  EXPECT_EQ(phi_ret(P("(0)"), P("10(0)"), P("11(0)")), P("(0)"));
  EXPECT_EQ(phi_ret(P("(0)"), P("1(0)"), P("01(0)")), P("1(0)"));
  Point x = P("01(1)"), y = P("(10)");
  EXPECT_EQ(phi_ret(x, y, y), x);
  EXPECT_EQ(phi_ret(y, y, x), x);
  EXPECT_EQ(phi_ret(x, x, x), x);
}

TEST(PhiRet, RecordedPhi3Failure) {
  Point x = P("(0)"), y = P("1(0)"), u = P("01(0)");
  Point inner = phi_ret(y, x, u);
  EXPECT_EQ(inner, P("1(0)"));
  EXPECT_EQ(phi_ret(x, y, inner), x);
  EXPECT_NE(phi_ret(x, y, inner), u);
}

TEST(CylinderSamples, Shape) {
  auto s = cylinder_samples(Cylinder("10"), 2);
  EXPECT_EQ(s.size(), 12u);
  for (const auto& p : s) EXPECT_TRUE(Cylinder("10").contains(p));
}
