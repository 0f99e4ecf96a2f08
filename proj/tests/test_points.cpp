#include <gtest/gtest.h>

#include <set>
#include <string>

#include "bits_oracle.hpp"
#include "cantor/point.hpp"
#include "cantor/random.hpp"

using namespace cantor;

namespace {

Point P(const char* text) { return parse_point(text); }

}  // namespace

TEST(Normalize, ZeroIsAlreadyNormal) {
  Point p = Point::normalize("", "0");
  EXPECT_EQ(p.preperiod().str(), "");
  EXPECT_EQ(p.cycle().str(), "0");
  EXPECT_EQ(p, Point());
}

TEST(Normalize, AbsorbsPreperiodIntoRotatedCycle) {
  Point p = Point::normalize("0", "10");
  EXPECT_EQ(p.preperiod().str(), "");
  EXPECT_EQ(p.cycle().str(), "01");
  EXPECT_EQ(oracle::expand(p, 32), oracle::expand("0", "10", 32));
}

TEST(Normalize, ReducesToPrimitivePeriod) {
  Point p = Point::normalize("01", "1010");
  EXPECT_EQ(p.preperiod().str(), "01");
  EXPECT_EQ(p.cycle().str(), "10");
  EXPECT_EQ(oracle::expand(p, 32), oracle::expand("01", "1010", 32));
}

TEST(Normalize, EmptyCycleRejected) {
  EXPECT_THROW(Point::normalize("01", ""), std::invalid_argument);
  EXPECT_THROW(Word("012"), std::invalid_argument);
}

// Every raw (pre, cycle) with short words: same bits as the raw form, and the
// normal form is canonical (equal sequences give equal normal forms).
TEST(Normalize, ExhaustiveAgainstExpansion) {
  std::vector<std::pair<std::string, Point>> all;
  for (std::size_t lp = 0; lp <= 4; ++lp)
    for (std::size_t lc = 1; lc <= 4; ++lc)
      for (std::size_t a = 0; a < (1u << lp); ++a)
        for (std::size_t b = 0; b < (1u << lc); ++b) {
          std::string pre = Word::from_index(a, lp).str(), cyc = Word::from_index(b, lc).str();
          Point p = Point::normalize(pre, cyc);
          std::string raw = oracle::expand(pre, cyc, 40);
          ASSERT_EQ(oracle::expand(p, 40), raw) << pre << "(" << cyc << ")";
          ASSERT_EQ(Point::normalize(p.preperiod(), p.cycle()), p);
          all.emplace_back(raw, p);
        }
  for (const auto& [ra, pa] : all)
    for (const auto& [rb, pb] : all) ASSERT_EQ(ra == rb, pa == pb) << pa << " vs " << pb;
}

TEST(BitAt, Examples) {
  EXPECT_EQ(bit_at(P("(0)"), 5), 0);
  EXPECT_EQ(bit_at(Point::normalize("01", "10"), 0), 0);
  EXPECT_EQ(bit_at(Point::normalize("01", "10"), 4), 1);
}

TEST(LexCmp, Examples) {
  EXPECT_EQ(lex_cmp(P("(0)"), P("1(0)")), std::strong_ordering::less);
  EXPECT_EQ(lex_cmp(P("(01)"), P("0(10)")), std::strong_ordering::equal);
  EXPECT_EQ(lex_cmp(P("11(0)"), P("1(0)")), std::strong_ordering::greater);
}

TEST(FirstDiff, Examples) {
  EXPECT_FALSE(first_diff(P("(0)"), P("(0)")).has_value());
  EXPECT_EQ(first_diff(P("(0)"), P("1(0)")), 0u);
  EXPECT_EQ(first_diff(P("01(0)"), P("00(0)")), 1u);
}

TEST(LexCmp, RandomAgainstExpansion) {
  for (std::uint64_t i = 0; i < 3000; ++i) {
    Rng rng = trial_rng(7, "lex", i);
    Point a = gen_point(rng, 6, 5), b = gen_point(rng, 6, 5);
    if (i % 5 == 0) b = prepend(a.prefix(uniform_upto(rng, 8)), gen_point(rng, 3, 3));
    int want = oracle::compare(a, b);
    int got = lex_cmp(a, b) < 0 ? -1 : lex_cmp(a, b) == 0 ? 0 : 1;
    ASSERT_EQ(got, want) << a << " " << b;
    long fd = oracle::first_diff(a, b);
    auto d = first_diff(a, b);
    ASSERT_EQ(d ? static_cast<long>(*d) : -1, fd) << a << " " << b;
  }
}

TEST(Support, Examples) {
  EXPECT_EQ(support_kind(P("(0)")), SupportKind::Finite);
  EXPECT_EQ(support_kind(P("01(0)")), SupportKind::Finite);
  EXPECT_EQ(support_kind(P("(10)")), SupportKind::Infinite);
  EXPECT_TRUE(in_Q(P("1(0)")));
  EXPECT_TRUE(in_P(P("0(1)")));
}

TEST(UkVk, Examples) {
  EXPECT_EQ(u_k(P("(0)"), 1), Cylinder("00"));
  EXPECT_EQ(v_k(P("(0)"), 1), Cylinder("01"));
  EXPECT_EQ(v_k(P("1(0)"), 0), Cylinder("0"));
}

TEST(UkVk, PartitionComplementOfPoint) {
  // The V_k(x), k < n, together with U_{n-1}(x) tile C; check on all depth-6 words.
  Point x = P("0110(01)");
  const std::size_t n = 6;
  for (std::size_t i = 0; i < 64; ++i) {
    Point z = Point::constant_tail(Word::from_index(i, n), 1);
    int hits = u_k(x, n - 1).contains(z);
    for (std::size_t k = 0; k < n; ++k) hits += v_k(x, k).contains(z);
    ASSERT_EQ(hits, 1) << z;
  }
}

TEST(InCylinder, Examples) {
  EXPECT_TRUE(in_cylinder(P("(0)"), Cylinder("00")));
  EXPECT_FALSE(in_cylinder(P("1(0)"), Cylinder("0")));
  EXPECT_TRUE(in_cylinder(P("(10)"), Cylinder("101")));
  EXPECT_TRUE(in_cylinder(P("(10)"), Cylinder()));
}

TEST(Operations, PrependDropXor) {
  for (std::uint64_t i = 0; i < 2000; ++i) {
    Rng rng = trial_rng(11, "ops", i);
    Point a = gen_point(rng, 7, 6), b = gen_point(rng, 7, 6);
    Word c = random_word(rng, uniform_upto(rng, 6));
    ASSERT_EQ(oracle::expand(prepend(c, a), 60), c.str() + oracle::expand(a, 60 - c.size()));
    std::size_t k = uniform_upto(rng, 12);
    ASSERT_EQ(oracle::expand(drop(a, k), 40), oracle::expand(a, 40 + k).substr(k));
    ASSERT_EQ(drop(prepend(c, a), c.size()), a);
    std::size_t n = oracle::horizon(a, b) + 10;
    ASSERT_EQ(oracle::expand(xor_points(a, b), n), oracle::xor_bits(oracle::expand(a, n), oracle::expand(b, n)));
  }
}

TEST(Text, RoundTripAndNormalizeOnIngest) {
  EXPECT_EQ(format_point(P("01(10)")), "01(10)");
  EXPECT_EQ(format_point(P("0(10)")), "(01)");
  EXPECT_EQ(format_point(P("10(0)")), "1(0)");
  EXPECT_EQ(format_point(P("(1111)")), "(1)");
  EXPECT_EQ(format_cylinder(Cylinder()), "ε");
  EXPECT_EQ(parse_cylinder("ε"), Cylinder());
  EXPECT_EQ(parse_cylinder(""), Cylinder());
  EXPECT_EQ(parse_cylinder("010"), Cylinder("010"));
}

TEST(Text, ParseErrorsCarryPositions) {
  auto pos = [](const char* s) -> long {
    try {
      parse_point(s);
    } catch (const ParseError& e) {
      return static_cast<long>(e.position());
    }
    return -1;
  };
  EXPECT_EQ(pos("()"), 1);
  EXPECT_EQ(pos("01"), 2);
  EXPECT_EQ(pos("0(2)"), 2);
  EXPECT_EQ(pos("0(1"), 3);
  EXPECT_EQ(pos("0(1)x"), 4);
  EXPECT_EQ(pos("x(1)"), 0);
  EXPECT_THROW(parse_cylinder("01a"), ParseError);
}

TEST(Random, Determinism) {
  Rng a = trial_rng(42, "s", 3), b = trial_rng(42, "s", 3), c = trial_rng(42, "t", 3);
  Point pa = gen_point(a, 16, 8), pb = gen_point(b, 16, 8);
  EXPECT_EQ(pa, pb);
  std::set<Point> seen;
  for (int i = 0; i < 200; ++i) {
    Point p = gen_point(c, 0, 1);
    EXPECT_TRUE(p == P("(0)") || p == P("(1)"));
    seen.insert(p);
  }
  EXPECT_EQ(seen.size(), 2u);
}

TEST(Random, BoundsSurviveNormalization) {
  Rng rng = trial_rng(1, "bounds", 0);
  for (int i = 0; i < 5000; ++i) {
    Point p = gen_point(rng, 16, 8);
    ASSERT_LE(p.preperiod().size(), 16u);
    ASSERT_LE(p.cycle().size(), 8u);
  }
  EXPECT_THROW(gen_point(rng, 3, 0), std::invalid_argument);
}

TEST(Random, UniformUptoCoversRange) {
  Rng rng = trial_rng(9, "u", 0);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 7000; ++i) ++hist[uniform_upto(rng, 7)];
  for (int h : hist) EXPECT_GT(h, 800);
}

TEST(Random, GeneratorsRespectTargets) {
  GenBounds b{8, 5};
  for (std::uint64_t i = 0; i < 1000; ++i) {
    Rng rng = trial_rng(3, "gen", i);
    ASSERT_TRUE(in_Q(gen_point_Q(rng, b)));
    ASSERT_TRUE(in_P(gen_point_P(rng, b)));
    Cylinder c(random_word(rng, uniform_upto(rng, 6)));
    ASSERT_TRUE(c.contains(gen_point_in(rng, c, b)));
  }
}
