#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "skewmix/errors.hpp"
#include "skewmix/rankone.hpp"

namespace skewmix {
namespace {

ConstructionPtr odometer() { return make_construction(*find_preset("odometer3")); }
ConstructionPtr chacon() { return make_construction(*find_preset("chacon")); }

TEST(ParseConstruction, Odometer) {
  const ConstructionSpec spec = parse_construction("name=odometer3\ncuts=3\nspacers=0,0,0\nh1=3");
  EXPECT_EQ(spec, *find_preset("odometer3"));
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(heights(spec, n), static_cast<std::uint64_t>(std::pow(3, n)));
}

TEST(ParseConstruction, Chacon) {
  const ConstructionSpec spec = parse_construction("# Chacon\nname=chacon\ncuts=3\nspacers=0,1,0\nh1=1\n");
  EXPECT_EQ(spec, *find_preset("chacon"));
}

TEST(ParseConstruction, DefaultsAndErrors) {
  EXPECT_EQ(parse_construction("name=odometer3\ncuts=3\nspacers=0,0,0").h1, 3u);
  EXPECT_EQ(parse_construction("name=other\ncuts=3\nspacers=0,1,0").h1, 1u);
  EXPECT_THROW(parse_construction("name=x\ncuts=4\nspacers=0,0,0"), UnsupportedConstruction);
  EXPECT_THROW(parse_construction("name=x\ncuts=3\nspacers=0,-1,0"), ParseError);
  EXPECT_THROW(parse_construction("name=x\ncuts=3\nspacers=0,0"), ParseError);
  EXPECT_THROW(parse_construction("name=x\ncuts=3\nspacers=0,0,0\ncolour=red"), ParseError);
  EXPECT_THROW(parse_construction("name=x\nname=y\ncuts=3\nspacers=0,0,0"), ParseError);
  EXPECT_THROW(parse_construction("cuts=3\nspacers=0,0,0"), ParseError);
  EXPECT_FALSE(find_preset("nope").has_value());
}

TEST(Heights, Examples) {
  EXPECT_EQ(heights(*find_preset("odometer3"), 4), 81u);
  const ConstructionSpec c = *find_preset("chacon");
  EXPECT_EQ(heights(c, 1), 1u);
  EXPECT_EQ(heights(c, 2), 4u);
  EXPECT_EQ(heights(c, 3), 13u);
  EXPECT_EQ(heights(c, 4), 40u);
  EXPECT_THROW(heights(c, 100), ArithmeticOverflow);
}

TEST(Step, Examples) {
  EXPECT_EQ(step(make_point(odometer(), 2, 4)).level, 5u);
  const LevelPoint up = step(make_point(odometer(), 2, 8, Extension::kExtendBase));
  EXPECT_EQ(up.tower, 3);
  EXPECT_EQ(up.level, 9u);
  EXPECT_THROW(step(make_point(chacon(), 2, 3, Extension::kError)), TopOfTower);
}

TEST(Locate, Examples) {
  const ClimbPosition a = locate(make_point(odometer(), 2, 5), 1);
  EXPECT_EQ(a.kind, ClimbPosition::Kind::kColumn);
  EXPECT_EQ(a.column, 1);
  EXPECT_EQ(a.offset, 2u);

  const ClimbPosition s = locate(make_point(chacon(), 2, 2), 1);
  EXPECT_TRUE(s.is_spacer());
  EXPECT_EQ(s.spacer_step, 2);

  const ClimbPosition c = locate(make_point(chacon(), 2, 3), 1);
  EXPECT_EQ(c.column, 2);
  EXPECT_EQ(c.offset, 0u);
}

TEST(IsTop, Examples) {
  EXPECT_TRUE(is_top(make_point(odometer(), 3, 8), 2));
  EXPECT_FALSE(is_top(make_point(odometer(), 3, 8), 3));
  EXPECT_TRUE(is_top(make_point(chacon(), 2, 1), 1));
  EXPECT_THROW(is_top(make_point(chacon(), 2, 2), 1), NotInTower);
}

TEST(NOfX, Examples) {
  for (std::uint64_t level = 0; level < 27; ++level) {
    const LevelPoint p = make_point(odometer(), 3, level);
    const ClimbPosition pos = locate(p, 1);
    if (pos.offset < 2) EXPECT_EQ(n_of_x(p), 1) << level;
  }
  EXPECT_EQ(n_of_x(make_point(odometer(), 3, 5)), 2);
  EXPECT_EQ(n_of_x(make_point(chacon(), 2, 2)), kSpacer);
}

TEST(NOfX, ChaconCountsConstructionSteps) {
  // Tower 1 of Chacon is a single level, so the first climb is tower 2's.
  const ConstructionPtr c = chacon();
  EXPECT_EQ(n_of_x(make_point(c, 3, 0)), 1);
  EXPECT_EQ(n_of_x(make_point(c, 3, 3)), 2);
  EXPECT_EQ(n_of_x(make_point(c, 3, 2)), kSpacer);
}

TEST(RankOneProperty, OdometerMatchesBaseThreeCounter) {
  const ConstructionPtr c = odometer();
  for (int towers = 1; towers <= 8; ++towers) {
    for (std::uint64_t level = 0; level + 1 < c->height(towers); ++level) {
      const oracle::Odometer digits = oracle::Odometer::at(towers, level);
      const LevelPoint p = make_point(c, towers, level);
      ASSERT_EQ(n_of_x(p), digits.n_of_x()) << "tower " << towers << " level " << level;
      oracle::Odometer next = digits;
      next.add_one();
      ASSERT_EQ(step(p).level, next.level());
    }
  }
}

TEST(RankOneProperty, StepIsBijectionBelowTop) {
  for (const ConstructionPtr& c : {odometer(), chacon()}) {
    for (int n = 1; n <= 8; ++n) {
      std::set<std::uint64_t> images;
      for (std::uint64_t level = 0; level + 1 < c->height(n); ++level) {
        const LevelPoint q = step(make_point(c, n, level));
        ASSERT_EQ(q.tower, n);
        images.insert(q.level);
      }
      EXPECT_EQ(images.size(), c->height(n) - 1);
      if (!images.empty()) {
        EXPECT_EQ(*images.begin(), 1u);
        EXPECT_EQ(*images.rbegin(), c->height(n) - 1);
      }
    }
  }
}

TEST(RankOneProperty, EmbedLocateRoundTrip) {
  for (const ConstructionPtr& c : {odometer(), chacon()}) {
    for (int m = 1; m <= 7; ++m) {
      for (int column = 0; column < 3; ++column) {
        for (std::uint64_t offset = 0; offset < c->height(m); ++offset) {
          const LevelPoint q = embed(make_point(c, m, offset), column);
          ASSERT_EQ(q.tower, m + 1);
          const ClimbPosition pos = locate(q, m);
          ASSERT_FALSE(pos.is_spacer());
          ASSERT_EQ(pos.column, column);
          ASSERT_EQ(pos.offset, offset);
        }
      }
    }
  }
}

TEST(RankOneProperty, ChaconSpacerCensus) {
  const ConstructionPtr c = chacon();
  for (int n = 1; n <= 8; ++n) {
    std::uint64_t spacers = 0;
    for (std::uint64_t level = 0; level < c->height(n); ++level) spacers += in_spacer(make_point(c, n, level));
    std::uint64_t expected = 0;
    for (int j = 2; j <= n; ++j) expected += static_cast<std::uint64_t>(std::pow(3, n - j));
    EXPECT_EQ(spacers, expected) << "tower " << n;
  }
}

TEST(Settle, Policies) {
  const LevelPoint top = make_point(odometer(), 2, 8, Extension::kExtendBase);
  EXPECT_EQ(settle(top).tower, 3);
  EXPECT_EQ(settle(top).level, 8u);
  LevelPoint error = top;
  error.extension = Extension::kError;
  EXPECT_THROW(settle(error), TopOfTower);

  std::set<std::uint64_t> seen;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    const LevelPoint r = settle(make_point(odometer(), 2, 8, Extension::kExtendRandom, seed));
    // Column 2 keeps the point on the top, so settling continues upwards.
    EXPECT_FALSE(r.at_top());
    seen.insert(r.level);
    EXPECT_EQ(settle(make_point(odometer(), 2, 8, Extension::kExtendRandom, seed)).level, r.level);
  }
  EXPECT_TRUE(seen.contains(8));
  EXPECT_TRUE(seen.contains(17));
}

TEST(SamplePoint, UniformOnTowerOne) {
  SplitMix64 rng(42);
  constexpr int kDraws = 100000;
  std::uint64_t counts[3] = {0, 0, 0};
  for (int i = 0; i < kDraws; ++i) ++counts[sample_point(odometer(), 1, rng).level];
  const double sigma = std::sqrt(kDraws * (1.0 / 3) * (2.0 / 3));
  for (auto count : counts) EXPECT_NEAR(static_cast<double>(count), kDraws / 3.0, 3 * sigma);
}

TEST(SamplePoint, SeededAndChaconRange) {
  SplitMix64 a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_point(odometer(), 5, a).level, sample_point(odometer(), 5, b).level);
  SplitMix64 rng(9);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 200; ++i) seen.insert(sample_point(chacon(), 2, rng).level);
  EXPECT_EQ(seen, (std::set<std::uint64_t>{0, 1, 2, 3}));
}

TEST(MakePoint, RejectsBadInput) {
  EXPECT_THROW(make_point(odometer(), 0, 0), InvalidArgument);
  EXPECT_THROW(make_point(odometer(), 2, 9), InvalidArgument);
  EXPECT_THROW(locate(make_point(odometer(), 2, 0), 2), InvalidArgument);
}

}  // namespace
}  // namespace skewmix
