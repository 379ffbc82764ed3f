#include <gtest/gtest.h>

#include "skewmix/bits.hpp"
#include "skewmix/errors.hpp"
#include "skewmix/exact.hpp"
#include "skewmix/parallel.hpp"
#include "skewmix/rng.hpp"

namespace skewmix {
namespace {

TEST(SplitMix64, ReferenceOutputs) {
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(rng.next(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(rng.next(), 0x06C45D188009454FULL);
}

TEST(SplitMix64, UniformStaysInRange) {
  SplitMix64 rng(3);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(rng.uniform(7), 7u);
  EXPECT_EQ(rng.uniform(1), 0u);
}

TEST(SplitMix64, DerivedStreamsDiffer) {
  EXPECT_NE(SplitMix64::derive(1, 0).next(), SplitMix64::derive(1, 1).next());
  EXPECT_EQ(SplitMix64::derive(1, 5).next(), SplitMix64::derive(1, 5).next());
}

TEST(BitVec, Basics) {
  BitVec v(130);
  EXPECT_TRUE(v.none());
  v.set(129, true);
  v.flip(3);
  EXPECT_EQ(v.count(), 2u);
  EXPECT_EQ(v.find_first(), 3u);
  BitVec w(130);
  w.set(3, true);
  EXPECT_EQ((v ^ w).find_first(), 129u);
  EXPECT_EQ(BitVec(10).find_first(), 10u);
}

TEST(Decimal, Rendering) {
  EXPECT_EQ(to_decimal(Rational(1, 4)), "0.25");
  EXPECT_EQ(to_decimal(Rational(5, 48)), "0.104166666667");
  EXPECT_EQ(to_decimal(Rational(1, 24)), "0.0416666666667");
  EXPECT_EQ(to_decimal(Rational(0)), "0");
  EXPECT_EQ(to_decimal(Rational(-3, 2)), "-1.5");
  EXPECT_EQ(to_decimal(Rational(2, 3), 3), "0.667");
  EXPECT_EQ(to_decimal(Rational(1, 8), 2), "0.12");
  EXPECT_EQ(to_decimal(Rational(3, 8), 2), "0.38");
  EXPECT_EQ(to_decimal(Rational(1, 100000000)), "1e-08");
  EXPECT_THROW(to_decimal(Rational(1), 0), InvalidArgument);
}

TEST(Decimal, Fractions) {
  EXPECT_EQ(to_fraction(Rational(2, 8)), "1/4");
  EXPECT_EQ(to_fraction(Rational(3)), "3/1");
  EXPECT_EQ(to_fraction(pow_rational(Rational(1, 3), 3)), "1/27");
}

TEST(ParallelFor, CoversEveryTaskAndRethrows) {
  std::vector<int> hit(100, 0);
  parallel_for(hit.size(), 4, [&](std::size_t t) { hit[t] += 1; });
  for (int h : hit) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t t) {
                 if (t == 7) throw InvariantViolation("boom");
               }),
               InvariantViolation);
}

}  // namespace
}  // namespace skewmix
