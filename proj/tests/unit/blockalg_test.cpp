#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "skewmix/blockalg.hpp"
#include "skewmix/errors.hpp"
#include "skewmix/rng.hpp"

namespace skewmix {
namespace {

BitVec random_bits(std::size_t size, SplitMix64& rng) {
  BitVec bits(size);
  for (std::size_t i = 0; i < size; ++i) bits.set(i, rng.next() & 1u);
  return bits;
}

SignBlock block(const char* literal) { return SignBlock::parse(literal); }

TEST(SignLiteral, RoundTrip) {
  EXPECT_EQ(to_sign_string(parse_sign_string("+-")), "+-");
  EXPECT_EQ(SignBlock::parse("+--+").sign(1), -1);
  EXPECT_EQ(SignBlock::parse("+--+").sign(3), +1);
  EXPECT_THROW(SignBlock::parse("+-+"), ParseError);
  EXPECT_THROW(SignBlock::parse("+x"), ParseError);
  EXPECT_THROW(bit_of_sign(0), InvalidArgument);
}

TEST(Concat, Examples) {
  EXPECT_EQ(concat(block("+"), block("-")).to_string(), "+-");
  EXPECT_EQ(concat(block("+-"), block("--")).to_string(), "+---");
  EXPECT_EQ(concat(block("-"), block("-")).to_string(), "--");
  EXPECT_THROW(concat(block("+"), block("+-")), InvalidArgument);
}

TEST(TermwiseProduct, Examples) {
  EXPECT_EQ(termwise_product(block("+-"), block("+-")).to_string(), "++");
  EXPECT_EQ(termwise_product(block("++"), block("-+")).to_string(), "-+");
  EXPECT_EQ(termwise_product(block("--"), block("+-")).to_string(), "-+");
}

TEST(Split, Examples) {
  auto [a, b] = split(block("+-"));
  EXPECT_EQ(a.to_string(), "+");
  EXPECT_EQ(b.to_string(), "-");
  auto [c, d] = split(block("+---"));
  EXPECT_EQ(c.to_string(), "+-");
  EXPECT_EQ(d.to_string(), "--");
  EXPECT_THROW(split(block("+")), InvalidArgument);
}

TEST(Split, InvertsConcat) {
  SplitMix64 rng(7);
  for (int n = 0; n <= 9; ++n) {
    const SignBlock a(n, random_bits(std::size_t{1} << n, rng));
    const SignBlock b(n, random_bits(std::size_t{1} << n, rng));
    const auto [x, y] = split(concat(a, b));
    EXPECT_EQ(x, a);
    EXPECT_EQ(y, b);
  }
}

TEST(Tau, Examples) {
  EXPECT_EQ(tau(1, YPrefix::from_block(block("-+"))).to_string(), "+-");
  EXPECT_EQ(tau(1, YPrefix::from_block(block("++"))).to_string(), "++");
  EXPECT_EQ(tau(2, YPrefix::from_block(block("+--+-+-+"))).to_string(), "-+---+-+");
  EXPECT_THROW(tau(3, YPrefix(2)), HorizonTooSmall);
  EXPECT_THROW(tau(0, YPrefix(2)), InvalidArgument);
}

TEST(Tau, MatchesDefinition) {
  SplitMix64 rng(11);
  for (int n = 1; n <= 8; ++n) {
    for (int i = 0; i < 20; ++i) {
      const YPrefix y(n + 1, random_bits(std::size_t{2} << n, rng));
      EXPECT_EQ(tau(n, y).to_string(), oracle::render(oracle::tau(n, oracle::parse(y.to_string()))));
    }
  }
}

TEST(TauProperty, OrderThreeExhaustive) {
  for (int n = 1; n <= 4; ++n) {
    for (std::uint64_t w = 0; w < (std::uint64_t{1} << (1u << n)); ++w) {
      const YPrefix y = YPrefix::from_block(SignBlock::from_word(n, w));
      ASSERT_EQ(tau(n, tau(n, tau(n, y))), y) << "n=" << n << " w=" << w;
    }
  }
}

TEST(TauProperty, OrderThreeRandom) {
  SplitMix64 rng(1);
  for (int n = 1; n <= 10; ++n) {
    for (int i = 0; i < 1000; ++i) {
      const YPrefix y(n + 1, random_bits(std::size_t{2} << n, rng));
      ASSERT_EQ(tau(n, tau(n, tau(n, y))), y) << "n=" << n;
    }
  }
}

TEST(TauProperty, BijectionOnFirstBlock) {
  for (int n = 1; n <= 4; ++n) {
    std::set<std::string> images;
    const std::uint64_t count = std::uint64_t{1} << (1u << n);
    for (std::uint64_t w = 0; w < count; ++w) {
      images.insert(tau(n, YPrefix::from_block(SignBlock::from_word(n, w))).to_string());
    }
    EXPECT_EQ(images.size(), count) << "n=" << n;
  }
}

TEST(TauProperty, LinearOverGf2) {
  SplitMix64 rng(2);
  for (int n = 1; n <= 8; ++n) {
    for (int i = 0; i < 100; ++i) {
      const YPrefix y(n, random_bits(std::size_t{1} << n, rng));
      const YPrefix z(n, random_bits(std::size_t{1} << n, rng));
      EXPECT_EQ(tau(n, YPrefix(n, y.bits() ^ z.bits())).bits(), tau(n, y).bits() ^ tau(n, z).bits());
    }
  }
}

TEST(TauProperty, LeavesTailAlone) {
  SplitMix64 rng(3);
  for (int n = 1; n <= 6; ++n) {
    const YPrefix y(n + 2, random_bits(std::size_t{4} << n, rng));
    const YPrefix t = tau(n, y);
    for (std::size_t i = std::size_t{1} << n; i < y.size(); ++i) ASSERT_EQ(t.sign(i), y.sign(i));
  }
}

TEST(Gamma, Examples) {
  EXPECT_EQ(gamma(1, block("+-")).to_string(), "+--");
  EXPECT_EQ(gamma(1, block("++")).to_string(), "+++");
  EXPECT_EQ(gamma(2, block("+++-")).to_string(), "++++--+--");
  EXPECT_THROW(gamma(2, block("+-")), InvalidArgument);
}

TEST(Gamma, BaseCaseAllFourBlocks) {
  for (std::uint64_t w = 0; w < 4; ++w) {
    const SignBlock b = SignBlock::from_word(1, w);
    const ColourWord c = gamma(1, b);
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(c.sign(0), b.sign(0));
    EXPECT_EQ(c.sign(1), b.sign(1));
    EXPECT_EQ(c.sign(2), b.sign(0) * b.sign(1));
  }
}

TEST(Gamma, MatchesRecursiveDefinition) {
  for (int n = 1; n <= 3; ++n) {
    for (std::uint64_t w = 0; w < (std::uint64_t{1} << (1u << n)); ++w) {
      const SignBlock b = SignBlock::from_word(n, w);
      ASSERT_EQ(gamma(n, b).to_string(), oracle::render(oracle::gamma(oracle::parse(b.to_string()))));
    }
  }
  SplitMix64 rng(5);
  for (int n = 4; n <= 9; ++n) {
    const SignBlock b(n, random_bits(std::size_t{1} << n, rng));
    EXPECT_EQ(gamma(n, b).to_string(), oracle::render(oracle::gamma(oracle::parse(b.to_string()))));
  }
}

TEST(GammaProperty, ProductLemmaExhaustive) {
  for (int n = 1; n <= 3; ++n) {
    const std::uint64_t count = std::uint64_t{1} << (1u << n);
    std::vector<ColourWord> table;
    for (std::uint64_t w = 0; w < count; ++w) table.push_back(gamma(n, SignBlock::from_word(n, w)));
    for (std::uint64_t a = 0; a < count; ++a) {
      for (std::uint64_t b = 0; b < count; ++b) {
        ASSERT_EQ(table[a ^ b], termwise_product(table[a], table[b]));
      }
    }
  }
}

TEST(GammaProperty, ProductLemmaRandom) {
  SplitMix64 rng(6);
  for (int n = 4; n <= 8; ++n) {
    for (int i = 0; i < 2000; ++i) {
      const SignBlock a(n, random_bits(std::size_t{1} << n, rng));
      const SignBlock b(n, random_bits(std::size_t{1} << n, rng));
      ASSERT_EQ(gamma(n, termwise_product(a, b)), termwise_product(gamma(n, a), gamma(n, b))) << "n=" << n;
    }
  }
}

TEST(GammaProperty, Recursion) {
  SplitMix64 rng(8);
  for (int n = 1; n <= 7; ++n) {
    for (int i = 0; i < 50; ++i) {
      const SignBlock w1(n, random_bits(std::size_t{1} << n, rng));
      const SignBlock w2(n, random_bits(std::size_t{1} << n, rng));
      EXPECT_EQ(gamma(n + 1, concat(w1, w2)).to_string(),
                gamma(n, w1).to_string() + gamma(n, w2).to_string() + gamma(n, termwise_product(w1, w2)).to_string());
    }
  }
}

TEST(YPrefix, BlockAndResize) {
  const YPrefix y = YPrefix::from_block(block("+--+-+++"));
  EXPECT_EQ(y.block(1, 1).to_string(), "-+");
  EXPECT_EQ(y.block(2, 1).to_string(), "-+++");
  EXPECT_EQ(y.resized(4).to_string(), "+--+-+++++++++++");
  EXPECT_EQ(y.resized(1).to_string(), "+-");
  EXPECT_THROW(y.block(3, 1), HorizonTooSmall);
}

}  // namespace
}  // namespace skewmix
