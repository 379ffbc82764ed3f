#include "skewmix/blockalg.hpp"

#include <algorithm>
#include <bit>
#include <vector>

#include "skewmix/errors.hpp"

namespace skewmix {

namespace {

std::size_t pow2(int n) { return std::size_t{1} << n; }

int log2_exact(std::size_t length) {
  if (length == 0 || !std::has_single_bit(length)) return -1;
  return std::countr_zero(length);
}

void check_order(int order, int max_order, const char* what) {
  if (order < 0 || order > max_order) {
    throw InvalidArgument(std::string(what) + ": order " + std::to_string(order) + " out of range");
  }
}

}  // namespace

std::uint64_t pow3(int n) {
  std::uint64_t r = 1;
  for (int i = 0; i < n; ++i) r *= 3;
  return r;
}

bool bit_of_sign(int s) {
  if (s == 1) return false;
  if (s == -1) return true;
  throw InvalidArgument("sign must be +1 or -1, got " + std::to_string(s));
}

std::string to_sign_string(const BitVec& bits) {
  std::string out(bits.size(), '+');
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits.get(i)) out[i] = '-';
  }
  return out;
}

BitVec parse_sign_string(std::string_view literal) {
  BitVec bits(literal.size());
  for (std::size_t i = 0; i < literal.size(); ++i) {
    switch (literal[i]) {
      case '+':
        break;
      case '-':
        bits.set(i, true);
        break;
      default:
        throw ParseError("sign literal: unexpected character '" + std::string(1, literal[i]) +
                         "' at position " + std::to_string(i));
    }
  }
  return bits;
}

// ---------------------------------------------------------------------------

SignBlock::SignBlock(int order, BitVec bits) : order_(order), bits_(std::move(bits)) {
  check_order(order, kMaxHorizon, "SignBlock");
  if (bits_.size() != pow2(order)) throw InvalidArgument("SignBlock: length is not 2^order");
}

SignBlock::SignBlock(int order) : SignBlock(order, BitVec(order >= 0 && order <= kMaxHorizon ? pow2(order) : 0)) {}

SignBlock SignBlock::from_signs(std::span<const int> signs) {
  const int order = log2_exact(signs.size());
  if (order < 0) throw InvalidArgument("SignBlock: length must be a power of two");
  BitVec bits(signs.size());
  for (std::size_t i = 0; i < signs.size(); ++i) bits.set(i, bit_of_sign(signs[i]));
  return SignBlock(order, std::move(bits));
}

SignBlock SignBlock::from_word(int order, std::uint64_t packed) {
  check_order(order, 6, "SignBlock::from_word");
  BitVec bits(pow2(order));
  const std::size_t n = pow2(order);
  bits.words()[0] = n == 64 ? packed : (packed & ((std::uint64_t{1} << n) - 1));
  return SignBlock(order, std::move(bits));
}

SignBlock SignBlock::parse(std::string_view literal) {
  const int order = log2_exact(literal.size());
  if (order < 0) {
    throw ParseError("block literal length " + std::to_string(literal.size()) + " is not a power of two");
  }
  return SignBlock(order, parse_sign_string(literal));
}

ColourWord::ColourWord(int order, BitVec bits) : order_(order), bits_(std::move(bits)) {
  check_order(order, kMaxGammaOrder, "ColourWord");
  if (bits_.size() != pow3(order)) throw InvalidArgument("ColourWord: length is not 3^order");
}

YPrefix::YPrefix(int horizon, BitVec bits) : horizon_(horizon), bits_(std::move(bits)) {
  check_order(horizon, kMaxHorizon, "YPrefix");
  if (bits_.size() != pow2(horizon)) throw InvalidArgument("YPrefix: length is not 2^horizon");
}

YPrefix::YPrefix(int horizon)
    : YPrefix(horizon, BitVec(horizon >= 0 && horizon <= kMaxHorizon ? pow2(horizon) : 0)) {}

YPrefix YPrefix::from_block(const SignBlock& block) { return YPrefix(block.order(), block.bits()); }

YPrefix YPrefix::resized(int horizon) const {
  YPrefix out(horizon);
  auto dst = out.bits_.words();
  auto src = bits_.words();
  const std::size_t n = std::min(dst.size(), src.size());
  std::copy_n(src.begin(), n, dst.begin());
  if (out.size() < 64 && !dst.empty()) dst[0] &= (std::uint64_t{1} << out.size()) - 1;
  return out;
}

SignBlock YPrefix::block(int n, std::size_t index) const {
  if (n < 0 || n > horizon_ || (index + 1) * pow2(n) > size()) {
    throw HorizonTooSmall("YPrefix::block: block outside the horizon");
  }
  BitVec bits(pow2(n));
  const std::size_t base = index * pow2(n);
  for (std::size_t i = 0; i < bits.size(); ++i) bits.set(i, bits_.get(base + i));
  return SignBlock(n, std::move(bits));
}

// ---------------------------------------------------------------------------

SignBlock concat(const SignBlock& first, const SignBlock& second) {
  if (first.order() != second.order()) throw InvalidArgument("concat: order mismatch");
  const std::size_t half = first.size();
  BitVec bits(2 * half);
  for (std::size_t i = 0; i < half; ++i) {
    bits.set(i, first.bits().get(i));
    bits.set(half + i, second.bits().get(i));
  }
  return SignBlock(first.order() + 1, std::move(bits));
}

SignBlock termwise_product(const SignBlock& lhs, const SignBlock& rhs) {
  if (lhs.order() != rhs.order()) throw InvalidArgument("termwise_product: order mismatch");
  return SignBlock(lhs.order(), lhs.bits() ^ rhs.bits());
}

ColourWord termwise_product(const ColourWord& lhs, const ColourWord& rhs) {
  if (lhs.order() != rhs.order()) throw InvalidArgument("termwise_product: order mismatch");
  return ColourWord(lhs.order(), lhs.bits() ^ rhs.bits());
}

std::pair<SignBlock, SignBlock> split(const SignBlock& block) {
  if (block.order() < 1) throw InvalidArgument("split: a 0-block cannot be halved");
  const std::size_t half = block.size() / 2;
  BitVec first(half), second(half);
  for (std::size_t i = 0; i < half; ++i) {
    first.set(i, block.bits().get(i));
    second.set(i, block.bits().get(half + i));
  }
  return {SignBlock(block.order() - 1, std::move(first)), SignBlock(block.order() - 1, std::move(second))};
}

void tau_in_place(int n, std::span<std::uint64_t> words) {
  const std::size_t half = pow2(n - 1);
  if (half >= 64) {
    const std::size_t hw = half / 64;
    for (std::size_t i = 0; i < hw; ++i) {
      const std::uint64_t a = words[i];
      const std::uint64_t b = words[i + hw];
      words[i] = b;
      words[i + hw] = a ^ b;
    }
    return;
  }
  const std::uint64_t half_mask = (std::uint64_t{1} << half) - 1;
  const std::uint64_t block_mask = half == 32 ? ~std::uint64_t{0} : (std::uint64_t{1} << (2 * half)) - 1;
  const std::uint64_t w = words[0];
  const std::uint64_t a = w & half_mask;
  const std::uint64_t b = (w >> half) & half_mask;
  words[0] = (w & ~block_mask) | b | ((a ^ b) << half);
}

void tau_in_place(int n, BitVec& bits) {
  if (n < 1) throw InvalidArgument("tau: n must be >= 1");
  if (n > kMaxHorizon || pow2(n) > bits.size()) {
    throw HorizonTooSmall("tau_" + std::to_string(n) + " needs " + std::to_string(n) + " levels of horizon");
  }
  tau_in_place(n, bits.words());
}

YPrefix tau(int n, const YPrefix& y) {
  if (n < 1) throw InvalidArgument("tau: n must be >= 1");
  if (n > y.horizon()) {
    throw HorizonTooSmall("tau_" + std::to_string(n) + " applied to a prefix of horizon " +
                          std::to_string(y.horizon()));
  }
  YPrefix out = y;
  tau_in_place(n, out.mutable_bits());
  return out;
}

ColourWord gamma(int n, const SignBlock& block) {
  if (n < 1 || n > kMaxGammaOrder) throw InvalidArgument("gamma: n out of range");
  if (block.order() != n) throw InvalidArgument("gamma: block order does not match n");

  // Stage j holds 3^(n-j) consecutive j-blocks, one letter per byte. Each
  // j-block (w1 w2) expands to the three (j-1)-blocks w1, w2, w1 .x w2, which
  // unrolls the recursion down to 0-blocks, where gamma_0 is the identity.
  std::vector<std::uint8_t> current(block.size());
  for (std::size_t i = 0; i < current.size(); ++i) current[i] = block.bits().get(i) ? 1 : 0;

  std::size_t count = 1;
  std::size_t width = block.size();
  std::vector<std::uint8_t> next;
  for (int j = n; j >= 1; --j) {
    const std::size_t half = width / 2;
    next.assign(count * 3 * half, 0);
    for (std::size_t b = 0; b < count; ++b) {
      const std::uint8_t* w1 = current.data() + b * width;
      const std::uint8_t* w2 = w1 + half;
      std::uint8_t* out = next.data() + b * 3 * half;
      std::copy_n(w1, half, out);
      std::copy_n(w2, half, out + half);
      for (std::size_t i = 0; i < half; ++i) out[2 * half + i] = w1[i] ^ w2[i];
    }
    current.swap(next);
    count *= 3;
    width = half;
  }

  BitVec bits(current.size());
  auto words = bits.words();
  for (std::size_t i = 0; i < current.size(); ++i) {
    words[i >> 6] |= std::uint64_t{current[i]} << (i & 63);
  }
  return ColourWord(n, std::move(bits));
}

}  // namespace skewmix
