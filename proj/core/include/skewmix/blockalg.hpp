#ifndef SKEWMIX_BLOCKALG_HPP
#define SKEWMIX_BLOCKALG_HPP

// Words over {-1,+1}. Letter i is stored as bit i with sign = (-1)^bit, so
// +1 <-> 0, -1 <-> 1 and the termwise product of two words is their XOR.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "skewmix/bits.hpp"

namespace skewmix {

/// Largest n for which gamma(n, .) is supported (3^n letters must fit in memory).
inline constexpr int kMaxGammaOrder = 18;
/// Largest YPrefix horizon (2^M coordinates).
inline constexpr int kMaxHorizon = 30;

std::uint64_t pow3(int n);

inline int sign_of_bit(bool bit) { return bit ? -1 : +1; }
/// Throws InvalidArgument unless s is +1 or -1.
bool bit_of_sign(int s);

/// Renders bits as a string over {+,-}; leftmost character is coordinate 0.
std::string to_sign_string(const BitVec& bits);
/// Inverse of to_sign_string. Throws ParseError on characters other than '+'/'-'.
BitVec parse_sign_string(std::string_view literal);

/// An n-block: a word of length 2^n.
class SignBlock {
 public:
  SignBlock(int order, BitVec bits);
  /// All-plus block of the given order.
  explicit SignBlock(int order);

  static SignBlock from_signs(std::span<const int> signs);
  /// Low 2^order bits of `packed` (order <= 6).
  static SignBlock from_word(int order, std::uint64_t packed);
  /// Parses a {+,-} literal whose length is a power of two.
  static SignBlock parse(std::string_view literal);

  int order() const { return order_; }
  std::size_t size() const { return bits_.size(); }
  int sign(std::size_t i) const { return sign_of_bit(bits_.get(i)); }
  const BitVec& bits() const { return bits_; }
  std::string to_string() const { return to_sign_string(bits_); }

  friend bool operator==(const SignBlock&, const SignBlock&) = default;

 private:
  int order_;
  BitVec bits_;
};

/// A word of length 3^n, the image of gamma(n, .).
class ColourWord {
 public:
  ColourWord(int order, BitVec bits);

  int order() const { return order_; }
  std::size_t size() const { return bits_.size(); }
  int sign(std::size_t i) const { return sign_of_bit(bits_.get(i)); }
  const BitVec& bits() const { return bits_; }
  std::string to_string() const { return to_sign_string(bits_); }

  friend bool operator==(const ColourWord&, const ColourWord&) = default;

 private:
  int order_;
  BitVec bits_;
};

/// Coordinates y_0 .. y_{2^M - 1} of a point of Y = {-1,+1}^N.
class YPrefix {
 public:
  YPrefix(int horizon, BitVec bits);
  /// All-plus prefix.
  explicit YPrefix(int horizon);

  /// The block's letters as the first 2^order coordinates.
  static YPrefix from_block(const SignBlock& block);

  int horizon() const { return horizon_; }
  std::size_t size() const { return bits_.size(); }
  int sign(std::size_t i) const { return sign_of_bit(bits_.get(i)); }
  const BitVec& bits() const { return bits_; }
  BitVec& mutable_bits() { return bits_; }
  std::string to_string() const { return to_sign_string(bits_); }

  /// Copy padded with +1 (or truncated) to a new horizon.
  YPrefix resized(int horizon) const;
  /// The n-block made of coordinates [2^n * index, 2^n * (index + 1)).
  SignBlock block(int n, std::size_t index = 0) const;

  friend bool operator==(const YPrefix&, const YPrefix&) = default;

 private:
  int horizon_;
  BitVec bits_;
};

SignBlock concat(const SignBlock& first, const SignBlock& second);
SignBlock termwise_product(const SignBlock& lhs, const SignBlock& rhs);
ColourWord termwise_product(const ColourWord& lhs, const ColourWord& rhs);
std::pair<SignBlock, SignBlock> split(const SignBlock& block);

/// tau_n: first n-block (w1 w2) becomes (w2, w1 .x w2); the rest is untouched.
/// Throws HorizonTooSmall if n > y.horizon(), InvalidArgument if n < 1.
YPrefix tau(int n, const YPrefix& y);
/// In-place tau_n on packed coordinates; bits.size() must be >= 2^n.
void tau_in_place(int n, BitVec& bits);
void tau_in_place(int n, std::span<std::uint64_t> words);

/// The colour coding gamma_n, computed bottom-up from
///   gamma_1(a b) = a b (a.b),  gamma_{n+1}(w1 w2) = gamma_n(w1) gamma_n(w2) gamma_n(w1 .x w2).
ColourWord gamma(int n, const SignBlock& block);

}  // namespace skewmix

#endif  // SKEWMIX_BLOCKALG_HPP
