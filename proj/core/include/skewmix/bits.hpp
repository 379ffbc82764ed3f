#ifndef SKEWMIX_BITS_HPP
#define SKEWMIX_BITS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace skewmix {

/// Fixed-length packed bit vector; bit i lives in word i / 64 at position i % 64.
/// Bits past size() in the last word are always zero.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t size);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool value) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  /// Requires equal sizes.
  BitVec& operator^=(const BitVec& other);

  bool none() const;
  std::size_t count() const;
  /// Index of the lowest set bit, or size() if none.
  std::size_t find_first() const;

  std::span<std::uint64_t> words() { return words_; }
  std::span<const std::uint64_t> words() const { return words_; }

  friend bool operator==(const BitVec&, const BitVec&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

BitVec operator^(BitVec lhs, const BitVec& rhs);

inline std::size_t word_count(std::size_t bits) { return (bits + 63) / 64; }

}  // namespace skewmix

#endif  // SKEWMIX_BITS_HPP
