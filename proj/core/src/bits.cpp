#include "skewmix/bits.hpp"

#include <bit>

#include "skewmix/errors.hpp"

namespace skewmix {

BitVec::BitVec(std::size_t size) : size_(size), words_(word_count(size), 0) {}

BitVec& BitVec::operator^=(const BitVec& other) {
  if (other.size_ != size_) throw InvalidArgument("BitVec xor: size mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

BitVec operator^(BitVec lhs, const BitVec& rhs) {
  lhs ^= rhs;
  return lhs;
}

bool BitVec::none() const {
  for (auto w : words_) {
    if (w != 0) return false;
  }
  return true;
}

std::size_t BitVec::count() const {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::size_t BitVec::find_first() const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] != 0) return i * 64 + static_cast<std::size_t>(std::countr_zero(words_[i]));
  }
  return size_;
}

}  // namespace skewmix
