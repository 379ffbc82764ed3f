#ifndef SKEWMIX_TESTS_ORACLES_HPP
#define SKEWMIX_TESTS_ORACLES_HPP

// Reference models written directly from the definitions, on plain vectors of
// +1/-1 and base-3 digits. Nothing here touches the library's bit encoding.

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace oracle {

using Word = std::vector<int>;

inline Word product(const Word& a, const Word& b) {
  Word out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

inline Word join(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline std::string render(const Word& w) {
  std::string s;
  for (int v : w) s += v > 0 ? '+' : '-';
  return s;
}

inline Word parse(const std::string& s) {
  Word w;
  for (char c : s) w.push_back(c == '+' ? 1 : -1);
  return w;
}

// First n-block (w1 w2) becomes (w2, w1 w2).
inline Word tau(int n, Word y) {
  const std::size_t half = std::size_t{1} << (n - 1);
  for (std::size_t i = 0; i < half; ++i) {
    const int a = y[i];
    const int b = y[half + i];
    y[i] = b;
    y[half + i] = a * b;
  }
  return y;
}

// gamma_1(a b) = a b (ab); gamma_{n+1}(w1 w2) = gamma_n(w1) gamma_n(w2) gamma_n(w1 w2).
inline Word gamma(const Word& block) {
  if (block.size() == 2) return {block[0], block[1], block[0] * block[1]};
  const std::size_t half = block.size() / 2;
  const Word w1(block.begin(), block.begin() + half);
  const Word w2(block.begin() + half, block.end());
  return join(join(gamma(w1), gamma(w2)), gamma(product(w1, w2)));
}

// Triadic odometer on N base-3 digits, least significant first.
struct Odometer {
  std::vector<int> digits;

  static Odometer at(int towers, std::uint64_t level) {
    Odometer o{std::vector<int>(towers, 0)};
    for (int i = 0; i < towers; ++i, level /= 3) o.digits[i] = static_cast<int>(level % 3);
    return o;
  }
  std::uint64_t level() const {
    std::uint64_t v = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) v = v * 3 + *it;
    return v;
  }
  int leading_twos() const {
    int c = 0;
    while (c < static_cast<int>(digits.size()) && digits[c] == 2) ++c;
    return c;
  }
  int n_of_x() const { return 1 + leading_twos(); }
  void add_one() {
    for (auto& d : digits) {
      if (d < 2) {
        ++d;
        return;
      }
      d = 0;
    }
  }
};

// Colours y_0 along the odometer skew orbit from `level` of tower N,
// K steps, using tau_1 .. tau_{n(x)} at each step.
inline Word odometer_colours(int towers, std::uint64_t level, Word y, std::uint64_t steps) {
  Odometer x = Odometer::at(towers, level);
  Word colours{y[0]};
  for (std::uint64_t k = 0; k < steps; ++k) {
    const int n = x.n_of_x();
    for (int j = 1; j <= n; ++j) y = tau(j, y);
    x.add_one();
    colours.push_back(y[0]);
  }
  return colours;
}

// P(parity(y & masks[j]) == bits[j] for all j) over uniform y in {0,1}^coords,
// returned as (hits, total).
inline std::pair<std::uint64_t, std::uint64_t> brute_pattern(const std::vector<std::uint64_t>& masks,
                                                             const std::vector<int>& signs, int coords) {
  const std::uint64_t total = std::uint64_t{1} << coords;
  std::uint64_t hits = 0;
  for (std::uint64_t y = 0; y < total; ++y) {
    bool ok = true;
    for (std::size_t j = 0; j < masks.size() && ok; ++j) {
      const int value = (std::popcount(y & masks[j]) & 1) ? -1 : 1;
      ok = value == signs[j];
    }
    hits += ok;
  }
  return {hits, total};
}

}  // namespace oracle

#endif  // SKEWMIX_TESTS_ORACLES_HPP
