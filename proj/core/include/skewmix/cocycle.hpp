#ifndef SKEWMIX_COCYCLE_HPP
#define SKEWMIX_COCYCLE_HPP

// The skew product T(x, y) = (T_H x, S_x y) with S_x = tau_{n(x)} o ... o tau_1
// (S_x = Id inside spacers), followed concretely on y-prefixes or symbolically
// as GF(2) parities of the initial coordinates.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "skewmix/bits.hpp"
#include "skewmix/blockalg.hpp"
#include "skewmix/rankone.hpp"

namespace skewmix {

/// Largest horizon the character engine accepts (a 2^M x 2^M bit matrix).
inline constexpr int kMaxCharHorizon = 15;

struct CocycleAction {
  enum class Kind { kIdentity, kComposite };
  Kind kind = Kind::kIdentity;
  int n = 0;  ///< composite: tau_n o ... o tau_1

  static CocycleAction identity() { return {}; }
  static CocycleAction composite(int n);

  bool is_identity() const { return kind == Kind::kIdentity; }
  /// Number of leading y-blocks touched: coordinates >= 2^support() are untouched.
  int support() const { return is_identity() ? 0 : n; }

  friend bool operator==(const CocycleAction&, const CocycleAction&) = default;
};

CocycleAction cocycle_at(const LevelPoint& p);

/// Applies tau_1 first, then tau_2, ..., tau_n. Throws HorizonTooSmall.
void apply(const CocycleAction& action, BitVec& y);
YPrefix apply(const CocycleAction& action, const YPrefix& y);

std::pair<LevelPoint, YPrefix> skew_step(const LevelPoint& p, const YPrefix& y);

/// Follows the base orbit of a point, reporting the cocycle action taken at
/// each step. The base orbit does not depend on y.
class OrbitWalker {
 public:
  explicit OrbitWalker(LevelPoint start) : point_(std::move(start)) {}

  const LevelPoint& point() const { return point_; }
  std::uint64_t time() const { return time_; }

  /// Moves to T_H of the current point and returns S at the current point.
  CocycleAction advance();

 private:
  LevelPoint point_;
  std::uint64_t time_ = 0;
};

/// max over 0 <= k < K of n(T_H^k p); spacer steps count as 0.
int required_horizon(const LevelPoint& p, std::uint64_t steps);

/// Colours y_0^{(0)}, ..., y_0^{(K)} along the skew orbit of (start, y).
struct ColourRun {
  LevelPoint start;
  std::uint64_t length = 0;
  BitVec colours;  ///< K + 1 letters, sign = (-1)^bit
  int horizon_used = 0;

  int colour(std::size_t k) const { return sign_of_bit(colours.get(k)); }
};

ColourRun colour_run(const LevelPoint& p, const YPrefix& y, std::uint64_t steps);

/// gamma_n computed by climbing tower n of the triadic odometer from its base.
ColourWord gamma_direct(int n, const SignBlock& block);

/// The shared odometer3 construction.
const ConstructionPtr& odometer3();

/// The letter prod_{i in members} y_i, as a set of y-coordinates.
class CharSet {
 public:
  explicit CharSet(int horizon);
  CharSet(int horizon, BitVec members);
  static CharSet singleton(int horizon, std::size_t index);
  /// Parses "{0,4}" (sorted, comma-separated) at the given horizon.
  static CharSet parse(std::string_view text, int horizon);

  int horizon() const { return horizon_; }
  const BitVec& members() const { return members_; }
  bool empty() const { return members_.none(); }
  bool contains(std::size_t i) const { return members_.get(i); }
  std::vector<std::size_t> indices() const;

  /// Value of the letter on a concrete prefix (whose horizon must be >= ours).
  int evaluate(const YPrefix& y) const;

  std::string to_string() const;

  /// Symmetric difference, i.e. the product of the two letters.
  friend CharSet operator^(const CharSet& lhs, const CharSet& rhs);
  friend bool operator==(const CharSet&, const CharSet&) = default;

 private:
  int horizon_;
  BitVec members_;
};

/// Every current y-coordinate as a parity of the initial ones: a 2^M x 2^M bit
/// matrix whose row i is the CharSet of coordinate i. tau_n swaps row blocks
/// and XORs, so it costs 2^(n-1) row XORs.
class CharEngine {
 public:
  explicit CharEngine(int horizon);

  int horizon() const { return horizon_; }
  void apply_tau(int n);
  void apply(const CocycleAction& action);

  std::span<const std::uint64_t> row_words(std::size_t coordinate) const;
  CharSet row(std::size_t coordinate) const;

 private:
  int horizon_;
  std::size_t row_words_;
  std::vector<std::uint64_t> storage_;
  std::vector<std::uint32_t> rows_;  // logical coordinate -> physical row
};

/// S_0, ..., S_K: the parity set of coordinate 0 after k skew steps from p,
/// over the initial coordinates up to required_horizon(p, K).
std::vector<CharSet> char_run(const LevelPoint& p, std::uint64_t steps);

}  // namespace skewmix

#endif  // SKEWMIX_COCYCLE_HPP
