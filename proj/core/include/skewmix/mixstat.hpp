#ifndef SKEWMIX_MIXSTAT_HPP
#define SKEWMIX_MIXSTAT_HPP

// Conditional probabilities given the base point. Conditioning on the factor
// generated by the base coordinate is conditioning on the tower level x; the
// fiber law is uniform on y, so every probability is a GF(2) rank computation.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skewmix/cocycle.hpp"
#include "skewmix/exact.hpp"
#include "skewmix/rankone.hpp"

namespace skewmix {

struct EventAtom {
  std::uint64_t time = 0;
  int sign = +1;

  friend bool operator==(const EventAtom&, const EventAtom&) = default;
};

/// The cylinder {colour at time t equals sign, for every atom}.
class EventSpec {
 public:
  /// Throws InvalidArgument on an empty list, repeated times or bad signs.
  explicit EventSpec(std::vector<EventAtom> atoms);
  /// "time:sign" atoms separated by commas, sign in {+,-}: "0:+,5:-".
  static EventSpec parse(std::string_view text);

  const std::vector<EventAtom>& atoms() const { return atoms_; }
  std::uint64_t max_time() const;
  /// T^{-k}: every time shifted by k.
  EventSpec shifted(std::uint64_t k) const;
  std::string to_string() const;

  friend bool operator==(const EventSpec&, const EventSpec&) = default;

 private:
  std::vector<EventAtom> atoms_;
};

/// 2^-r when consistent, 0 otherwise.
class DyadicProb {
 public:
  static DyadicProb zero() { return DyadicProb(false, 0); }
  static DyadicProb power_of_half(int r);

  bool consistent() const { return consistent_; }
  int log2_denominator() const { return log2_denominator_; }
  Rational value() const;
  std::string decimal() const { return to_decimal(value()); }

  friend DyadicProb operator*(DyadicProb lhs, DyadicProb rhs);
  friend bool operator==(const DyadicProb&, const DyadicProb&) = default;

 private:
  DyadicProb(bool consistent, int r) : consistent_(consistent), log2_denominator_(r) {}
  bool consistent_;
  int log2_denominator_;
};

/// P(prod_{i in chars[j]} y_i = signs[j] for all j) for uniform y: 2^-rank if
/// the signs respect every GF(2) dependency among the sets, else 0.
/// Throws InvalidArgument on length or horizon mismatch.
DyadicProb pattern_prob(std::span<const CharSet> chars, std::span<const int> signs);

struct ExactOptions {
  /// How many tower-top crossings may be averaged over before giving up.
  int max_extension_depth = 4;
};

/// One way of re-embedding a point so a window of steps stays inside its tower.
struct Branch {
  LevelPoint point;
  Rational weight;
  int depth = 0;
};

/// Re-embeds p over every column sequence (weight 1/3 each) until `window`
/// steps fit below the tower top. Branch weights sum to one.
///
/// Re-embedding the top of a tower as column 2 (when no spacer caps the next
/// tower) leaves the point on the top again, so that chain never ends. It is
/// closed exactly: when the tower-top crossing is the only step of the window
/// whose cocycle reaches past the others' support, every deeper member of the
/// chain sees the same colours up to a relabelling of fresh y-coordinates, and
/// the chain's mass splits evenly between the column-0 and column-1 children.
/// Throws ResolutionError when neither rule applies within max_depth levels.
std::vector<Branch> resolve_window(const LevelPoint& p, std::uint64_t window, int max_depth);

/// P(e | x = p), averaging exactly over extension columns when needed.
Rational event_prob_given_x(const LevelPoint& p, const EventSpec& e, const ExactOptions& options = {});

/// |P_x(A n T^-k B) - P_x(A) P_x(T^-k B)| for k = kmin..kmax.
std::vector<Rational> mix2_deviations(const LevelPoint& x, const EventSpec& a, const EventSpec& b,
                                      std::uint64_t kmin, std::uint64_t kmax,
                                      const ExactOptions& options = {});

struct MixCurveRow {
  std::uint64_t k = 0;
  Rational mean_dev;  ///< uniform mean over the levels of the tower
  Rational max_dev;
  std::uint64_t nonzero_x_count = 0;
};

struct MixCurve {
  int tower = 0;
  std::vector<MixCurveRow> rows;
};

struct Mix2Options {
  std::uint64_t kmin = 0;
  ExactOptions exact{};
  unsigned workers = 1;
};

MixCurve mix2_curve(const ConstructionPtr& construction, int tower, const EventSpec& a, const EventSpec& b,
                    std::uint64_t kmax, const Mix2Options& options = {});

struct Mix3Row {
  std::uint64_t x_level = 0;
  bool spacer = false;
  DyadicProb p_triple = DyadicProb::zero();
  DyadicProb p_product = DyadicProb::zero();
  /// S_D = S_0 xor S_d at this x.
  bool product_identity = false;
};

struct Mix3Scan {
  int n = 0;
  std::uint64_t d = 0;  ///< first time in the second column
  std::uint64_t D = 0;  ///< first time in the third column
  int horizon = 0;
  std::vector<Mix3Row> rows;  ///< every level of the first column, spacers flagged
  /// S_0, S_d, S_D seen from the base of tower n+1.
  std::vector<CharSet> column_base_chars;
};

/// A = B = C = {y_0 = +1} at times 0, d, D for every x in the first column of
/// tower n+1, where d and D are the offsets of the second and third columns
/// ((3^n, 2*3^n) for the odometer, (h_n, 2h_n + 1) for Chacon).
Mix3Scan mix3_scan(const ConstructionPtr& construction, int n, unsigned workers = 1);

struct TripleCensus {
  int n = 0;
  bool sampled = false;
  std::uint64_t samples = 0;
  /// Keyed by the sign strings of (C1, C2, C3).
  std::map<std::array<std::string, 3>, std::uint64_t> joint;
  std::array<std::map<std::string, std::uint64_t>, 3> marginals;
  /// Exact verdicts; unset in sampled mode.
  std::optional<bool> identically_distributed;
  std::optional<bool> pairwise_independent;
  bool product_identity = false;
};

/// Joint law of the three climb colourings of tower n seen from the base of
/// tower n+1 of the odometer: exhaustive over all first (n+1)-blocks for
/// n <= 3, otherwise `samples` random blocks (samples must then be > 0).
TripleCensus triple_block_census(int n, std::uint64_t samples = 0, std::uint64_t seed = 0);

struct McEstimate {
  double estimate = 0;
  double standard_error = 0;
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
};

struct McOptions {
  unsigned workers = 1;
  /// Samples per independently seeded task.
  std::uint64_t task_size = 4096;
};

/// Frequency of e over uniform random y (and uniform extension columns when
/// the window crosses the tower top), with binomial standard error.
McEstimate mc_check(const LevelPoint& p, const EventSpec& e, std::uint64_t samples, std::uint64_t seed,
                    const McOptions& options = {});

}  // namespace skewmix

#endif  // SKEWMIX_MIXSTAT_HPP
