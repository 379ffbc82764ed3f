#ifndef SKEWMIX_RANKONE_HPP
#define SKEWMIX_RANKONE_HPP

// Cutting and stacking with three cuts. Tower N+1 is laid out bottom to top as
//
//   [column 0 = copy of tower N][spacers[0]][column 1][spacers[1]][column 2][spacers[2]]
//
// so h_{N+1} = 3 h_N + spacers[0] + spacers[1] + spacers[2]. Points of the base
// are tower levels; Lebesgue measure becomes uniform counting over levels.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skewmix/rng.hpp"

namespace skewmix {

struct ConstructionSpec {
  std::string name;
  int cuts = 3;
  std::array<std::uint64_t, 3> spacers{0, 0, 0};
  std::uint64_t h1 = 1;

  friend bool operator==(const ConstructionSpec&, const ConstructionSpec&) = default;
};

/// Parses the line-oriented `key=value` construction format ('#' starts a
/// comment). Keys: name, cuts, spacers, h1; all required except h1, whose
/// default is 3 for a construction named "odometer3" and 1 otherwise.
ConstructionSpec parse_construction(std::string_view text);

/// Built-in presets: "odometer3" (h_n = 3^n) and "chacon" (h_{n+1} = 3 h_n + 1, h_1 = 1).
std::optional<ConstructionSpec> find_preset(std::string_view name);
std::vector<std::string> preset_names();

/// Height of tower n. Throws ArithmeticOverflow past 2^64 - 1.
std::uint64_t heights(const ConstructionSpec& spec, int n);

/// A validated spec with cached heights.
class Construction {
 public:
  explicit Construction(ConstructionSpec spec);

  const ConstructionSpec& spec() const { return spec_; }
  const std::string& name() const { return spec_.name; }

  /// Height of tower n (1 <= n <= max_tower()).
  std::uint64_t height(int n) const;
  /// Highest tower whose height fits in 64 bits.
  int max_tower() const { return static_cast<int>(heights_.size()); }
  /// First level of the copy of tower n used as `column` of tower n+1.
  std::uint64_t column_start(int n, int column) const;

  /// Tower whose climb is the first one driven by tau_1. A height-one tower 1
  /// is the unsplit space, so its successor is produced by construction step 1;
  /// otherwise tower 1 itself is. Cocycle indices are step numbers:
  /// step = tower - first_step_tower() + 1.
  int first_step_tower() const { return spec_.h1 == 1 ? 2 : 1; }

 private:
  ConstructionSpec spec_;
  std::vector<std::uint64_t> heights_;
};

using ConstructionPtr = std::shared_ptr<const Construction>;

ConstructionPtr make_construction(ConstructionSpec spec);

enum class Extension {
  kError,        ///< stepping off the top of the simulated tower fails
  kExtendBase,   ///< re-embed as column 0 of the next tower
  kExtendRandom  ///< re-embed as a uniformly drawn column, using the point's generator
};

/// A level of tower `tower`. For kExtendRandom the generator state travels
/// with the point, so every operation on the same point resolves identically.
struct LevelPoint {
  ConstructionPtr construction;
  int tower = 1;
  std::uint64_t level = 0;
  Extension extension = Extension::kError;
  SplitMix64 rng{};

  std::uint64_t height() const { return construction->height(tower); }
  bool at_top() const { return level + 1 == height(); }
};

/// Validates tower/level. Throws InvalidArgument.
LevelPoint make_point(ConstructionPtr construction, int tower, std::uint64_t level,
                      Extension extension = Extension::kError, std::uint64_t seed = 0);

struct ClimbPosition {
  enum class Kind { kColumn, kSpacer };
  int tower = 0;
  Kind kind = Kind::kColumn;
  int column = 0;           ///< which copy of `tower` inside tower+1 (kColumn)
  std::uint64_t offset = 0; ///< level inside that copy (kColumn)
  int spacer_step = 0;      ///< tower whose stacking inserted the spacer (kSpacer)

  bool is_spacer() const { return kind == Kind::kSpacer; }
  friend bool operator==(const ClimbPosition&, const ClimbPosition&) = default;
};

/// Position of p relative to tower m < p.tower: the column of tower m+1 whose
/// copy of tower m contains p, with p's offset in it, or the spacer that
/// contains p. Throws InvalidArgument if m is not in [1, p.tower).
ClimbPosition locate(const LevelPoint& p, int m);

/// Whether p is the top level of its copy of tower n.
/// Throws NotInTower when p lies in a spacer inserted after tower n.
bool is_top(const LevelPoint& p, int n);

/// Re-embeds column `column` of the next tower: same point, one tower up.
LevelPoint embed(const LevelPoint& p, int column);

/// Applies the extension policy while p is at the top of its tower.
/// Throws TopOfTower under kError.
LevelPoint settle(const LevelPoint& p);

/// T_H: the level directly above p.
LevelPoint step(const LevelPoint& p);

inline constexpr int kSpacer = 0;

/// The construction step at which T_H p gets defined, i.e. the smallest n >= 1
/// such that p is not on the top of the tower produced by step n; kSpacer if p
/// lies inside a spacer. Points on the top of every simulated tower are first
/// settled with the extension policy.
int n_of_x(const LevelPoint& p);

/// Whether p lies inside a spacer inserted at any step up to p.tower.
bool in_spacer(const LevelPoint& p);

/// Uniform level of tower n.
LevelPoint sample_point(ConstructionPtr construction, int n, SplitMix64& rng,
                        Extension extension = Extension::kError);

}  // namespace skewmix

#endif  // SKEWMIX_RANKONE_HPP
