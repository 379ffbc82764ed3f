#include "skewmix/rankone.hpp"

#include <cctype>
#include <charconv>
#include <map>
#include <set>

#include "skewmix/errors.hpp"

namespace skewmix {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename Int>
Int parse_int(std::string_view text, std::string_view key) {
  text = trim(text);
  if (!text.empty() && text.front() == '-') {
    throw ParseError("construction: '" + std::string(key) + "' must be nonnegative");
  }
  Int value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ParseError("construction: '" + std::string(key) + "' is not an integer: '" + std::string(text) + "'");
  }
  return value;
}

bool add_overflows(std::uint64_t a, std::uint64_t b, std::uint64_t& out) {
  return __builtin_add_overflow(a, b, &out);
}

bool mul_overflows(std::uint64_t a, std::uint64_t b, std::uint64_t& out) {
  return __builtin_mul_overflow(a, b, &out);
}

// One stacking step: h_{n+1} from h_n, or nullopt on overflow.
std::optional<std::uint64_t> next_height(const ConstructionSpec& spec, std::uint64_t h) {
  std::uint64_t out = 0;
  if (mul_overflows(h, 3, out)) return std::nullopt;
  for (auto s : spec.spacers) {
    if (add_overflows(out, s, out)) return std::nullopt;
  }
  return out;
}

void validate(const ConstructionSpec& spec) {
  if (spec.cuts != 3) {
    throw UnsupportedConstruction("construction '" + spec.name + "': cuts=" + std::to_string(spec.cuts) +
                                  " is unsupported (only 3 cuts)");
  }
  if (spec.h1 < 1) throw InvalidArgument("construction '" + spec.name + "': h1 must be >= 1");
}

}  // namespace

ConstructionSpec parse_construction(std::string_view text) {
  std::map<std::string, std::string, std::less<>> values;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("construction line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key(trim(line.substr(0, eq)));
    static const std::set<std::string, std::less<>> known{"name", "cuts", "spacers", "h1"};
    if (!known.contains(key)) {
      throw ParseError("construction line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (values.contains(key)) {
      throw ParseError("construction line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    values.emplace(key, std::string(trim(line.substr(eq + 1))));
  }

  for (const char* required : {"name", "cuts", "spacers"}) {
    if (!values.contains(required)) throw ParseError(std::string("construction: missing key '") + required + "'");
  }

  ConstructionSpec spec;
  spec.name = values.at("name");
  if (spec.name.empty()) throw ParseError("construction: empty name");
  for (char c : spec.name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
      throw ParseError("construction: name '" + spec.name + "' is not an identifier");
    }
  }

  const std::string& cuts = values.at("cuts");
  if (!cuts.empty() && cuts.front() == '-') throw UnsupportedConstruction("construction: cuts=" + cuts + " is unsupported");
  spec.cuts = parse_int<int>(cuts, "cuts");

  std::string_view spacers = values.at("spacers");
  for (int i = 0; i < 3; ++i) {
    const auto comma = spacers.find(',');
    if ((i < 2) == (comma == std::string_view::npos)) {
      throw ParseError("construction: 'spacers' needs exactly three comma-separated values");
    }
    spec.spacers[static_cast<std::size_t>(i)] = parse_int<std::uint64_t>(spacers.substr(0, comma), "spacers");
    spacers = comma == std::string_view::npos ? std::string_view{} : spacers.substr(comma + 1);
  }

  if (auto it = values.find("h1"); it != values.end()) {
    spec.h1 = parse_int<std::uint64_t>(it->second, "h1");
  } else {
    spec.h1 = spec.name == "odometer3" ? 3 : 1;
  }

  validate(spec);
  return spec;
}

std::optional<ConstructionSpec> find_preset(std::string_view name) {
  if (name == "odometer3") return ConstructionSpec{"odometer3", 3, {0, 0, 0}, 3};
  if (name == "chacon") return ConstructionSpec{"chacon", 3, {0, 1, 0}, 1};
  return std::nullopt;
}

std::vector<std::string> preset_names() { return {"odometer3", "chacon"}; }

std::uint64_t heights(const ConstructionSpec& spec, int n) {
  validate(spec);
  if (n < 1) throw InvalidArgument("heights: n must be >= 1");
  std::uint64_t h = spec.h1;
  for (int i = 1; i < n; ++i) {
    auto next = next_height(spec, h);
    if (!next) throw ArithmeticOverflow("heights: tower " + std::to_string(n) + " overflows 64 bits");
    h = *next;
  }
  return h;
}

// ---------------------------------------------------------------------------

Construction::Construction(ConstructionSpec spec) : spec_(std::move(spec)) {
  validate(spec_);
  heights_.push_back(spec_.h1);
  while (auto next = next_height(spec_, heights_.back())) heights_.push_back(*next);
}

std::uint64_t Construction::height(int n) const {
  if (n < 1) throw InvalidArgument("height: tower index must be >= 1");
  if (n > max_tower()) throw ArithmeticOverflow("height: tower " + std::to_string(n) + " overflows 64 bits");
  return heights_[static_cast<std::size_t>(n - 1)];
}

std::uint64_t Construction::column_start(int n, int column) const {
  const std::uint64_t h = height(n);
  std::uint64_t start = 0;
  for (int c = 0; c < column; ++c) start += h + spec_.spacers[static_cast<std::size_t>(c)];
  return start;
}

ConstructionPtr make_construction(ConstructionSpec spec) {
  return std::make_shared<const Construction>(std::move(spec));
}

LevelPoint make_point(ConstructionPtr construction, int tower, std::uint64_t level, Extension extension,
                      std::uint64_t seed) {
  if (!construction) throw InvalidArgument("make_point: null construction");
  if (tower < 1 || tower > construction->max_tower()) throw InvalidArgument("make_point: tower out of range");
  if (level >= construction->height(tower)) {
    throw InvalidArgument("make_point: level " + std::to_string(level) + " outside tower " + std::to_string(tower));
  }
  return LevelPoint{std::move(construction), tower, level, extension, SplitMix64(seed)};
}

// ---------------------------------------------------------------------------

namespace {

// Splits a level of tower t+1 into (column, offset in tower t), or reports the
// spacer slot.
ClimbPosition split_level(const Construction& c, int t, std::uint64_t level) {
  const std::uint64_t h = c.height(t);
  std::uint64_t start = 0;
  for (int col = 0; col < 3; ++col) {
    if (level < start + h) return ClimbPosition{t, ClimbPosition::Kind::kColumn, col, level - start, 0};
    start += h;
    const std::uint64_t spacers = c.spec().spacers[static_cast<std::size_t>(col)];
    if (level < start + spacers) return ClimbPosition{t, ClimbPosition::Kind::kSpacer, 0, 0, t + 1};
    start += spacers;
  }
  throw InvalidArgument("level outside tower " + std::to_string(t + 1));
}

}  // namespace

ClimbPosition locate(const LevelPoint& p, int m) {
  if (m < 1 || m >= p.tower) {
    throw InvalidArgument("locate: need 1 <= m < tower, got m=" + std::to_string(m));
  }
  const Construction& c = *p.construction;
  std::uint64_t level = p.level;
  for (int t = p.tower - 1; t >= m; --t) {
    ClimbPosition pos = split_level(c, t, level);
    if (pos.is_spacer() || t == m) return pos;
    level = pos.offset;
  }
  throw InvalidArgument("locate: unreachable");
}

bool is_top(const LevelPoint& p, int n) {
  if (n < 1 || n > p.tower) throw InvalidArgument("is_top: need 1 <= n <= tower");
  if (n == p.tower) return p.at_top();
  const ClimbPosition pos = locate(p, n);
  if (pos.is_spacer()) {
    throw NotInTower("is_top: point lies in a spacer inserted at tower " + std::to_string(pos.spacer_step));
  }
  return pos.offset + 1 == p.construction->height(n);
}

LevelPoint embed(const LevelPoint& p, int column) {
  if (column < 0 || column > 2) throw InvalidArgument("embed: column must be 0, 1 or 2");
  const Construction& c = *p.construction;
  if (p.tower + 1 > c.max_tower()) throw ArithmeticOverflow("embed: next tower overflows 64 bits");
  LevelPoint out = p;
  out.level = p.level + c.column_start(p.tower, column);
  out.tower = p.tower + 1;
  return out;
}

LevelPoint settle(const LevelPoint& p) {
  LevelPoint out = p;
  while (out.at_top()) {
    switch (out.extension) {
      case Extension::kError:
        throw TopOfTower("top of tower " + std::to_string(out.tower) + " reached (extension policy ERROR)");
      case Extension::kExtendBase:
        out = embed(out, 0);
        break;
      case Extension::kExtendRandom: {
        const int column = static_cast<int>(out.rng.uniform(3));
        out = embed(out, column);
        break;
      }
    }
  }
  return out;
}

LevelPoint step(const LevelPoint& p) {
  LevelPoint out = settle(p);
  ++out.level;
  return out;
}

namespace {

// Smallest tower t >= 1 of which p is not the top, or 0 for a spacer.
// p must not be at the top of its own tower.
int first_non_top_tower(const LevelPoint& p) {
  const Construction& c = *p.construction;
  std::uint64_t level = p.level;
  int answer = p.tower;
  for (int t = p.tower - 1; t >= 1; --t) {
    const ClimbPosition pos = split_level(c, t, level);
    if (pos.is_spacer()) return 0;
    level = pos.offset;
    if (level + 1 != c.height(t)) answer = t;
  }
  return answer;
}

}  // namespace

bool in_spacer(const LevelPoint& p) {
  if (p.tower == 1) return false;
  const Construction& c = *p.construction;
  std::uint64_t level = p.level;
  for (int t = p.tower - 1; t >= 1; --t) {
    const ClimbPosition pos = split_level(c, t, level);
    if (pos.is_spacer()) return true;
    level = pos.offset;
  }
  return false;
}

int n_of_x(const LevelPoint& p) {
  if (in_spacer(p)) return kSpacer;
  const LevelPoint q = settle(p);
  const int tower = first_non_top_tower(q);
  if (tower == 0) return kSpacer;
  return tower - q.construction->first_step_tower() + 1;
}

LevelPoint sample_point(ConstructionPtr construction, int n, SplitMix64& rng, Extension extension) {
  const std::uint64_t h = construction->height(n);
  const std::uint64_t level = rng.uniform(h);
  LevelPoint p = make_point(std::move(construction), n, level, extension, 0);
  p.rng = SplitMix64(rng.next());
  return p;
}

}  // namespace skewmix
