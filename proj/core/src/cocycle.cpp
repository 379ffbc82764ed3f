#include "skewmix/cocycle.hpp"

#include <algorithm>
#include <bit>
#include <charconv>

#include "skewmix/errors.hpp"

namespace skewmix {

CocycleAction CocycleAction::composite(int n) {
  if (n < 1) throw InvalidArgument("CocycleAction: composite needs n >= 1");
  return {Kind::kComposite, n};
}

CocycleAction cocycle_at(const LevelPoint& p) {
  const int n = n_of_x(p);
  return n == kSpacer ? CocycleAction::identity() : CocycleAction::composite(n);
}

void apply(const CocycleAction& action, BitVec& y) {
  if (action.is_identity()) return;
  if (action.n > kMaxHorizon || (std::size_t{1} << action.n) > y.size()) {
    throw HorizonTooSmall("cocycle needs horizon " + std::to_string(action.n) + ", prefix has " +
                          std::to_string(y.size()) + " coordinates");
  }
  for (int j = 1; j <= action.n; ++j) tau_in_place(j, y.words());
}

YPrefix apply(const CocycleAction& action, const YPrefix& y) {
  YPrefix out = y;
  apply(action, out.mutable_bits());
  return out;
}

std::pair<LevelPoint, YPrefix> skew_step(const LevelPoint& p, const YPrefix& y) {
  const LevelPoint settled = settle(p);
  const CocycleAction action = cocycle_at(settled);
  YPrefix next_y = apply(action, y);
  LevelPoint next = settled;
  ++next.level;
  return {std::move(next), std::move(next_y)};
}

CocycleAction OrbitWalker::advance() {
  point_ = settle(point_);
  const CocycleAction action = cocycle_at(point_);
  ++point_.level;
  ++time_;
  return action;
}

int required_horizon(const LevelPoint& p, std::uint64_t steps) {
  OrbitWalker walker(p);
  int horizon = 0;
  for (std::uint64_t k = 0; k < steps; ++k) horizon = std::max(horizon, walker.advance().support());
  return horizon;
}

ColourRun colour_run(const LevelPoint& p, const YPrefix& y, std::uint64_t steps) {
  ColourRun run{p, steps, BitVec(steps + 1), y.horizon()};
  BitVec state = y.bits();
  run.colours.set(0, state.get(0));
  OrbitWalker walker(p);
  for (std::uint64_t k = 1; k <= steps; ++k) {
    apply(walker.advance(), state);
    run.colours.set(k, state.get(0));
  }
  return run;
}

const ConstructionPtr& odometer3() {
  static const ConstructionPtr instance = make_construction(*find_preset("odometer3"));
  return instance;
}

ColourWord gamma_direct(int n, const SignBlock& block) {
  if (n < 1 || n > kMaxGammaOrder) throw InvalidArgument("gamma_direct: n out of range");
  if (block.order() != n) throw InvalidArgument("gamma_direct: block order does not match n");
  const LevelPoint base = make_point(odometer3(), n, 0, Extension::kError);
  const std::uint64_t steps = pow3(n) - 1;
  ColourRun run = colour_run(base, YPrefix::from_block(block), steps);
  return ColourWord(n, std::move(run.colours));
}

// ---------------------------------------------------------------------------

CharSet::CharSet(int horizon) : CharSet(horizon, BitVec(std::size_t{1} << std::clamp(horizon, 0, kMaxHorizon))) {}

CharSet::CharSet(int horizon, BitVec members) : horizon_(horizon), members_(std::move(members)) {
  if (horizon < 0 || horizon > kMaxHorizon) throw InvalidArgument("CharSet: horizon out of range");
  if (members_.size() != (std::size_t{1} << horizon)) throw InvalidArgument("CharSet: size is not 2^horizon");
}

CharSet CharSet::singleton(int horizon, std::size_t index) {
  CharSet out(horizon);
  if (index >= out.members_.size()) throw InvalidArgument("CharSet: index outside the horizon");
  out.members_.set(index, true);
  return out;
}

CharSet CharSet::parse(std::string_view text, int horizon) {
  if (text.size() < 2 || text.front() != '{' || text.back() != '}') {
    throw ParseError("CharSet: expected '{...}', got '" + std::string(text) + "'");
  }
  CharSet out(horizon);
  std::string_view body = text.substr(1, text.size() - 2);
  long previous = -1;
  while (!body.empty()) {
    const auto comma = body.find(',');
    const std::string_view item = body.substr(0, comma);
    std::size_t index = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), index);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw ParseError("CharSet: bad index '" + std::string(item) + "'");
    }
    if (static_cast<long>(index) <= previous) throw ParseError("CharSet: indices must be strictly increasing");
    if (index >= out.members_.size()) throw ParseError("CharSet: index outside the horizon");
    out.members_.set(index, true);
    previous = static_cast<long>(index);
    if (comma == std::string_view::npos) break;
    body = body.substr(comma + 1);
    if (body.empty()) throw ParseError("CharSet: trailing comma");
  }
  return out;
}

std::vector<std::size_t> CharSet::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_.get(i)) out.push_back(i);
  }
  return out;
}

int CharSet::evaluate(const YPrefix& y) const {
  if (y.horizon() < horizon_) throw HorizonTooSmall("CharSet::evaluate: prefix shorter than the character");
  bool parity = false;
  auto a = members_.words();
  auto b = y.bits().words();
  for (std::size_t i = 0; i < a.size(); ++i) parity ^= (std::popcount(a[i] & b[i]) & 1) != 0;
  return sign_of_bit(parity);
}

std::string CharSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (std::size_t i : indices()) {
    if (!first) out += ',';
    out += std::to_string(i);
    first = false;
  }
  out += '}';
  return out;
}

CharSet operator^(const CharSet& lhs, const CharSet& rhs) {
  if (lhs.horizon_ != rhs.horizon_) throw InvalidArgument("CharSet: horizon mismatch");
  return CharSet(lhs.horizon_, lhs.members_ ^ rhs.members_);
}

// ---------------------------------------------------------------------------

CharEngine::CharEngine(int horizon) : horizon_(horizon) {
  if (horizon < 0 || horizon > kMaxCharHorizon) {
    throw InvalidArgument("CharEngine: horizon " + std::to_string(horizon) + " out of range");
  }
  const std::size_t rows = std::size_t{1} << horizon;
  row_words_ = word_count(rows);
  storage_.assign(rows * row_words_, 0);
  rows_.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    rows_[i] = static_cast<std::uint32_t>(i);
    storage_[i * row_words_ + i / 64] = std::uint64_t{1} << (i % 64);
  }
}

void CharEngine::apply_tau(int n) {
  if (n < 1 || n > horizon_) {
    throw HorizonTooSmall("CharEngine: tau_" + std::to_string(n) + " beyond horizon " + std::to_string(horizon_));
  }
  const std::size_t half = std::size_t{1} << (n - 1);
  for (std::size_t i = 0; i < half; ++i) {
    const std::uint32_t first = rows_[i];
    const std::uint32_t second = rows_[i + half];
    std::uint64_t* dst = storage_.data() + std::size_t{first} * row_words_;
    const std::uint64_t* src = storage_.data() + std::size_t{second} * row_words_;
    for (std::size_t w = 0; w < row_words_; ++w) dst[w] ^= src[w];
    // new first half <- old second half; new second half <- old first .x old second
    rows_[i] = second;
    rows_[i + half] = first;
  }
}

void CharEngine::apply(const CocycleAction& action) {
  for (int j = 1; j <= action.support(); ++j) apply_tau(j);
}

std::span<const std::uint64_t> CharEngine::row_words(std::size_t coordinate) const {
  return {storage_.data() + std::size_t{rows_.at(coordinate)} * row_words_, row_words_};
}

CharSet CharEngine::row(std::size_t coordinate) const {
  BitVec bits(rows_.size());
  auto src = row_words(coordinate);
  std::copy(src.begin(), src.end(), bits.words().begin());
  return CharSet(horizon_, std::move(bits));
}

std::vector<CharSet> char_run(const LevelPoint& p, std::uint64_t steps) {
  CharEngine engine(required_horizon(p, steps));
  std::vector<CharSet> out;
  out.reserve(steps + 1);
  out.push_back(engine.row(0));
  OrbitWalker walker(p);
  for (std::uint64_t k = 0; k < steps; ++k) {
    engine.apply(walker.advance());
    out.push_back(engine.row(0));
  }
  return out;
}

}  // namespace skewmix
