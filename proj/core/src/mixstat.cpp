#include "skewmix/mixstat.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <unordered_map>
#include <utility>

#include "skewmix/errors.hpp"
#include "skewmix/parallel.hpp"

namespace skewmix {

// ---------------------------------------------------------------------------
// Events

EventSpec::EventSpec(std::vector<EventAtom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw InvalidArgument("event: at least one atom required");
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].sign != 1 && atoms_[i].sign != -1) throw InvalidArgument("event: sign must be +1 or -1");
    for (std::size_t j = 0; j < i; ++j) {
      if (atoms_[i].time == atoms_[j].time) {
        throw InvalidArgument("event: time " + std::to_string(atoms_[i].time) + " appears twice");
      }
    }
  }
}

EventSpec EventSpec::parse(std::string_view text) {
  std::vector<EventAtom> atoms;
  while (true) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos || colon + 2 != item.size()) {
      throw ParseError("event: expected time:sign, got '" + std::string(item) + "'");
    }
    const std::string_view time = item.substr(0, colon);
    std::uint64_t t = 0;
    auto [ptr, ec] = std::from_chars(time.data(), time.data() + time.size(), t);
    if (time.empty() || ec != std::errc() || ptr != time.data() + time.size()) {
      throw ParseError("event: bad time '" + std::string(time) + "'");
    }
    const char s = item.back();
    if (s != '+' && s != '-') throw ParseError("event: sign must be '+' or '-'");
    atoms.push_back({t, s == '+' ? 1 : -1});
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  try {
    return EventSpec(std::move(atoms));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

std::uint64_t EventSpec::max_time() const {
  std::uint64_t t = 0;
  for (const auto& a : atoms_) t = std::max(t, a.time);
  return t;
}

EventSpec EventSpec::shifted(std::uint64_t k) const {
  std::vector<EventAtom> atoms = atoms_;
  for (auto& a : atoms) a.time += k;
  return EventSpec(std::move(atoms));
}

std::string EventSpec::to_string() const {
  std::string out;
  for (const auto& a : atoms_) {
    if (!out.empty()) out += ',';
    out += std::to_string(a.time) + ':' + (a.sign > 0 ? '+' : '-');
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dyadic probabilities

DyadicProb DyadicProb::power_of_half(int r) {
  if (r < 0) throw InvalidArgument("DyadicProb: negative exponent");
  return DyadicProb(true, r);
}

Rational DyadicProb::value() const {
  if (!consistent_) return Rational(0);
  BigInt den = 1;
  den <<= log2_denominator_;
  return Rational(BigInt(1), den);
}

DyadicProb operator*(DyadicProb lhs, DyadicProb rhs) {
  if (!lhs.consistent_ || !rhs.consistent_) return DyadicProb::zero();
  return DyadicProb::power_of_half(lhs.log2_denominator_ + rhs.log2_denominator_);
}

namespace {

// Incremental GF(2) elimination over parity vectors with a right-hand side.
// Each basis row is keyed by its lowest set bit; reducing a new row by the
// basis row owning its lowest bit strictly raises that bit.
class ParitySystem {
 public:
  explicit ParitySystem(std::size_t words) : words_(words) {}

  // Returns false if the new equation contradicts the earlier ones.
  bool add(std::span<const std::uint64_t> vector, bool rhs) {
    std::vector<std::uint64_t> row(vector.begin(), vector.end());
    for (;;) {
      const std::size_t pivot = lowest(row);
      if (pivot == npos) return !rhs;
      auto it = basis_.find(pivot);
      if (it == basis_.end()) {
        basis_.emplace(pivot, Row{std::move(row), rhs});
        return true;
      }
      for (std::size_t w = 0; w < words_; ++w) row[w] ^= it->second.bits[w];
      rhs ^= it->second.rhs;
    }
  }

  int rank() const { return static_cast<int>(basis_.size()); }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  struct Row {
    std::vector<std::uint64_t> bits;
    bool rhs;
  };

  std::size_t lowest(const std::vector<std::uint64_t>& row) const {
    for (std::size_t w = 0; w < words_; ++w) {
      if (row[w] != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(row[w]));
    }
    return npos;
  }

  std::size_t words_;
  std::unordered_map<std::size_t, Row> basis_;
};

DyadicProb pattern_prob_words(std::span<const std::span<const std::uint64_t>> vectors, std::span<const int> signs,
                              std::size_t words) {
  ParitySystem system(words);
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (!system.add(vectors[j], bit_of_sign(signs[j]))) return DyadicProb::zero();
  }
  return DyadicProb::power_of_half(system.rank());
}

}  // namespace

DyadicProb pattern_prob(std::span<const CharSet> chars, std::span<const int> signs) {
  if (chars.size() != signs.size()) throw InvalidArgument("pattern_prob: chars and signs differ in length");
  if (chars.empty()) return DyadicProb::power_of_half(0);
  const int horizon = chars.front().horizon();
  std::vector<std::span<const std::uint64_t>> vectors;
  vectors.reserve(chars.size());
  for (const auto& c : chars) {
    if (c.horizon() != horizon) throw InvalidArgument("pattern_prob: characters have different horizons");
    vectors.push_back(c.members().words());
  }
  for (int s : signs) bit_of_sign(s);
  return pattern_prob_words(vectors, signs, chars.front().members().words().size());
}

// ---------------------------------------------------------------------------
// Exact conditional probabilities

namespace {

bool fits(const LevelPoint& p, std::uint64_t window) { return p.level + window < p.height(); }

// child = q re-embedded one tower up, q on the top of its tower. True when the
// step leaving q's tower top is the window's unique step of maximal support.
bool isolated_crossing(const LevelPoint& q, const LevelPoint& child, std::uint64_t window) {
  const std::uint64_t crossing = q.height() - 1 - q.level;
  OrbitWalker walker(child);
  int crossing_support = 0;
  int other_support = 0;
  for (std::uint64_t k = 0; k < window; ++k) {
    const int support = walker.advance().support();
    if (k == crossing) {
      crossing_support = support;
    } else {
      other_support = std::max(other_support, support);
    }
  }
  return crossing_support > other_support;
}

}  // namespace

std::vector<Branch> resolve_window(const LevelPoint& p, std::uint64_t window, int max_depth) {
  std::vector<Branch> out;
  std::vector<Branch> pending{{p, Rational(1), 0}};
  pending.front().point.extension = Extension::kError;
  while (!pending.empty()) {
    Branch b = std::move(pending.back());
    pending.pop_back();
    // Steps happen at levels level .. level+window-1; all must be below the top.
    if (fits(b.point, window)) {
      out.push_back(std::move(b));
      continue;
    }
    if (b.point.construction->spec().spacers[2] == 0) {
      LevelPoint first = embed(b.point, 0);
      LevelPoint second = embed(b.point, 1);
      if (fits(first, window) && fits(second, window) && isolated_crossing(b.point, first, window) &&
          isolated_crossing(b.point, second, window)) {
        const Rational half = b.weight / 2;
        out.push_back({std::move(first), half, b.depth + 1});
        out.push_back({std::move(second), half, b.depth + 1});
        continue;
      }
    }
    if (b.depth >= max_depth) {
      throw ResolutionError("orbit window of " + std::to_string(window) + " steps from tower " +
                            std::to_string(p.tower) + " level " + std::to_string(p.level) + " needs more than " +
                            std::to_string(max_depth) + " extension levels; raise the tower");
    }
    const Rational third = b.weight / 3;
    for (int c = 2; c >= 0; --c) pending.push_back({embed(b.point, c), third, b.depth + 1});
  }
  std::sort(out.begin(), out.end(), [](const Branch& a, const Branch& b) {
    return std::pair(a.point.tower, a.point.level) < std::pair(b.point.tower, b.point.level);
  });
  return out;
}

namespace {

DyadicProb event_prob(const std::vector<CharSet>& chars, const EventSpec& e) {
  std::vector<CharSet> picked;
  std::vector<int> signs;
  picked.reserve(e.atoms().size());
  for (const auto& a : e.atoms()) {
    picked.push_back(chars.at(a.time));
    signs.push_back(a.sign);
  }
  return pattern_prob(picked, signs);
}

}  // namespace

Rational event_prob_given_x(const LevelPoint& p, const EventSpec& e, const ExactOptions& options) {
  const std::uint64_t window = e.max_time();
  Rational total = 0;
  for (const Branch& b : resolve_window(p, window, options.max_extension_depth)) {
    total += event_prob(char_run(b.point, window), e).value() * b.weight;
  }
  return total;
}

std::vector<Rational> mix2_deviations(const LevelPoint& x, const EventSpec& a, const EventSpec& b,
                                      std::uint64_t kmin, std::uint64_t kmax, const ExactOptions& options) {
  if (kmin > kmax) throw InvalidArgument("mix2: kmin > kmax");
  const std::uint64_t window = std::max(a.max_time(), kmax + b.max_time());
  const std::size_t ks = static_cast<std::size_t>(kmax - kmin + 1);
  const std::vector<Branch> branches = resolve_window(x, window, options.max_extension_depth);

  std::vector<CharSet> picked;
  std::vector<int> signs;
  auto prob_of = [&](const std::vector<CharSet>& chars, std::initializer_list<std::pair<const EventSpec*, std::uint64_t>> parts) {
    picked.clear();
    signs.clear();
    for (const auto& [event, shift] : parts) {
      for (const auto& atom : event->atoms()) {
        picked.push_back(chars[atom.time + shift]);
        signs.push_back(atom.sign);
      }
    }
    return pattern_prob(picked, signs);
  };

  if (branches.size() == 1) {
    // No extension: every probability is a power of one half.
    const std::vector<CharSet> chars = char_run(branches.front().point, window);
    const DyadicProb pa = prob_of(chars, {{&a, 0}});
    std::vector<Rational> out(ks);
    for (std::uint64_t k = kmin; k <= kmax; ++k) {
      const DyadicProb pab = prob_of(chars, {{&a, 0}, {&b, k}});
      const DyadicProb pb = prob_of(chars, {{&b, k}});
      const DyadicProb product = pa * pb;
      if (pab == product) continue;
      Rational dev = pab.value() - product.value();
      out[static_cast<std::size_t>(k - kmin)] = dev < 0 ? Rational(-dev) : dev;
    }
    return out;
  }

  Rational pa = 0;
  std::vector<Rational> pab(ks), pb(ks);
  for (const Branch& br : branches) {
    const std::vector<CharSet> chars = char_run(br.point, window);
    const Rational& w = br.weight;
    pa += prob_of(chars, {{&a, 0}}).value() * w;
    for (std::uint64_t k = kmin; k <= kmax; ++k) {
      const auto i = static_cast<std::size_t>(k - kmin);
      pab[i] += prob_of(chars, {{&a, 0}, {&b, k}}).value() * w;
      pb[i] += prob_of(chars, {{&b, k}}).value() * w;
    }
  }
  std::vector<Rational> out(ks);
  for (std::size_t i = 0; i < ks; ++i) {
    Rational dev = pab[i] - pa * pb[i];
    out[i] = dev < 0 ? Rational(-dev) : dev;
  }
  return out;
}

MixCurve mix2_curve(const ConstructionPtr& construction, int tower, const EventSpec& a, const EventSpec& b,
                    std::uint64_t kmax, const Mix2Options& options) {
  if (options.kmin > kmax) throw InvalidArgument("mix2: kmin > kmax");
  const std::uint64_t h = construction->height(tower);
  const std::size_t ks = static_cast<std::size_t>(kmax - options.kmin + 1);

  // Tasks cover contiguous level ranges; partial sums are folded in level order.
  constexpr std::uint64_t kChunk = 64;
  const std::size_t tasks = static_cast<std::size_t>((h + kChunk - 1) / kChunk);
  struct Partial {
    std::vector<Rational> sum, max;
    std::vector<std::uint64_t> nonzero;
  };
  std::vector<Partial> partials(tasks);
  parallel_for(tasks, options.workers, [&](std::size_t t) {
    Partial& part = partials[t];
    part.sum.assign(ks, Rational(0));
    part.max.assign(ks, Rational(0));
    part.nonzero.assign(ks, 0);
    const std::uint64_t begin = t * kChunk;
    const std::uint64_t end = std::min(h, begin + kChunk);
    for (std::uint64_t level = begin; level < end; ++level) {
      const LevelPoint x = make_point(construction, tower, level, Extension::kError);
      const std::vector<Rational> devs = mix2_deviations(x, a, b, options.kmin, kmax, options.exact);
      for (std::size_t i = 0; i < ks; ++i) {
        if (devs[i] == 0) continue;
        part.sum[i] += devs[i];
        if (devs[i] > part.max[i]) part.max[i] = devs[i];
        ++part.nonzero[i];
      }
    }
  });

  MixCurve curve{tower, {}};
  curve.rows.resize(ks);
  for (std::size_t i = 0; i < ks; ++i) {
    MixCurveRow& row = curve.rows[i];
    row.k = options.kmin + i;
    Rational sum = 0;
    for (const Partial& part : partials) {
      sum += part.sum[i];
      if (part.max[i] > row.max_dev) row.max_dev = part.max[i];
      row.nonzero_x_count += part.nonzero[i];
    }
    row.mean_dev = sum / Rational(BigInt(h));
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Threefold scan

namespace {

// A character engine following the orbit of one point.
struct TrackedEngine {
  CharEngine engine;
  OrbitWalker walker;

  TrackedEngine(int horizon, const LevelPoint& start) : engine(horizon), walker(start) {}
  void advance(std::uint64_t steps) {
    for (std::uint64_t i = 0; i < steps; ++i) engine.apply(walker.advance());
  }
  std::span<const std::uint64_t> letter() const { return engine.row_words(0); }
};

}  // namespace

Mix3Scan mix3_scan(const ConstructionPtr& construction, int n, unsigned workers) {
  if (n < 1 || n + 1 > construction->max_tower()) throw InvalidArgument("mix3: n out of range");
  Mix3Scan scan;
  scan.n = n;
  scan.d = construction->column_start(n, 1);
  scan.D = construction->column_start(n, 2);
  const std::uint64_t first_column = construction->height(n);

  // All parity sets are expressed over the coordinates of y at the base of
  // tower n+1. Seen from x instead, they are transformed by the invertible
  // linear map carrying y at the base to y at x, which preserves rank and every
  // linear dependency, hence pattern probabilities and the xor identity.
  const LevelPoint base = make_point(construction, n + 1, 0, Extension::kError);
  scan.horizon = required_horizon(base, scan.D + first_column - 1);
  if (scan.horizon > kMaxCharHorizon) throw InvalidArgument("mix3: n too large for the character engine");

  const std::size_t tasks = std::min<std::uint64_t>(std::max(1u, workers), first_column);
  std::vector<std::vector<Mix3Row>> parts(tasks);
  const int ones[3] = {1, 1, 1};
  parallel_for(tasks, workers, [&](std::size_t t) {
    const std::uint64_t begin = first_column * t / tasks;
    const std::uint64_t end = first_column * (t + 1) / tasks;
    TrackedEngine first(scan.horizon, base), second(scan.horizon, base), third(scan.horizon, base);
    first.advance(begin);
    second.advance(begin + scan.d);
    third.advance(begin + scan.D);
    const std::size_t words = first.letter().size();
    std::vector<std::uint64_t> product(words);
    for (std::uint64_t x = begin; x < end; ++x) {
      const std::span<const std::uint64_t> letters[3] = {first.letter(), second.letter(), third.letter()};
      Mix3Row row;
      row.x_level = x;
      row.spacer = in_spacer(first.walker.point());
      row.p_triple = pattern_prob_words(letters, ones, words);
      row.p_product = DyadicProb::power_of_half(0);
      for (const auto& letter : letters) {
        row.p_product = row.p_product * pattern_prob_words(std::span(&letter, 1), std::span(ones, 1), words);
      }
      for (std::size_t w = 0; w < words; ++w) product[w] = letters[0][w] ^ letters[1][w];
      row.product_identity = std::equal(product.begin(), product.end(), letters[2].begin());
      parts[t].push_back(row);
      if (x + 1 < end) {
        first.advance(1);
        second.advance(1);
        third.advance(1);
      }
    }
  });
  scan.rows.reserve(first_column);
  for (auto& part : parts) scan.rows.insert(scan.rows.end(), part.begin(), part.end());

  TrackedEngine probe(scan.horizon, base);
  scan.column_base_chars.push_back(probe.engine.row(0));
  probe.advance(scan.d);
  scan.column_base_chars.push_back(probe.engine.row(0));
  probe.advance(scan.D - scan.d);
  scan.column_base_chars.push_back(probe.engine.row(0));
  return scan;
}

// ---------------------------------------------------------------------------
// Climb census

TripleCensus triple_block_census(int n, std::uint64_t samples, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("census: n must be >= 1");
  TripleCensus census;
  census.n = n;
  census.sampled = n > 3;
  if (census.sampled && samples == 0) throw InvalidArgument("census: n > 3 needs a sample count");

  const std::size_t block_len = std::size_t{1} << (n + 1);
  const std::uint64_t climb = pow3(n);
  const LevelPoint base = make_point(odometer3(), n + 1, 0, Extension::kError);
  const std::uint64_t total = census.sampled ? samples : (std::uint64_t{1} << block_len);
  census.samples = total;
  census.product_identity = true;

  SplitMix64 rng(seed);
  for (std::uint64_t s = 0; s < total; ++s) {
    BitVec bits(block_len);
    if (census.sampled) {
      for (auto& w : bits.words()) w = rng.next();
      if (block_len < 64) bits.words()[0] &= (std::uint64_t{1} << block_len) - 1;
    } else {
      bits.words()[0] = s;
    }
    const ColourRun run = colour_run(base, YPrefix(n + 1, std::move(bits)), 3 * climb - 1);
    std::array<std::string, 3> key;
    for (int c = 0; c < 3; ++c) {
      std::string& word = key[static_cast<std::size_t>(c)];
      word.resize(climb);
      for (std::uint64_t i = 0; i < climb; ++i) word[i] = run.colours.get(c * climb + i) ? '-' : '+';
    }
    for (std::uint64_t i = 0; i < climb; ++i) {
      if ((key[0][i] == key[1][i]) != (key[2][i] == '+')) census.product_identity = false;
    }
    for (std::size_t c = 0; c < 3; ++c) ++census.marginals[c][key[c]];
    ++census.joint[key];
  }

  if (!census.sampled) {
    census.identically_distributed =
        census.marginals[0] == census.marginals[1] && census.marginals[1] == census.marginals[2];
    bool independent = true;
    for (std::size_t i = 0; i < 3 && independent; ++i) {
      for (std::size_t j = i + 1; j < 3 && independent; ++j) {
        std::map<std::pair<std::string, std::string>, std::uint64_t> pair_counts;
        for (const auto& [key, count] : census.joint) pair_counts[{key[i], key[j]}] += count;
        if (pair_counts.size() != census.marginals[i].size() * census.marginals[j].size()) independent = false;
        for (const auto& [key, count] : pair_counts) {
          const BigInt lhs = BigInt(count) * total;
          const BigInt rhs = BigInt(census.marginals[i].at(key.first)) * census.marginals[j].at(key.second);
          if (lhs != rhs) independent = false;
        }
      }
    }
    census.pairwise_independent = independent;
  }
  return census;
}

// ---------------------------------------------------------------------------
// Monte Carlo

McEstimate mc_check(const LevelPoint& p, const EventSpec& e, std::uint64_t samples, std::uint64_t seed,
                    const McOptions& options) {
  if (samples == 0) throw InvalidArgument("mc_check: samples must be >= 1");
  const std::uint64_t window = e.max_time();
  const std::uint64_t task_size = std::max<std::uint64_t>(1, options.task_size);
  const std::size_t tasks = static_cast<std::size_t>((samples + task_size - 1) / task_size);
  std::vector<std::uint64_t> hits(tasks, 0);

  struct Orbit {
    int horizon = 0;
    std::vector<CocycleAction> actions;
  };

  parallel_for(tasks, options.workers, [&](std::size_t t) {
    SplitMix64 rng = SplitMix64::derive(seed, t);
    std::map<std::pair<int, std::uint64_t>, Orbit> orbits;
    const std::uint64_t begin = t * task_size;
    const std::uint64_t end = std::min(samples, begin + task_size);
    std::vector<std::uint64_t> y;
    for (std::uint64_t s = begin; s < end; ++s) {
      LevelPoint q = p;
      q.extension = Extension::kError;
      while (q.level + window >= q.height()) q = embed(q, static_cast<int>(rng.uniform(3)));
      auto [it, inserted] = orbits.try_emplace({q.tower, q.level});
      Orbit& orbit = it->second;
      if (inserted) {
        OrbitWalker walker(q);
        for (std::uint64_t k = 0; k < window; ++k) {
          orbit.actions.push_back(walker.advance());
          orbit.horizon = std::max(orbit.horizon, orbit.actions.back().support());
        }
      }
      y.assign(word_count(std::size_t{1} << orbit.horizon), 0);
      for (auto& w : y) w = rng.next();
      bool hit = true;
      for (std::uint64_t k = 0; k <= window && hit; ++k) {
        if (k > 0) {
          const CocycleAction& action = orbit.actions[static_cast<std::size_t>(k - 1)];
          for (int j = 1; j <= action.support(); ++j) tau_in_place(j, std::span<std::uint64_t>(y));
        }
        for (const auto& atom : e.atoms()) {
          if (atom.time == k && sign_of_bit(y[0] & 1u) != atom.sign) hit = false;
        }
      }
      if (hit) ++hits[t];
    }
  });

  McEstimate out;
  out.samples = samples;
  for (auto h : hits) out.hits += h;
  out.estimate = static_cast<double>(out.hits) / static_cast<double>(samples);
  out.standard_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(samples));
  return out;
}

}  // namespace skewmix
