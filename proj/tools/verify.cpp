#include "verify.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <sstream>

#include "skewmix/blockalg.hpp"
#include "skewmix/cocycle.hpp"
#include "skewmix/errors.hpp"
#include "skewmix/mixstat.hpp"
#include "skewmix/rankone.hpp"
#include "skewmix/rng.hpp"

namespace skewmix::cli {
namespace {

// Fixed so that `verify` output never depends on flags other than max_n.
constexpr std::uint64_t kSeed = 0x5EED;

BitVec random_bits(std::size_t size, SplitMix64& rng) {
  BitVec bits(size);
  for (std::size_t i = 0; i < size; ++i) bits.set(i, rng.next() & 1u);
  return bits;
}

SignBlock random_block(int order, SplitMix64& rng) {
  return SignBlock(order, random_bits(std::size_t{1} << order, rng));
}

YPrefix random_prefix(int horizon, SplitMix64& rng) {
  return YPrefix(horizon, random_bits(std::size_t{1} << horizon, rng));
}

// Thrown by checks to report a counterexample.
struct Failed {
  std::string detail;
};

void require(bool condition, const std::string& what) {
  if (!condition) throw Failed{what};
}

using Check = std::function<void()>;

CheckResult run_check(std::string name, const Check& check) {
  CheckResult result{std::move(name), false, {}};
  try {
    check();
    result.passed = true;
  } catch (const Failed& f) {
    result.detail = f.detail;
  } catch (const std::exception& e) {
    result.detail = std::string("exception: ") + e.what();
  }
  return result;
}

// ---- blockalg -------------------------------------------------------------

void blockalg_suite(int max_n, std::vector<CheckResult>& out) {
  out.push_back(run_check("gamma_base_case", [] {
    for (std::uint64_t w = 0; w < 4; ++w) {
      const SignBlock b = SignBlock::from_word(1, w);
      const ColourWord c = gamma(1, b);
      require(c.sign(0) == b.sign(0) && c.sign(1) == b.sign(1) && c.sign(2) == b.sign(0) * b.sign(1),
              "gamma_1(" + b.to_string() + ") = " + c.to_string());
    }
  }));

  out.push_back(run_check("tau_order3", [max_n] {
    for (int n = 1; n <= std::min(max_n, 4); ++n) {
      for (std::uint64_t w = 0; w < (std::uint64_t{1} << (1u << n)); ++w) {
        const YPrefix y = YPrefix::from_block(SignBlock::from_word(n, w));
        require(tau(n, tau(n, tau(n, y))) == y, "n=" + std::to_string(n) + " y=" + y.to_string());
      }
    }
    SplitMix64 rng(kSeed);
    for (int n = 1; n <= std::min(max_n, 10); ++n) {
      for (int i = 0; i < 100; ++i) {
        const YPrefix y = random_prefix(n + 1, rng);
        require(tau(n, tau(n, tau(n, y))) == y, "random n=" + std::to_string(n));
      }
    }
  }));

  out.push_back(run_check("tau_bijection", [max_n] {
    for (int n = 1; n <= std::min(max_n, 4); ++n) {
      std::set<std::string> images;
      const std::uint64_t count = std::uint64_t{1} << (1u << n);
      for (std::uint64_t w = 0; w < count; ++w) {
        images.insert(tau(n, YPrefix::from_block(SignBlock::from_word(n, w))).to_string());
      }
      require(images.size() == count, "n=" + std::to_string(n));
    }
  }));

  out.push_back(run_check("tau_linear", [max_n] {
    SplitMix64 rng(kSeed + 1);
    for (int n = 1; n <= std::min(max_n, 8); ++n) {
      for (int i = 0; i < 50; ++i) {
        const YPrefix a = random_prefix(n, rng);
        const YPrefix b = random_prefix(n, rng);
        const YPrefix ab(n, a.bits() ^ b.bits());
        require(tau(n, ab).bits() == (tau(n, a).bits() ^ tau(n, b).bits()), "n=" + std::to_string(n));
      }
    }
  }));

  out.push_back(run_check("split_concat", [max_n] {
    SplitMix64 rng(kSeed + 2);
    for (int n = 1; n <= std::min(max_n, 8); ++n) {
      for (int i = 0; i < 20; ++i) {
        const SignBlock b = random_block(n, rng);
        const auto [lo, hi] = split(b);
        require(concat(lo, hi) == b, "n=" + std::to_string(n));
      }
    }
  }));

  out.push_back(run_check("gamma_product", [max_n] {
    for (int n = 1; n <= std::min(max_n, 3); ++n) {
      const std::uint64_t count = std::uint64_t{1} << (1u << n);
      std::vector<ColourWord> table;
      table.reserve(count);
      for (std::uint64_t w = 0; w < count; ++w) table.push_back(gamma(n, SignBlock::from_word(n, w)));
      for (std::uint64_t a = 0; a < count; ++a) {
        for (std::uint64_t b = 0; b < count; ++b) {
          require(table[a ^ b] == termwise_product(table[a], table[b]), "n=" + std::to_string(n));
        }
      }
    }
    SplitMix64 rng(kSeed + 3);
    for (int n = 1; n <= std::min(max_n, 8); ++n) {
      for (int i = 0; i < 100; ++i) {
        const SignBlock a = random_block(n, rng);
        const SignBlock b = random_block(n, rng);
        require(gamma(n, termwise_product(a, b)) == termwise_product(gamma(n, a), gamma(n, b)),
                "random n=" + std::to_string(n));
      }
    }
  }));

  out.push_back(run_check("gamma_recursion", [max_n] {
    SplitMix64 rng(kSeed + 4);
    for (int n = 1; n < std::min(max_n, 8); ++n) {
      for (int i = 0; i < 20; ++i) {
        const SignBlock w = random_block(n + 1, rng);
        const auto [w1, w2] = split(w);
        const std::string expected =
            gamma(n, w1).to_string() + gamma(n, w2).to_string() + gamma(n, termwise_product(w1, w2)).to_string();
        require(gamma(n + 1, w).to_string() == expected, "n=" + std::to_string(n + 1));
      }
    }
  }));
}

// ---- cocycle --------------------------------------------------------------

// Follows (p, y) for `steps` skew steps on concrete coordinates.
YPrefix advance_concrete(const LevelPoint& p, YPrefix y, std::uint64_t steps) {
  OrbitWalker walker(p);
  for (std::uint64_t k = 0; k < steps; ++k) apply(walker.advance(), y.mutable_bits());
  return y;
}

void cocycle_suite(int max_n, std::vector<CheckResult>& out) {
  out.push_back(run_check("heights", [] {
    const ConstructionPtr chacon = make_construction(*find_preset("chacon"));
    const std::uint64_t expected[] = {1, 4, 13, 40};
    for (int n = 1; n <= 4; ++n) require(chacon->height(n) == expected[n - 1], "chacon h" + std::to_string(n));
    for (int n = 1; n <= 12; ++n) require(odometer3()->height(n) == pow3(n), "odometer h" + std::to_string(n));
  }));

  out.push_back(run_check("locate_roundtrip", [max_n] {
    for (const char* name : {"odometer3", "chacon"}) {
      const ConstructionPtr c = make_construction(*find_preset(name));
      for (int tower = 2; tower <= std::min(max_n + 1, 6); ++tower) {
        for (std::uint64_t level = 0; level < c->height(tower); ++level) {
          const LevelPoint p = make_point(c, tower, level);
          const ClimbPosition pos = locate(p, tower - 1);
          if (pos.is_spacer()) continue;
          require(c->column_start(tower - 1, pos.column) + pos.offset == level,
                  std::string(name) + " level " + std::to_string(level));
        }
      }
    }
  }));

  out.push_back(run_check("composition_order", [max_n] {
    SplitMix64 rng(kSeed + 5);
    for (int n = 1; n <= std::min(max_n, 8); ++n) {
      const YPrefix y = random_prefix(n, rng);
      YPrefix manual = y;
      for (int i = 1; i <= n; ++i) manual = tau(i, manual);
      require(apply(CocycleAction::composite(n), y) == manual, "n=" + std::to_string(n));
    }
  }));

  out.push_back(run_check("gamma_oracle_equivalence", [max_n] {
    for (int n = 1; n <= std::min(max_n, 4); ++n) {
      for (std::uint64_t w = 0; w < (std::uint64_t{1} << (1u << n)); ++w) {
        const SignBlock b = SignBlock::from_word(n, w);
        require(gamma_direct(n, b) == gamma(n, b), "n=" + std::to_string(n) + " block " + b.to_string());
      }
    }
    SplitMix64 rng(kSeed + 6);
    for (int n = 5; n <= std::min(max_n, 8); ++n) {
      for (int i = 0; i < 10; ++i) {
        const SignBlock b = random_block(n, rng);
        require(gamma_direct(n, b) == gamma(n, b), "random n=" + std::to_string(n));
      }
    }
  }));

  out.push_back(run_check("lemma_tau_next", [max_n] {
    // Concrete: 3^n steps from the first two column bases of tower n+1.
    for (int n = 1; n <= std::min(max_n, 3); ++n) {
      for (int column = 0; column < 2; ++column) {
        const LevelPoint base = make_point(odometer3(), n + 1, odometer3()->column_start(n, column));
        for (std::uint64_t w = 0; w < (std::uint64_t{1} << (2u << n)); ++w) {
          const YPrefix y = YPrefix::from_block(SignBlock::from_word(n + 1, w));
          require(advance_concrete(base, y, pow3(n)) == tau(n + 1, y),
                  "n=" + std::to_string(n) + " column " + std::to_string(column));
        }
      }
    }
    // Symbolic: both maps are linear, so comparing matrices covers every y.
    for (int n = 1; n <= std::min(max_n, 10); ++n) {
      for (int column = 0; column < 2; ++column) {
        OrbitWalker walker(make_point(odometer3(), n + 1, odometer3()->column_start(n, column)));
        CharEngine engine(n + 1);
        for (std::uint64_t k = 0; k < pow3(n); ++k) engine.apply(walker.advance());
        const std::size_t size = std::size_t{1} << (n + 1);
        for (std::size_t j = 0; j < size; ++j) {
          BitVec unit(size);
          unit.set(j, true);
          tau_in_place(n + 1, unit);
          for (std::size_t i = 0; i < size; ++i) {
            require(engine.row(i).contains(j) == unit.get(i), "matrix n=" + std::to_string(n));
          }
        }
      }
    }
  }));

  out.push_back(run_check("char_concrete_agreement", [max_n] {
    SplitMix64 rng(kSeed + 7);
    for (const char* name : {"odometer3", "chacon"}) {
      const ConstructionPtr c = make_construction(*find_preset(name));
      const int tower = std::min(max_n + 2, 7);
      for (int i = 0; i < 20; ++i) {
        LevelPoint p = sample_point(c, tower, rng, Extension::kExtendRandom);
        p.rng = SplitMix64(rng.next());
        const std::uint64_t steps = rng.uniform(200);
        const std::vector<CharSet> chars = char_run(p, steps);
        const YPrefix y = random_prefix(chars.front().horizon(), rng);
        const ColourRun run = colour_run(p, y, steps);
        for (std::uint64_t k = 0; k <= steps; ++k) {
          require(chars[k].evaluate(y) == run.colour(k), std::string(name) + " k=" + std::to_string(k));
          require(!chars[k].empty(), std::string(name) + " empty S_" + std::to_string(k));
        }
      }
    }
  }));
}

// ---- mixstat --------------------------------------------------------------

DyadicProb brute_pattern_prob(const std::vector<CharSet>& chars, const std::vector<int>& signs, int horizon) {
  const std::size_t size = std::size_t{1} << horizon;
  std::uint64_t hits = 0;
  const std::uint64_t total = std::uint64_t{1} << size;
  for (std::uint64_t w = 0; w < total; ++w) {
    BitVec bits(size);
    for (std::size_t i = 0; i < size; ++i) bits.set(i, (w >> i) & 1u);
    const YPrefix y(horizon, bits);
    bool all = true;
    for (std::size_t j = 0; j < chars.size() && all; ++j) all = chars[j].evaluate(y) == signs[j];
    hits += all;
  }
  if (hits == 0) return DyadicProb::zero();
  int r = 0;
  while ((hits << r) < total) ++r;
  require((hits << r) == total, "non-dyadic brute-force count");
  return DyadicProb::power_of_half(r);
}

void mixstat_suite(int max_n, std::vector<CheckResult>& out) {
  out.push_back(run_check("pattern_prob_bruteforce", [max_n] {
    SplitMix64 rng(kSeed + 8);
    for (int m = 0; m <= std::min(max_n, 3); ++m) {
      for (int i = 0; i < 50; ++i) {
        const std::size_t count = 1 + rng.uniform(5);
        std::vector<CharSet> chars;
        std::vector<int> signs;
        for (std::size_t j = 0; j < count; ++j) {
          chars.emplace_back(m, random_bits(std::size_t{1} << m, rng));
          signs.push_back(rng.next() & 1u ? -1 : +1);
        }
        require(pattern_prob(chars, signs) == brute_pattern_prob(chars, signs, m), "M=" + std::to_string(m));
      }
    }
  }));

  out.push_back(run_check("marginal_half", [max_n] {
    SplitMix64 rng(kSeed + 9);
    const EventSpec plus = EventSpec::parse("0:+");
    for (const char* name : {"odometer3", "chacon"}) {
      const ConstructionPtr c = make_construction(*find_preset(name));
      for (int i = 0; i < 20; ++i) {
        const LevelPoint p = sample_point(c, std::min(max_n + 2, 6), rng, Extension::kExtendRandom);
        require(event_prob_given_x(p, plus) == Rational(1, 2), std::string(name) + " level " + std::to_string(p.level));
      }
    }
  }));

  out.push_back(run_check("pairwise_single_letter", [max_n] {
    const EventSpec a = EventSpec::parse("0:+");
    const int tower = std::min(max_n + 1, 5);
    Mix2Options options;
    options.kmin = 1;
    const MixCurve curve = mix2_curve(odometer3(), tower, a, a, 40, options);
    for (const MixCurveRow& row : curve.rows) require(row.max_dev == 0, "k=" + std::to_string(row.k));
  }));

  out.push_back(run_check("threefold_defect_odometer", [max_n] {
    for (int n = 1; n <= std::min(max_n, 10); ++n) {
      const Mix3Scan scan = mix3_scan(odometer3(), n);
      for (const Mix3Row& row : scan.rows) {
        require(row.p_triple == DyadicProb::power_of_half(2) && row.p_product == DyadicProb::power_of_half(3) &&
                    row.product_identity,
                "n=" + std::to_string(n) + " x=" + std::to_string(row.x_level));
      }
    }
  }));

  out.push_back(run_check("threefold_defect_chacon", [max_n] {
    const ConstructionPtr chacon = make_construction(*find_preset("chacon"));
    for (int n = 1; n <= std::min(max_n, 6); ++n) {
      const Mix3Scan scan = mix3_scan(chacon, n);
      for (const Mix3Row& row : scan.rows) {
        if (row.spacer) continue;
        require(row.p_triple == DyadicProb::power_of_half(2), "n=" + std::to_string(n) + " x=" + std::to_string(row.x_level));
      }
    }
  }));

  out.push_back(run_check("triple_census", [max_n] {
    for (int n = 1; n <= std::min(max_n, 3); ++n) {
      const TripleCensus census = triple_block_census(n);
      require(census.identically_distributed.value_or(false), "identical n=" + std::to_string(n));
      require(census.pairwise_independent.value_or(false), "pairwise n=" + std::to_string(n));
      require(census.product_identity, "product n=" + std::to_string(n));
    }
  }));

  out.push_back(run_check("mc_exact_agreement", [max_n] {
    SplitMix64 rng(kSeed + 10);
    const EventSpec e = EventSpec::parse("0:+,1:+,4:-");
    for (int i = 0; i < 5; ++i) {
      const LevelPoint p = sample_point(odometer3(), std::min(max_n + 1, 5), rng, Extension::kExtendRandom);
      const double exact = event_prob_given_x(p, e).convert_to<double>();
      const McEstimate mc = mc_check(p, e, 20000, rng.next());
      const double tolerance = 5 * std::max(mc.standard_error, 1e-3);
      require(std::abs(mc.estimate - exact) <= tolerance, "level " + std::to_string(p.level));
    }
  }));
}

}  // namespace

std::vector<CheckResult> run_suite(std::string_view suite, int max_n) {
  if (max_n < 1) throw InvalidArgument("max_n must be >= 1");
  std::vector<CheckResult> results;
  const bool all = suite == "all";
  if (!all && suite != "blockalg" && suite != "cocycle" && suite != "mixstat") {
    throw InvalidArgument("unknown suite: " + std::string(suite));
  }
  if (all || suite == "blockalg") blockalg_suite(max_n, results);
  if (all || suite == "cocycle") cocycle_suite(max_n, results);
  if (all || suite == "mixstat") mixstat_suite(max_n, results);
  return results;
}

}  // namespace skewmix::cli
