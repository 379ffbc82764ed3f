#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>

#include "skewmix/blockalg.hpp"
#include "skewmix/cocycle.hpp"
#include "skewmix/errors.hpp"
#include "skewmix/exact.hpp"
#include "skewmix/mixstat.hpp"
#include "skewmix/parallel.hpp"
#include "skewmix/rankone.hpp"
#include "skewmix/rng.hpp"
#include "verify.hpp"

namespace skewmix::cli {
namespace {

// Stream indices handed to SplitMix64::derive(seed, .).
constexpr std::uint64_t kExtensionStream = 0;
constexpr std::uint64_t kPaddingStream = 1;

struct Common {
  std::string construction = "odometer3";
  std::uint64_t seed = 0;
  std::string out;
  unsigned workers = 1;
};

void add_common(CLI::App* cmd, Common& c, bool with_construction) {
  if (with_construction) {
    cmd->add_option("--construction", c.construction, "preset name or construction file")->capture_default_str();
  }
  cmd->add_option("--seed", c.seed, "64-bit seed")->capture_default_str();
  cmd->add_option("--out", c.out, "output file (default: standard output)");
  cmd->add_option("--workers", c.workers, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
}

ConstructionPtr resolve_construction(const std::string& name_or_path) {
  if (auto preset = find_preset(name_or_path)) return make_construction(*preset);
  std::ifstream in(name_or_path);
  if (!in) throw InvalidArgument("unknown construction (not a preset or readable file): " + name_or_path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return make_construction(parse_construction(text));
}

Extension parse_extension(const std::string& name) {
  if (name == "error") return Extension::kError;
  if (name == "base") return Extension::kExtendBase;
  return Extension::kExtendRandom;
}

// Whole outputs are built in memory and written once, so a failing command
// never leaves a partial file behind.
void emit(const std::string& content, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << content;
    out.flush();
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path temp = target;
  temp += ".tmp";
  {
    std::ofstream file(temp, std::ios::binary | std::ios::trunc);
    if (!file) throw InvalidArgument("cannot write " + temp.string());
    file << content;
    file.close();
    if (!file) throw InvalidArgument("cannot write " + temp.string());
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) {
    fs::remove(temp, ec);
    throw InvalidArgument("cannot rename output into place: " + path);
  }
}

std::string colour_field(int sign) { return sign > 0 ? "+1" : "-1"; }

// ---- gamma ----------------------------------------------------------------

struct GammaArgs {
  int n = 0;
  std::string block;
  std::string method = "recursive";
  bool all = false;
};

int cmd_gamma(const GammaArgs& args, const Common& common, std::ostream& out) {
  if (args.n < 1 || args.n > kMaxGammaOrder) throw InvalidArgument("--n out of range");
  std::ostringstream text;
  bool matched = true;
  auto compute = [&](const SignBlock& b) -> std::pair<std::string, std::string> {
    std::string rec, dir;
    if (args.method != "direct") rec = gamma(b.order(), b).to_string();
    if (args.method != "recursive") dir = gamma_direct(b.order(), b).to_string();
    if (args.method == "both" && rec != dir) matched = false;
    return {rec, dir};
  };

  if (args.all) {
    if (!args.block.empty()) throw InvalidArgument("--all and --block are exclusive");
    if (args.n > 4) throw InvalidArgument("--all supports n <= 4");
    text << (args.method == "both" ? "n,block,recursive,direct\n" : "n,block,gamma\n");
    for (int n = 1; n <= args.n; ++n) {
      for (std::uint64_t w = 0; w < (std::uint64_t{1} << (1u << n)); ++w) {
        const SignBlock b = SignBlock::from_word(n, w);
        const auto [rec, dir] = compute(b);
        text << n << ',' << b.to_string() << ',';
        if (args.method == "both") {
          text << rec << ',' << dir << '\n';
        } else {
          text << (args.method == "direct" ? dir : rec) << '\n';
        }
      }
    }
  } else {
    if (args.block.empty()) throw InvalidArgument("--block is required unless --all is given");
    const SignBlock b = SignBlock::parse(args.block);
    if (b.order() != args.n) throw InvalidArgument("block length must be 2^n");
    const auto [rec, dir] = compute(b);
    if (args.method == "both") {
      text << rec << '\n' << dir << '\n' << (matched ? "MATCH" : "MISMATCH") << '\n';
    } else {
      text << (args.method == "direct" ? dir : rec) << '\n';
    }
  }
  emit(text.str(), common.out, out);
  return matched ? kOk : kFailure;
}

// ---- orbit / chars ----------------------------------------------------------

struct OrbitArgs {
  int tower = 0;
  std::uint64_t level = 0;
  std::uint64_t steps = 0;
  std::string y;
  std::string extend = "random";
};

LevelPoint orbit_start(const OrbitArgs& args, const Common& common) {
  const ConstructionPtr c = resolve_construction(common.construction);
  if (args.tower < 1 || args.tower > c->max_tower()) throw InvalidArgument("--tower out of range");
  return make_point(c, args.tower, args.level, parse_extension(args.extend),
                    SplitMix64::derive(common.seed, kExtensionStream).next());
}

// The --y literal, padded with seeded random coordinates up to `horizon`.
YPrefix orbit_prefix(const std::string& literal, int horizon, std::uint64_t seed) {
  BitVec given;
  int given_horizon = 0;
  if (!literal.empty()) {
    const SignBlock b = SignBlock::parse(literal);
    given = b.bits();
    given_horizon = b.order();
  }
  const int h = std::max(horizon, given_horizon);
  BitVec bits(std::size_t{1} << h);
  SplitMix64 rng = SplitMix64::derive(seed, kPaddingStream);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const bool random = rng.next() & 1u;
    bits.set(i, i < given.size() ? given.get(i) : random);
  }
  return YPrefix(h, bits);
}

// n(x) of the current point, or -1 when the extension policy cannot resolve it.
int n_of_x_field(const LevelPoint& p) {
  try {
    return n_of_x(p);
  } catch (const TopOfTower&) {
    return -1;
  }
}

template <typename Field>
std::string orbit_table(const LevelPoint& start, std::uint64_t steps, const char* last_column, Field&& field) {
  std::ostringstream text;
  text << "k,level,tower,n_of_x," << last_column << '\n';
  OrbitWalker walker(start);
  for (std::uint64_t k = 0; k <= steps; ++k) {
    const LevelPoint& p = walker.point();
    text << k << ',' << p.level << ',' << p.tower << ',' << n_of_x_field(p) << ',' << field(k) << '\n';
    if (k < steps) walker.advance();
  }
  return text.str();
}

int cmd_orbit(const OrbitArgs& args, const Common& common, std::ostream& out) {
  const LevelPoint start = orbit_start(args, common);
  const int horizon = required_horizon(start, args.steps);
  const YPrefix y = orbit_prefix(args.y, horizon, common.seed);
  const ColourRun run = colour_run(start, y, args.steps);
  emit(orbit_table(start, args.steps, "colour", [&](std::uint64_t k) { return colour_field(run.colour(k)); }),
       common.out, out);
  return kOk;
}

int cmd_chars(const OrbitArgs& args, const Common& common, std::ostream& out) {
  const LevelPoint start = orbit_start(args, common);
  const std::vector<CharSet> chars = char_run(start, args.steps);
  emit(orbit_table(start, args.steps, "charset", [&](std::uint64_t k) { return chars[k].to_string(); }), common.out,
       out);
  return kOk;
}

// ---- mix2 -------------------------------------------------------------------

struct Mix2Args {
  int tower = 0;
  std::string a;
  std::string b;
  std::uint64_t kmin = 0;
  std::uint64_t kmax = 0;
  bool exact = false;
  std::string mode = "exact";
  std::uint64_t samples = 1000;
  int max_depth = 4;
};

// Joint counts over shared samples: per level, every k reuses the same
// (columns, y) draws. Deviations are exact rationals of the counts.
MixCurve mix2_mc_curve(const ConstructionPtr& c, int tower, const EventSpec& a, const EventSpec& b,
                       const Mix2Args& args, const Common& common) {
  const std::uint64_t h = c->height(tower);
  const std::uint64_t window = std::max(a.max_time(), args.kmax + b.max_time());
  const std::size_t ks = static_cast<std::size_t>(args.kmax - args.kmin + 1);
  std::vector<std::vector<Rational>> devs(h);
  parallel_for(h, common.workers, [&](std::size_t level) {
    SplitMix64 rng = SplitMix64::derive(common.seed, level);
    std::uint64_t n_a = 0;
    std::vector<std::uint64_t> n_b(ks, 0), n_ab(ks, 0);
    std::map<std::pair<int, std::uint64_t>, int> horizons;
    auto holds = [](const ColourRun& run, const EventSpec& e, std::uint64_t shift) {
      return std::all_of(e.atoms().begin(), e.atoms().end(),
                         [&](const EventAtom& atom) { return run.colour(atom.time + shift) == atom.sign; });
    };
    for (std::uint64_t s = 0; s < args.samples; ++s) {
      LevelPoint q = make_point(c, tower, level);
      while (q.level + window >= q.height()) q = embed(q, static_cast<int>(rng.uniform(3)));
      auto [it, inserted] = horizons.try_emplace({q.tower, q.level}, 0);
      if (inserted) it->second = required_horizon(q, window);
      BitVec bits(std::size_t{1} << it->second);
      for (std::size_t i = 0; i < bits.size(); ++i) bits.set(i, rng.next() & 1u);
      const ColourRun run = colour_run(q, YPrefix(it->second, bits), window);
      const bool in_a = holds(run, a, 0);
      n_a += in_a;
      for (std::size_t i = 0; i < ks; ++i) {
        const bool in_b = holds(run, b, args.kmin + i);
        n_b[i] += in_b;
        n_ab[i] += in_a && in_b;
      }
    }
    const BigInt total(args.samples);
    devs[level].resize(ks);
    for (std::size_t i = 0; i < ks; ++i) {
      Rational dev{BigInt{n_ab[i]} * total - BigInt{n_a} * BigInt{n_b[i]}, total * total};
      devs[level][i] = dev < 0 ? Rational(-dev) : dev;
    }
  });
  MixCurve curve{tower, {}};
  curve.rows.resize(ks);
  for (std::size_t i = 0; i < ks; ++i) {
    MixCurveRow& row = curve.rows[i];
    row.k = args.kmin + i;
    Rational sum = 0;
    for (const auto& d : devs) {
      sum += d[i];
      if (d[i] > row.max_dev) row.max_dev = d[i];
      row.nonzero_x_count += d[i] != 0;
    }
    row.mean_dev = sum / Rational(BigInt(h));
  }
  return curve;
}

int cmd_mix2(const Mix2Args& args, const Common& common, std::ostream& out) {
  const ConstructionPtr c = resolve_construction(common.construction);
  if (args.tower < 1 || args.tower > c->max_tower()) throw InvalidArgument("--tower out of range");
  if (args.kmin > args.kmax) throw InvalidArgument("--kmin exceeds --kmax");
  if (args.mode == "mc" && args.exact) throw InvalidArgument("--exact requires --mode exact");
  if (args.samples == 0) throw InvalidArgument("--samples must be >= 1");
  const EventSpec a = EventSpec::parse(args.a);
  const EventSpec b = EventSpec::parse(args.b);

  MixCurve curve;
  if (args.mode == "mc") {
    curve = mix2_mc_curve(c, args.tower, a, b, args, common);
  } else {
    Mix2Options options;
    options.kmin = args.kmin;
    options.exact.max_extension_depth = args.max_depth;
    options.workers = common.workers;
    curve = mix2_curve(c, args.tower, a, b, args.kmax, options);
  }

  std::ostringstream text;
  text << "k,mean_dev,max_dev,nonzero_x_count" << (args.exact ? ",mean_dev_rat" : "") << '\n';
  for (const MixCurveRow& row : curve.rows) {
    text << row.k << ',' << to_decimal(row.mean_dev) << ',' << to_decimal(row.max_dev) << ','
         << row.nonzero_x_count;
    if (args.exact) text << ',' << to_fraction(row.mean_dev);
    text << '\n';
  }
  emit(text.str(), common.out, out);
  return kOk;
}

// ---- mix3 -------------------------------------------------------------------

struct Mix3Args {
  int n_min = 1;
  int n_max = 1;
  std::string spacers_out;
};

void mix3_row(std::ostringstream& text, int n, const Mix3Row& row) {
  auto fraction = [](const DyadicProb& p) {
    const std::string f = to_fraction(p.value());
    return f.substr(0, f.find('/')) + ',' + f.substr(f.find('/') + 1);
  };
  text << n << ',' << row.x_level << ',' << fraction(row.p_triple) << ',' << fraction(row.p_product) << '\n';
}

int cmd_mix3(const Mix3Args& args, const Common& common, std::ostream& out, std::ostream& err) {
  const ConstructionPtr c = resolve_construction(common.construction);
  if (args.n_min < 1 || args.n_min > args.n_max) throw InvalidArgument("need 1 <= --n-min <= --n-max");
  constexpr const char* kHeader = "n,x_level,p_triple_num,p_triple_den,p_product_num,p_product_den\n";
  std::ostringstream text, spacers;
  text << kHeader;
  spacers << kHeader;
  for (int n = args.n_min; n <= args.n_max; ++n) {
    const Mix3Scan scan = mix3_scan(c, n, common.workers);
    std::uint64_t spacer_rows = 0;
    for (const Mix3Row& row : scan.rows) {
      if (row.spacer) {
        ++spacer_rows;
        mix3_row(spacers, n, row);
      } else {
        mix3_row(text, n, row);
      }
    }
    if (spacer_rows > 0) err << "mix3: n=" << n << ": " << spacer_rows << " spacer levels reported separately\n";
  }
  emit(text.str(), common.out, out);
  if (!args.spacers_out.empty()) emit(spacers.str(), args.spacers_out, out);
  return kOk;
}

// ---- verify -----------------------------------------------------------------

int cmd_verify(const std::string& suite, int max_n, const Common& common, std::ostream& out) {
  if (max_n < 1) throw InvalidArgument("--max-n must be >= 1");
  const std::vector<CheckResult> results = run_suite(suite, max_n);
  std::ostringstream text;
  std::size_t passed = 0;
  for (const CheckResult& r : results) {
    text << r.name << ": " << (r.passed ? "PASS" : "FAIL");
    if (!r.passed) text << " (" << r.detail << ')';
    text << '\n';
    passed += r.passed;
  }
  text << passed << '/' << results.size() << " checks passed\n";
  emit(text.str(), common.out, out);
  return passed == results.size() ? kOk : kFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulator for a rank-one skew product that is relatively twofold but not threefold mixing"};
  app.require_subcommand(1);

  Common common;
  std::string suite = "all";
  int max_n = 4;
  CLI::App* verify = app.add_subcommand("verify", "run invariant suites");
  verify->add_option("--suite", suite)->check(CLI::IsMember({"blockalg", "cocycle", "mixstat", "all"}))
      ->capture_default_str();
  verify->add_option("--max-n", max_n)->capture_default_str();
  add_common(verify, common, false);

  GammaArgs gamma_args;
  CLI::App* gamma_cmd = app.add_subcommand("gamma", "colour word of a block");
  gamma_cmd->add_option("--n", gamma_args.n)->required();
  gamma_cmd->add_option("--block", gamma_args.block, "block literal over {+,-}");
  gamma_cmd->add_option("--method", gamma_args.method)
      ->check(CLI::IsMember({"recursive", "direct", "both"}))
      ->capture_default_str();
  gamma_cmd->add_flag("--all", gamma_args.all, "every block of order 1..n as CSV");
  add_common(gamma_cmd, common, false);

  OrbitArgs orbit_args;
  auto add_orbit = [&](const char* name, const char* help) {
    CLI::App* cmd = app.add_subcommand(name, help);
    cmd->add_option("--tower", orbit_args.tower)->required();
    cmd->add_option("--level", orbit_args.level)->capture_default_str();
    cmd->add_option("--steps", orbit_args.steps)->required();
    cmd->add_option("--extend", orbit_args.extend, "policy at the top of the simulated tower")
        ->check(CLI::IsMember({"error", "base", "random"}))
        ->capture_default_str();
    add_common(cmd, common, true);
    return cmd;
  };
  CLI::App* orbit = add_orbit("orbit", "colours along a skew orbit");
  orbit->add_option("--y", orbit_args.y, "leading y-coordinates; the rest are seeded random");
  CLI::App* chars = add_orbit("chars", "parity sets along a skew orbit");

  Mix2Args mix2_args;
  CLI::App* mix2 = app.add_subcommand("mix2", "twofold deviation curve");
  mix2->add_option("--tower", mix2_args.tower)->required();
  mix2->add_option("--a", mix2_args.a, "event, e.g. 0:+,1:-")->required();
  mix2->add_option("--b", mix2_args.b, "event, e.g. 0:+")->required();
  mix2->add_option("--kmin", mix2_args.kmin)->capture_default_str();
  mix2->add_option("--kmax", mix2_args.kmax)->required();
  mix2->add_flag("--exact", mix2_args.exact, "add mean_dev_rat as num/den");
  mix2->add_option("--mode", mix2_args.mode)->check(CLI::IsMember({"exact", "mc"}))->capture_default_str();
  mix2->add_option("--samples", mix2_args.samples, "samples per level in mc mode")->capture_default_str();
  mix2->add_option("--max-depth", mix2_args.max_depth, "extension averaging depth")->capture_default_str();
  add_common(mix2, common, true);

  Mix3Args mix3_args;
  CLI::App* mix3 = app.add_subcommand("mix3", "threefold scan over the first column");
  mix3->add_option("--n-min", mix3_args.n_min)->capture_default_str();
  mix3->add_option("--n-max", mix3_args.n_max)->capture_default_str();
  mix3->add_option("--spacers-out", mix3_args.spacers_out, "file for spacer-level rows");
  add_common(mix3, common, true);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*verify) return cmd_verify(suite, max_n, common, out);
    if (*gamma_cmd) return cmd_gamma(gamma_args, common, out);
    if (*orbit) return cmd_orbit(orbit_args, common, out);
    if (*chars) return cmd_chars(orbit_args, common, out);
    if (*mix2) return cmd_mix2(mix2_args, common, out);
    if (*mix3) return cmd_mix3(mix3_args, common, out, err);
  } catch (const InvariantViolation& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace skewmix::cli
