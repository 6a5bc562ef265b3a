#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "ucode/codec.hpp"
#include "ucode/error.hpp"
#include "ucode/genparam.hpp"
#include "ucode/integer_codes.hpp"
#include "ucode/measures.hpp"
#include "ucode/numeric.hpp"
#include "ucode/rng.hpp"

namespace ucode {

/// Fixed-point scale for serialized −log₂ values: denominators are 2^32.
inline constexpr unsigned kLogFracBits = 32;

// ---------------------------------------------------------------------------
// Source measures for experiments
// ---------------------------------------------------------------------------

using GenParamHashed = GenParamSource<HashedDigits>;

/// Data-generating measure: exact, or GenParam with bracketed probabilities.
using TrueMeasure = std::variant<AnyMeasure, GenParamHashed>;

namespace detail {

// Running P(xⁿ) bracket of the true measure.
class TruthTracker {
 public:
  explicit TruthTracker(const TrueMeasure& m) : m_(&m) {}

  void push(Symbol s) {
    if (const auto* exact = std::get_if<AnyMeasure>(m_)) {
      const Prob c = exact->conditional(stats_, s);
      bracket_.lo *= c;
      bracket_.hi = bracket_.lo;
      stats_.push(s);
    } else {
      bracket_ *= std::get<GenParamHashed>(*m_).conditional(index_, s);
      index_.push(s);
    }
  }

  [[nodiscard]] const ProbInterval& bracket() const noexcept { return bracket_; }

 private:
  const TrueMeasure* m_;
  PrefixStats stats_;
  StringIndexer index_;
  ProbInterval bracket_;
};

}  // namespace detail

/// Thrown internally when an interval-valued probability cannot decide a
/// comparison at the current precision.
struct AmbiguousAtPrecision {};

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

struct TrajectoryRow {
  std::uint64_t n = 0;
  std::uint64_t code_len = 0;
  ProbInterval true_prob;  // P_θ(xⁿ); lo == hi for exact measures
  Prob mixture_prob;       // P(xⁿ) under the designated mixture
  bool barron_violation = false;  // code_len + log₂ P_θ(xⁿ) ≤ 0

  /// −log₂ P_θ(xⁿ) with kLogFracBits fractional bits (bracket midpoint for GenParam).
  [[nodiscard]] std::int64_t neg_log_true_fixed() const {
    if (true_prob.lo == true_prob.hi) return neg_log2_fixed(true_prob.lo, kLogFracBits);
    return neg_log2_fixed(Prob(true_prob.lo.num * true_prob.hi.den + true_prob.hi.num * true_prob.lo.den,
                               2 * true_prob.lo.den * true_prob.hi.den),
                          kLogFracBits);
  }
  [[nodiscard]] std::int64_t neg_log_mixture_fixed() const { return neg_log2_fixed(mixture_prob, kLogFracBits); }
  /// Shannon redundancy code_len − (−log₂ P_θ) scaled by 2^kLogFracBits.
  [[nodiscard]] std::int64_t shannon_red_fixed() const {
    return static_cast<std::int64_t>(code_len) * (std::int64_t{1} << kLogFracBits) - neg_log_true_fixed();
  }

  friend bool operator==(const TrajectoryRow& a, const TrajectoryRow& b) {
    return a.n == b.n && a.code_len == b.code_len && a.true_prob.lo == b.true_prob.lo &&
           a.true_prob.hi == b.true_prob.hi && a.mixture_prob == b.mixture_prob &&
           a.barron_violation == b.barron_violation;
  }
};

struct RedundancyTrajectory {
  std::string codec;
  std::vector<TrajectoryRow> rows;
};

namespace detail {

// Decides code_len + log₂ P ≤ 0 for a bracketed P.
inline bool decide_violation(const ProbInterval& p, std::uint64_t code_len) {
  if (at_most_pow2_inverse(p.hi, code_len)) return true;
  if (p.lo == p.hi || !at_most_pow2_inverse(p.lo, code_len)) return false;
  throw AmbiguousAtPrecision{};
}

inline void require_positive_mass(const ProbInterval& p, const Prob& mix, std::uint64_t n) {
  if (p.hi.is_zero() || mix.is_zero())
    fail(ErrorCode::zero_mass_prefix, "prefix of length " + std::to_string(n) + " has zero mass");
}

// Calls visit(row) for every prefix, one row per codec in order.
template <typename Visit>
void scan_prefixes(std::span<const AnyCodec* const> codecs, const TrueMeasure& truth, const AnyMeasure& mixture,
                   std::span<const Symbol> x, Visit&& visit) {
  std::vector<AnyCodec::Tracker> trackers;
  trackers.reserve(codecs.size());
  for (const AnyCodec* c : codecs) trackers.push_back(c->tracker());
  TruthTracker true_tracker(truth);
  PrefixStats mix_stats;
  Prob mix_prob;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Symbol s = x[i];
    true_tracker.push(s);
    mix_prob *= mixture.conditional(mix_stats, s);
    mix_stats.push(s);
    require_positive_mass(true_tracker.bracket(), mix_prob, i + 1);
    for (std::size_t c = 0; c < codecs.size(); ++c) {
      trackers[c].push(s);
      TrajectoryRow row;
      row.n = i + 1;
      row.code_len = trackers[c].length();
      row.barron_violation = decide_violation(true_tracker.bracket(), row.code_len);
      visit(c, row, true_tracker.bracket(), mix_prob);
    }
  }
}

template <typename Fn>
auto with_precision_retry(const TrueMeasure& truth, unsigned max_precision, Fn&& fn) {
  if (std::holds_alternative<AnyMeasure>(truth)) return fn(truth);
  const auto& src = std::get<GenParamHashed>(truth);
  for (unsigned p = src.precision();; p = std::min(max_precision, 2 * p)) {
    try {
      return fn(TrueMeasure(src.with_precision(p)));
    } catch (const AmbiguousAtPrecision&) {
      if (p >= max_precision)
        fail(ErrorCode::precision_exhausted, "violation undecided at precision " + std::to_string(p));
    }
  }
}

}  // namespace detail

inline constexpr unsigned kDefaultMaxPrecision = 1024;

/// Per-prefix code lengths and probabilities of x. Only length functions are
/// used; no codeword is materialized.
inline RedundancyTrajectory trajectory(const AnyCodec& codec, const TrueMeasure& truth, const AnyMeasure& mixture,
                                       std::span<const Symbol> x, unsigned max_precision = kDefaultMaxPrecision) {
  return detail::with_precision_retry(truth, max_precision, [&](const TrueMeasure& t) {
    RedundancyTrajectory out{codec.name(), {}};
    out.rows.reserve(x.size());
    const AnyCodec* codecs[] = {&codec};
    detail::scan_prefixes(codecs, t, mixture, x,
                          [&](std::size_t, TrajectoryRow& row, const ProbInterval& p, const Prob& mix) {
                            row.true_prob = p;
                            row.mixture_prob = mix;
                            out.rows.push_back(std::move(row));
                          });
    return out;
  });
}

/// Prefix lengths n at which code_len(n) + log₂ P(xⁿ) ≤ 0.
inline std::vector<std::uint64_t> barron_violations(const AnyCodec& codec, const TrueMeasure& measure,
                                                    std::span<const Symbol> x,
                                                    unsigned max_precision = kDefaultMaxPrecision) {
  // The mixture only feeds report columns; the measure itself stands in when exact.
  const AnyMeasure mixture = std::holds_alternative<AnyMeasure>(measure) ? std::get<AnyMeasure>(measure)
                                                                          : AnyMeasure(GeometricMixture{});
  return detail::with_precision_retry(measure, max_precision, [&](const TrueMeasure& t) {
    std::vector<std::uint64_t> out;
    const AnyCodec* codecs[] = {&codec};
    detail::scan_prefixes(codecs, t, mixture, x, [&](std::size_t, const TrajectoryRow& row, const auto&, const auto&) {
      if (row.barron_violation) out.push_back(row.n);
    });
    return out;
  });
}

// ---------------------------------------------------------------------------
// Catch-up lower bounds
// ---------------------------------------------------------------------------

/// Margin function f(n): |c(n)| + offset, or a constant.
struct Margin {
  enum class Kind { int_code_plus, constant };
  Kind kind = Kind::int_code_plus;
  std::int64_t offset = 2;
  IntegerCode code = IntegerCode::omega();

  static Margin int_code_plus(std::int64_t k, IntegerCode c = IntegerCode::omega()) {
    return {Kind::int_code_plus, k, c};
  }
  static Margin constant(std::int64_t k) { return {Kind::constant, k, IntegerCode::omega()}; }

  [[nodiscard]] std::int64_t operator()(std::uint64_t n) const {
    if (kind == Kind::constant) return offset;
    return static_cast<std::int64_t>(int_code_length(code, n)) + offset;
  }

  /// "c+K" for |c(n)| + K, or a plain integer K for a constant.
  static Margin parse(const std::string& text) {
    try {
      if (text.rfind("c+", 0) == 0 || text.rfind("c-", 0) == 0) {
        std::size_t used = 0;
        const std::int64_t k = std::stoll(text.substr(1), &used);
        if (used + 1 == text.size()) return int_code_plus(k);
      } else if (text == "c") {
        return int_code_plus(0);
      } else {
        std::size_t used = 0;
        const std::int64_t k = std::stoll(text, &used);
        if (used == text.size()) return constant(k);
      }
    } catch (const std::exception&) {
    }
    fail(ErrorCode::invalid_argument, "margin must be 'c+K' or an integer, got '" + text + "'");
  }

  [[nodiscard]] std::string to_string() const {
    if (kind == Kind::constant) return std::to_string(offset);
    return offset >= 0 ? "c+" + std::to_string(offset) : "c" + std::to_string(offset);
  }
};

struct CatchUpReport {
  Margin margin;
  std::int64_t delta = 0;
  std::uint64_t cut_lb = 0;
  std::uint64_t horizon = 0;
};

/// Largest n ≤ |x| with len₁(xⁿ) − len₂(xⁿ) − delta ≥ f(n); 0 if there is none.
/// When delta bounds the length of a decompressor for codec 2, this is a lower
/// bound on the catch-up time of codec 1.
inline CatchUpReport catchup_lower_bound(std::span<const Symbol> x, const AnyCodec& codec_1, const AnyCodec& codec_2,
                                         const Margin& margin, std::int64_t delta) {
  if (delta < 0) fail(ErrorCode::invalid_argument, "delta must be non-negative");
  CatchUpReport report{margin, delta, 0, x.size()};
  auto t1 = codec_1.tracker();
  auto t2 = codec_2.tracker();
  for (std::size_t i = 0; i < x.size(); ++i) {
    t1.push(x[i]);
    t2.push(x[i]);
    const auto gap = static_cast<std::int64_t>(t1.length()) - static_cast<std::int64_t>(t2.length()) - delta;
    if (gap >= margin(i + 1)) report.cut_lb = i + 1;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Monte Carlo sweeps
// ---------------------------------------------------------------------------

enum class Family { bernoulli, genparam };

constexpr std::string_view to_string(Family f) noexcept { return f == Family::bernoulli ? "bernoulli" : "genparam"; }

constexpr Alphabet family_alphabet(Family f) noexcept {
  return f == Family::bernoulli ? Alphabet::binary : Alphabet::naturals;
}

/// Closed-form prior mixture of a family.
inline AnyMeasure family_mixture(Family f) {
  if (f == Family::bernoulli) return LaplaceMixture{};
  return GeometricMixture{};
}

/// Codec by name: "bayes" (the family's mixture), "bayes-laplace",
/// "bayes-geometric", "lz78", "persymbol".
inline AnyCodec make_codec(const std::string& name, Family family, IntegerCode code = IntegerCode::omega()) {
  if (name == "bayes") return AnyCodec::bayes(family_mixture(family), code);
  if (name == "bayes-laplace") return AnyCodec::bayes(LaplaceMixture{}, code);
  if (name == "bayes-geometric") return AnyCodec::bayes(GeometricMixture{}, code);
  if (name == "lz78") return Lz78Codec{family_alphabet(family), code};
  if (name == "persymbol") return PerSymbolCodec{family_alphabet(family), code};
  fail(ErrorCode::invalid_argument,
       "unknown codec '" + name + "' (known: bayes, bayes-laplace, bayes-geometric, lz78, persymbol)");
}

struct SweepConfig {
  Family family = Family::bernoulli;
  std::uint64_t master_seed = 1;
  std::size_t trials = 1;
  std::size_t horizon = 1;
  std::vector<std::string> codecs{"bayes"};
  std::string reference = "bayes";  // codec 2 of the catch-up comparison
  Margin margin{};
  std::int64_t delta = 64;
  IntegerCode integer_code = IntegerCode::omega();
  unsigned bernoulli_bits = 16;
  unsigned genparam_precision = 64;
  unsigned genparam_base = 2;
  unsigned max_precision = kDefaultMaxPrecision;
  unsigned threads = 1;

  void validate() const {
    if (trials == 0) fail(ErrorCode::invalid_argument, "trials must be at least 1");
    if (horizon == 0) fail(ErrorCode::invalid_argument, "horizon must be at least 1");
    if (codecs.empty()) fail(ErrorCode::invalid_argument, "at least one codec is required");
    if (delta < 0) fail(ErrorCode::invalid_argument, "delta must be non-negative");
    if (threads == 0) fail(ErrorCode::invalid_argument, "threads must be at least 1");
    for (const auto& c : codecs) (void)make_codec(c, family, integer_code);
    (void)make_codec(reference, family, integer_code);
  }
};

struct CodecTrialResult {
  std::uint64_t violations = 0;       // all n ≤ N
  std::uint64_t late_violations = 0;  // n in (N/2, N]
  std::uint64_t cut_lb = 0;
};

struct TrialResult {
  std::size_t trial = 0;
  std::uint64_t theta_seed = 0;
  std::string theta;  // Bernoulli θ as p/q, or the digit seed for GenParam
  SymbolString sequence;
  std::vector<CodecTrialResult> per_codec;
  std::string csv;  // rows, when requested
};

struct CodecAggregate {
  std::string codec;
  double mean_violations = 0;
  double std_violations = 0;
  double stderr_violations = 0;
  double frac_no_late_violation = 0;
  double frac_any_late_violation = 0;
  std::uint64_t max_violations = 0;
  std::uint64_t cut_lb_min = 0;
  std::uint64_t cut_lb_max = 0;
  double cut_lb_mean = 0;
  std::uint64_t cut_lb_median = 0;
};

struct SweepReport {
  SweepConfig config;
  std::vector<CodecAggregate> codecs;
};

inline constexpr std::string_view kCsvHeader =
    "trial,theta_seed,n,codec_id,code_len,neg_log_true_num,neg_log_true_den,neg_log_mix_num,neg_log_mix_den,"
    "shannon_red_times_den,barron_violation_flag";

/// Runs one trial; depends only on (master seed, trial index).
inline TrialResult run_trial(const SweepConfig& cfg, std::size_t trial, bool want_csv) {
  try {
    TrialResult out;
    out.trial = trial;
    out.theta_seed = derive_seed(cfg.master_seed, trial);
    PriorSampler prior(out.theta_seed);
    const std::uint64_t data_seed = derive_seed(out.theta_seed, 1);

    std::optional<TrueMeasure> truth;
    if (cfg.family == Family::bernoulli) {
      const Rational theta = prior.sample_bernoulli_theta(cfg.bernoulli_bits);
      out.theta = theta.str();
      BernoulliSource source(theta);
      out.sequence = sample_sequence(source, cfg.horizon, data_seed);
      truth.emplace(AnyMeasure(source));
    } else {
      auto source = prior.sample_genparam(cfg.genparam_precision, cfg.genparam_base);
      out.theta = std::to_string(source.digits().seed());
      out.sequence = sample_sequence(source, cfg.horizon, data_seed, GenParamSampling{cfg.max_precision});
      truth.emplace(std::move(source));
    }

    std::vector<AnyCodec> codecs;
    for (const auto& name : cfg.codecs) codecs.push_back(make_codec(name, cfg.family, cfg.integer_code));
    const AnyCodec reference = make_codec(cfg.reference, cfg.family, cfg.integer_code);
    const AnyMeasure mixture = family_mixture(cfg.family);
    std::vector<const AnyCodec*> ptrs;
    for (const auto& c : codecs) ptrs.push_back(&c);

    const std::uint64_t half = cfg.horizon / 2;
    detail::with_precision_retry(*truth, cfg.max_precision, [&](const TrueMeasure& t) {
      out.per_codec.assign(codecs.size(), {});
      std::ostringstream csv;
      detail::scan_prefixes(ptrs, t, mixture, out.sequence,
                            [&](std::size_t c, TrajectoryRow& row, const ProbInterval& p, const Prob& mix) {
                              auto& r = out.per_codec[c];
                              if (row.barron_violation) {
                                ++r.violations;
                                if (row.n > half) ++r.late_violations;
                              }
                              if (want_csv) {
                                row.true_prob = p;
                                row.mixture_prob = mix;
                                const std::int64_t den = std::int64_t{1} << kLogFracBits;
                                csv << trial << ',' << out.theta_seed << ',' << row.n << ',' << codecs[c].name() << ','
                                    << row.code_len << ',' << row.neg_log_true_fixed() << ',' << den << ','
                                    << row.neg_log_mixture_fixed() << ',' << den << ',' << row.shannon_red_fixed()
                                    << ',' << (row.barron_violation ? 1 : 0) << '\n';
                              }
                            });
      out.csv = csv.str();
      return 0;
    });
    for (std::size_t c = 0; c < codecs.size(); ++c)
      out.per_codec[c].cut_lb = catchup_lower_bound(out.sequence, codecs[c], reference, cfg.margin, cfg.delta).cut_lb;
    return out;
  } catch (const Error& e) {
    throw Error(e.code(), "trial " + std::to_string(trial) + ": " + e.what());
  }
}

/// Runs all trials; `on_trial` receives results in trial order regardless of
/// thread count. Aggregates are order-independent sums and counts.
inline SweepReport monte_carlo_sweep(const SweepConfig& cfg,
                                     const std::function<void(const TrialResult&)>& on_trial = {},
                                     bool want_csv = false) {
  cfg.validate();
  const std::size_t k = cfg.codecs.size();
  std::vector<std::vector<std::uint64_t>> violations(k), cut(k);
  std::vector<std::uint64_t> no_late(k, 0);

  const std::size_t batch = std::max<std::size_t>(1, cfg.threads);
  for (std::size_t start = 0; start < cfg.trials; start += batch) {
    const std::size_t count = std::min(batch, cfg.trials - start);
    std::vector<TrialResult> results(count);
    if (count == 1) {
      results[0] = run_trial(cfg, start, want_csv);
    } else {
      std::vector<std::exception_ptr> errors(count);
      std::vector<std::jthread> workers;
      for (std::size_t j = 0; j < count; ++j)
        workers.emplace_back([&, j] {
          try {
            results[j] = run_trial(cfg, start + j, want_csv);
          } catch (...) {
            errors[j] = std::current_exception();
          }
        });
      workers.clear();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    }
    for (const auto& r : results) {
      for (std::size_t c = 0; c < k; ++c) {
        violations[c].push_back(r.per_codec[c].violations);
        cut[c].push_back(r.per_codec[c].cut_lb);
        if (r.per_codec[c].late_violations == 0) ++no_late[c];
      }
      if (on_trial) on_trial(r);
    }
  }

  SweepReport report{cfg, {}};
  const auto trials = static_cast<double>(cfg.trials);
  for (std::size_t c = 0; c < k; ++c) {
    CodecAggregate a;
    a.codec = make_codec(cfg.codecs[c], cfg.family, cfg.integer_code).name();
    double sum = 0;
    for (auto v : violations[c]) sum += static_cast<double>(v);
    a.mean_violations = sum / trials;
    double ss = 0;
    for (auto v : violations[c]) ss += (static_cast<double>(v) - a.mean_violations) * (static_cast<double>(v) - a.mean_violations);
    a.std_violations = cfg.trials > 1 ? std::sqrt(ss / (trials - 1)) : 0.0;
    a.stderr_violations = a.std_violations / std::sqrt(trials);
    a.max_violations = *std::max_element(violations[c].begin(), violations[c].end());
    a.frac_no_late_violation = static_cast<double>(no_late[c]) / trials;
    a.frac_any_late_violation = 1.0 - a.frac_no_late_violation;
    auto sorted = cut[c];
    std::sort(sorted.begin(), sorted.end());
    a.cut_lb_min = sorted.front();
    a.cut_lb_max = sorted.back();
    a.cut_lb_median = sorted[(sorted.size() - 1) / 2];
    double cs = 0;
    for (auto v : sorted) cs += static_cast<double>(v);
    a.cut_lb_mean = cs / trials;
    report.codecs.push_back(std::move(a));
  }
  return report;
}

/// Key-value text block; numbers are printed with fixed formatting.
inline std::string format_summary(const SweepReport& r) {
  std::ostringstream os;
  const auto fixed = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  os << "family=" << to_string(r.config.family) << '\n'
     << "master_seed=" << r.config.master_seed << '\n'
     << "trials=" << r.config.trials << '\n'
     << "horizon=" << r.config.horizon << '\n'
     << "margin=" << r.config.margin.to_string() << '\n'
     << "delta=" << r.config.delta << '\n'
     << "reference=" << make_codec(r.config.reference, r.config.family, r.config.integer_code).name() << '\n';
  for (const auto& a : r.codecs) {
    const std::string p = a.codec + ".";
    os << p << "mean_violations=" << fixed(a.mean_violations) << '\n'
       << p << "stderr_violations=" << fixed(a.stderr_violations) << '\n'
       << p << "max_violations=" << a.max_violations << '\n'
       << p << "frac_no_late_violation=" << fixed(a.frac_no_late_violation) << '\n'
       << p << "cut_lb_min=" << a.cut_lb_min << '\n'
       << p << "cut_lb_median=" << a.cut_lb_median << '\n'
       << p << "cut_lb_mean=" << fixed(a.cut_lb_mean) << '\n'
       << p << "cut_lb_max=" << a.cut_lb_max << '\n';
  }
  return os.str();
}

}  // namespace ucode
