#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <bit>
#include <concepts>
#include <cstdint>
#include <iterator>
#include <span>
#include <utility>
#include <vector>

#include "ucode/error.hpp"
#include "ucode/measures.hpp"
#include "ucode/numeric.hpp"
#include "ucode/rng.hpp"

namespace ucode {

// ---------------------------------------------------------------------------
// Pairing φ: (nonempty strings over the positive integers) × ℕ → ℕ
// ---------------------------------------------------------------------------
//
// A string x with symbol sum S is a composition of S. Its index is
// 2^{S−1} − 1 + mask, where mask has one bit per gap between the S units
// (most significant first) set where a part ends. Strings are thereby ordered
// by sum, then by mask, and every natural number is hit exactly once.
// The pair (index, k) is then folded with the Cantor pairing on (index, k − 1).

/// Incremental string indexer; push() extends the string by one symbol.
class StringIndexer {
 public:
  void push(Symbol s) {
    if (s == 0) fail(ErrorCode::invalid_argument, "string index is defined over positive symbols");
    if (sum_ == 0) {
      mask_ = 0;
    } else {
      mask_ <<= s;
      boost::multiprecision::bit_set(mask_, static_cast<unsigned>(s - 1));
    }
    sum_ += s;
  }

  /// Index of the current string extended by s, without modifying *this.
  [[nodiscard]] BigInt index_with(Symbol s) const {
    StringIndexer next = *this;
    next.push(s);
    return next.index();
  }

  [[nodiscard]] BigInt index() const {
    if (sum_ == 0) fail(ErrorCode::invalid_argument, "the empty string has no index");
    return (BigInt(1) << (sum_ - 1)) - 1 + mask_;
  }

 private:
  BigInt mask_ = 0;
  std::uint64_t sum_ = 0;
};

inline BigInt string_index(std::span<const Symbol> x) {
  StringIndexer idx;
  for (Symbol s : x) idx.push(s);
  return idx.index();
}

inline SymbolString string_from_index(const BigInt& index) {
  // Find S with 2^{S−1} − 1 ≤ index < 2^S − 1.
  const BigInt shifted = index + 1;
  const std::uint64_t sum = bit_length(shifted);
  const BigInt mask = shifted - (BigInt(1) << (sum - 1));
  SymbolString x;
  Symbol part = 1;
  for (std::uint64_t gap = sum - 1; gap-- > 0;) {
    if (boost::multiprecision::bit_test(mask, static_cast<unsigned>(gap))) {
      x.push_back(part);
      part = 1;
    } else {
      ++part;
    }
  }
  x.push_back(part);
  return x;
}

inline BigInt triangular(const BigInt& c) { return c * (c + 1) / 2; }

inline BigInt cantor_pair(const BigInt& a, const BigInt& b) { return triangular(a + b) + b; }

inline std::pair<BigInt, BigInt> cantor_unpair(const BigInt& z) {
  // w = ⌊(√(8z+1) − 1)/2⌋
  BigInt w = (boost::multiprecision::sqrt(8 * z + 1) - 1) / 2;
  const BigInt t = triangular(w);
  const BigInt b = z - t;
  return {w - b, b};
}

/// φ(x, k) for k ≥ 1.
inline BigInt pairing(std::span<const Symbol> x, std::uint64_t k) {
  if (k == 0) fail(ErrorCode::invalid_argument, "digit terms are numbered from 1");
  return cantor_pair(string_index(x), BigInt(k - 1));
}

// ---------------------------------------------------------------------------
// Parameter digit streams θ = θ₀θ₁θ₂... over {0, ..., D−1}
// ---------------------------------------------------------------------------

template <typename T>
concept DigitStream = requires(const T& t, const BigInt& position) {
  { t.base() } -> std::convertible_to<unsigned>;
  { t.digit(position) } -> std::convertible_to<unsigned>;
};

/// Random-access pseudo-random digits: position is hashed with the seed.
class HashedDigits {
 public:
  HashedDigits(std::uint64_t seed, unsigned base = 2) : seed_(seed), base_(base) {
    if (base < 2) fail(ErrorCode::unsupported_base, "digit base must be at least 2");
  }

  [[nodiscard]] unsigned base() const noexcept { return base_; }
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

  [[nodiscard]] unsigned digit(const BigInt& position) const {
    std::uint64_t h = splitmix64(seed_ ^ 0xd1b54a32d192ed03ULL);
    limbs_.clear();
    boost::multiprecision::export_bits(position, std::back_inserter(limbs_), 64, false);
    for (std::uint64_t limb : limbs_) h = splitmix64(h ^ limb);
    h = splitmix64(h ^ limbs_.size());
    if ((base_ & (base_ - 1)) == 0) return static_cast<unsigned>(h >> (64 - std::countr_zero(base_)));
    return static_cast<unsigned>(((h >> 32) * base_) >> 32);
  }

 private:
  std::uint64_t seed_;
  unsigned base_;
  mutable std::vector<std::uint64_t> limbs_;
};

/// Every position carries the same digit (test fixture for degenerate θ).
class ConstantDigits {
 public:
  ConstantDigits(unsigned digit, unsigned base = 2) : digit_(digit), base_(base) {
    if (base < 2 || digit >= base) fail(ErrorCode::invalid_argument, "constant digit outside base");
  }
  [[nodiscard]] unsigned base() const noexcept { return base_; }
  [[nodiscard]] unsigned digit(const BigInt&) const noexcept { return digit_; }

 private:
  unsigned digit_;
  unsigned base_;
};

/// Closed rational interval [lo, hi] kept as unreduced fractions.
struct ProbInterval {
  Prob lo = Prob::one();
  Prob hi = Prob::one();

  [[nodiscard]] Rational width() const { return hi.to_rational() - lo.to_rational(); }
  [[nodiscard]] Rational midpoint() const { return (hi.to_rational() + lo.to_rational()) / 2; }
  [[nodiscard]] bool contains(const Rational& v) const { return lo.to_rational() <= v && v <= hi.to_rational(); }
  [[nodiscard]] bool contains(const ProbInterval& o) const { return lo <= o.lo && o.hi <= hi; }

  ProbInterval& operator*=(const ProbInterval& o) {
    lo *= o.lo;
    hi *= o.hi;
    return *this;
  }
};

/// The measure determined by an infinite digit sequence θ via
///   P(x·s) = (P(x) − Σ_{y<s} P(x·y)) · U(x·s),  U(z) = Σ_{k≥1} θ_{φ(z,k)} D^{-k},
/// which gives the conditional ∏_{m<s}(1 − U(x·m)) · U(x·s). Each U is
/// truncated to `precision` digit terms, bracketed by [U_lo, U_lo + D^{-precision}].
template <DigitStream Digits>
class GenParamSource {
 public:
  GenParamSource(Digits digits, unsigned precision) : digits_(std::move(digits)), precision_(precision) {
    if (precision_ == 0) fail(ErrorCode::invalid_argument, "precision must be at least 1");
  }

  [[nodiscard]] const Digits& digits() const noexcept { return digits_; }
  [[nodiscard]] unsigned precision() const noexcept { return precision_; }
  [[nodiscard]] unsigned base() const { return digits_.base(); }
  [[nodiscard]] GenParamSource with_precision(unsigned p) const { return GenParamSource(digits_, p); }

  /// Bracket of U(z) where `index` is the string index of z.
  [[nodiscard]] ProbInterval u_factor(const BigInt& index) const {
    const BigInt d = base();
    BigInt c = index;          // a + b with b = k − 1
    BigInt t = triangular(c);  // T(c)
    BigInt num = 0;
    for (unsigned k = 1; k <= precision_; ++k) {
      const BigInt position = t + (k - 1);
      num = num * d + digits_.digit(position);
      // advance to c + 1
      c += 1;
      t += c;
    }
    const BigInt den = boost::multiprecision::pow(d, precision_);
    return {Prob(num, den), Prob(num + 1, den)};
  }

  /// Bracket of the conditional probability of s after the prefix tracked by `prefix`.
  [[nodiscard]] ProbInterval conditional(const StringIndexer& prefix, Symbol s) const {
    if (s == 0) fail(ErrorCode::invalid_argument, "GenParam symbols are positive integers");
    ProbInterval out;
    for (Symbol m = 1; m < s; ++m) stick_break(out, u_factor(prefix.index_with(m)));
    out *= u_factor(prefix.index_with(s));
    return out;
  }

  /// Brackets of P(xⁿ) for n = 1..|x|.
  [[nodiscard]] std::vector<ProbInterval> prefix_brackets(std::span<const Symbol> x) const {
    std::vector<ProbInterval> out;
    out.reserve(x.size());
    StringIndexer idx;
    ProbInterval acc;
    for (Symbol s : x) {
      acc *= conditional(idx, s);
      out.push_back(acc);
      idx.push(s);
    }
    return out;
  }

  // Multiplies by (1 − U) with outward rounding.
  static void stick_break(ProbInterval& acc, const ProbInterval& u) {
    acc.lo *= Prob(u.hi.den - u.hi.num, u.hi.den);
    acc.hi *= Prob(u.lo.den - u.lo.num, u.lo.den);
  }

 private:
  Digits digits_;
  unsigned precision_;
};

/// Conditional bracket for s after `prefix`.
template <DigitStream Digits>
ProbInterval genparam_conditional(const GenParamSource<Digits>& source, std::span<const Symbol> prefix, Symbol s) {
  StringIndexer idx;
  for (Symbol t : prefix) idx.push(t);
  return source.conditional(idx, s);
}

struct GenParamSampling {
  unsigned max_precision = 1024;
  Symbol max_symbol = Symbol{1} << 20;
};

/// Samples x ~ P_θ of length n by inverse CDF on the stick-breaking cumulative,
/// doubling the precision until the uniform is separated from the bracket.
template <DigitStream Digits>
SymbolString sample_sequence(const GenParamSource<Digits>& source, std::size_t n, std::uint64_t seed,
                             const GenParamSampling& limits = {}) {
  Rng rng(seed);
  SymbolString x;
  x.reserve(n);
  StringIndexer idx;
  for (std::size_t i = 0; i < n; ++i) {
    // v = 1 − u with u = (2r + 1)/2^65; choose the first s with v > ∏_{m≤s}(1 − U_m).
    const std::uint64_t r = rng.next();
    const Prob v((BigInt(1) << 65) - (2 * BigInt(r) + 1), BigInt(1) << 65);
    unsigned precision = source.precision();
    for (;;) {
      const auto src = source.with_precision(precision);
      ProbInterval remaining;
      Symbol chosen = 0;
      bool ambiguous = false;
      for (Symbol s = 1; s <= limits.max_symbol; ++s) {
        GenParamSource<Digits>::stick_break(remaining, src.u_factor(idx.index_with(s)));
        if (remaining.hi < v) {
          chosen = s;
          break;
        }
        if (!(v <= remaining.lo)) {
          ambiguous = true;
          break;
        }
      }
      if (chosen != 0) {
        x.push_back(chosen);
        idx.push(chosen);
        break;
      }
      if (!ambiguous) fail(ErrorCode::precision_exhausted, "no symbol below the scan limit received the sampled mass");
      if (precision >= limits.max_precision)
        fail(ErrorCode::precision_exhausted, "sampling uniform not separated within the maximum precision");
      precision = std::min(limits.max_precision, precision * 2);
    }
  }
  return x;
}

/// Seeded draws from the priors: uniform iid digits for θ, uniform dyadic θ for Bernoulli.
class PriorSampler {
 public:
  explicit PriorSampler(std::uint64_t seed) : rng_(seed) {}

  /// θ = m / 2^bits with m uniform on {0, ..., 2^bits − 1}.
  Rational sample_bernoulli_theta(unsigned bits = 16) {
    if (bits == 0 || bits > 63) fail(ErrorCode::invalid_argument, "Bernoulli prior bits must lie in [1, 63]");
    const std::uint64_t m = rng_.next() >> (64 - bits);
    return Rational(BigInt(m), BigInt(1) << bits);
  }

  GenParamSource<HashedDigits> sample_genparam(unsigned precision = 64, unsigned base = 2) {
    return {HashedDigits(rng_.next(), base), precision};
  }

 private:
  Rng rng_;
};

}  // namespace ucode
