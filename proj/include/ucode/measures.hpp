#pragma once

#include <concepts>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ucode/error.hpp"
#include "ucode/numeric.hpp"
#include "ucode/rng.hpp"

namespace ucode {

using Symbol = std::uint64_t;
using SymbolString = std::vector<Symbol>;

/// Input alphabets: {0, 1} or the positive integers {1, 2, 3, ...}.
enum class Alphabet : std::uint8_t { binary, naturals };

constexpr Symbol first_symbol(Alphabet a) noexcept { return a == Alphabet::binary ? 0 : 1; }

inline bool in_alphabet(Alphabet a, Symbol s) noexcept {
  return a == Alphabet::binary ? s <= 1 : s >= 1;
}

/// Positive-integer image of a symbol, for codes over the positive integers.
constexpr std::uint64_t symbol_to_positive(Alphabet a, Symbol s) noexcept {
  return a == Alphabet::binary ? s + 1 : s;
}

constexpr Symbol positive_to_symbol(Alphabet a, std::uint64_t v) noexcept {
  return a == Alphabet::binary ? v - 1 : v;
}

/// Sufficient statistics of a prefix, shared by all exact measures here.
struct PrefixStats {
  std::uint64_t length = 0;
  std::uint64_t ones = 0;

  void push(Symbol s) noexcept {
    ++length;
    ones += (s == 1);
  }
};

/// A measure with exact rational next-symbol probabilities.
template <typename M>
concept ExactSequentialMeasure = requires(const M& m, const PrefixStats& st, Symbol s,
                                          std::span<const Symbol> x) {
  { m.alphabet() } -> std::same_as<Alphabet>;
  { m.conditional(st, s) } -> std::same_as<Prob>;
  { m.cumulative_below(st, s) } -> std::same_as<Prob>;
  { m.marginal(x) } -> std::same_as<Prob>;
};

namespace detail {

inline void require_symbol(Alphabet a, Symbol s) {
  if (!in_alphabet(a, s)) fail(ErrorCode::invalid_argument, "symbol " + std::to_string(s) + " is outside the alphabet");
}

inline void require_nonempty(std::span<const Symbol> x) {
  if (x.empty()) fail(ErrorCode::invalid_argument, "the empty string is outside the code's domain");
}

}  // namespace detail

/// iid Bernoulli(θ) source over {0, 1}.
class BernoulliSource {
 public:
  explicit BernoulliSource(Rational theta) : theta_(std::move(theta)) {
    if (theta_ < 0 || theta_ > 1) fail(ErrorCode::invalid_argument, "Bernoulli parameter must lie in [0, 1]");
  }

  [[nodiscard]] const Rational& theta() const noexcept { return theta_; }
  [[nodiscard]] Alphabet alphabet() const noexcept { return Alphabet::binary; }

  [[nodiscard]] Prob conditional(const PrefixStats&, Symbol s) const {
    detail::require_symbol(Alphabet::binary, s);
    return s == 1 ? Prob(theta_) : Prob(Rational(1) - theta_);
  }

  [[nodiscard]] Prob cumulative_below(const PrefixStats& st, Symbol s) const {
    detail::require_symbol(Alphabet::binary, s);
    return s == 0 ? Prob::zero() : conditional(st, 0);
  }

  [[nodiscard]] Prob marginal(std::span<const Symbol> x) const {
    std::uint64_t ones = 0;
    for (Symbol s : x) {
      detail::require_symbol(Alphabet::binary, s);
      ones += s;
    }
    const BigInt p = boost::multiprecision::numerator(theta_);
    const BigInt q = boost::multiprecision::denominator(theta_);
    const auto ones_u = static_cast<unsigned>(ones);
    const auto zeros_u = static_cast<unsigned>(x.size() - ones);
    return {boost::multiprecision::pow(p, ones_u) * boost::multiprecision::pow(BigInt(q - p), zeros_u),
            boost::multiprecision::pow(q, static_cast<unsigned>(x.size()))};
  }

 private:
  Rational theta_;
};

/// Bernoulli mixture under the uniform prior on θ: P(x) = a!·b!/(n+1)! for a
/// ones and b zeros; next-symbol probability (count + 1)/(n + 2).
class LaplaceMixture {
 public:
  [[nodiscard]] Alphabet alphabet() const noexcept { return Alphabet::binary; }

  [[nodiscard]] Prob conditional(const PrefixStats& st, Symbol s) const {
    detail::require_symbol(Alphabet::binary, s);
    const std::uint64_t count = s == 1 ? st.ones : st.length - st.ones;
    return {BigInt(count + 1), BigInt(st.length + 2)};
  }

  [[nodiscard]] Prob cumulative_below(const PrefixStats& st, Symbol s) const {
    detail::require_symbol(Alphabet::binary, s);
    return s == 0 ? Prob::zero() : conditional(st, 0);
  }

  [[nodiscard]] Prob marginal(std::span<const Symbol> x) const {
    std::uint64_t ones = 0;
    for (Symbol s : x) {
      detail::require_symbol(Alphabet::binary, s);
      ones += s;
    }
    const std::uint64_t zeros = x.size() - ones;
    return {factorial(ones) * factorial(zeros), factorial(x.size() + 1)};
  }

 private:
  static BigInt factorial(std::uint64_t n) {
    BigInt f = 1;
    for (std::uint64_t i = 2; i <= n; ++i) f *= i;
    return f;
  }
};

/// Prior-averaged measure of the θ-parameterized family over the positive
/// integers: P(x) = 2^{-Σ xᵢ}, next-symbol probability 2^{-k}.
class GeometricMixture {
 public:
  [[nodiscard]] Alphabet alphabet() const noexcept { return Alphabet::naturals; }

  [[nodiscard]] Prob conditional(const PrefixStats&, Symbol s) const {
    detail::require_symbol(Alphabet::naturals, s);
    return Prob::pow2_inverse(s);
  }

  /// Σ_{t<s} 2^{-t} = 1 − 2^{-(s−1)}.
  [[nodiscard]] Prob cumulative_below(const PrefixStats&, Symbol s) const {
    detail::require_symbol(Alphabet::naturals, s);
    const BigInt den = BigInt(1) << (s - 1);
    return {den - 1, den};
  }

  [[nodiscard]] Prob marginal(std::span<const Symbol> x) const {
    std::uint64_t sum = 0;
    for (Symbol s : x) {
      detail::require_symbol(Alphabet::naturals, s);
      sum += s;
    }
    return Prob::pow2_inverse(sum);
  }
};

enum class MeasureId : std::uint8_t { bernoulli = 1, laplace = 2, geometric = 3 };

/// Runtime choice among the exact measures.
class AnyMeasure {
 public:
  using Variant = std::variant<BernoulliSource, LaplaceMixture, GeometricMixture>;

  AnyMeasure(BernoulliSource m) : v_(std::move(m)) {}  // NOLINT(google-explicit-constructor)
  AnyMeasure(LaplaceMixture m) : v_(m) {}              // NOLINT(google-explicit-constructor)
  AnyMeasure(GeometricMixture m) : v_(m) {}            // NOLINT(google-explicit-constructor)

  [[nodiscard]] MeasureId id() const noexcept {
    return static_cast<MeasureId>(static_cast<std::uint8_t>(v_.index() + 1));
  }
  [[nodiscard]] const Variant& variant() const noexcept { return v_; }

  /// Parameter text stored in containers and reports ("p/q" for Bernoulli).
  [[nodiscard]] std::string params() const {
    if (const auto* b = std::get_if<BernoulliSource>(&v_)) return b->theta().str();
    return {};
  }

  [[nodiscard]] Alphabet alphabet() const {
    return std::visit([](const auto& m) { return m.alphabet(); }, v_);
  }
  [[nodiscard]] Prob conditional(const PrefixStats& st, Symbol s) const {
    return std::visit([&](const auto& m) { return m.conditional(st, s); }, v_);
  }
  [[nodiscard]] Prob cumulative_below(const PrefixStats& st, Symbol s) const {
    return std::visit([&](const auto& m) { return m.cumulative_below(st, s); }, v_);
  }
  [[nodiscard]] Prob marginal(std::span<const Symbol> x) const {
    return std::visit([&](const auto& m) { return m.marginal(x); }, v_);
  }

 private:
  Variant v_;
};

inline std::string_view to_string(MeasureId id) noexcept {
  switch (id) {
    case MeasureId::bernoulli: return "bernoulli";
    case MeasureId::laplace: return "laplace";
    case MeasureId::geometric: return "geometric";
  }
  return "unknown";
}

/// Builds a measure from its id and parameter text.
inline AnyMeasure make_measure(MeasureId id, const std::string& params) {
  switch (id) {
    case MeasureId::bernoulli: {
      Rational theta;
      try {
        theta = Rational(params);
      } catch (const std::exception&) {
        fail(ErrorCode::invalid_argument, "Bernoulli parameter must be a rational p/q, got '" + params + "'");
      }
      return BernoulliSource(theta);
    }
    case MeasureId::laplace: return LaplaceMixture{};
    case MeasureId::geometric: return GeometricMixture{};
  }
  fail(ErrorCode::invalid_argument, "unknown measure id");
}

template <ExactSequentialMeasure M>
Rational marginal_prob(const M& measure, std::span<const Symbol> x) {
  return measure.marginal(x).to_rational();
}

template <ExactSequentialMeasure M>
Rational conditional_prob(const M& measure, std::span<const Symbol> prefix, Symbol s) {
  if (measure.marginal(prefix).is_zero())
    fail(ErrorCode::zero_mass_prefix, "conditional probability after a zero-mass prefix");
  PrefixStats st;
  for (Symbol t : prefix) st.push(t);
  return measure.conditional(st, s).to_rational();
}

namespace detail {

/// Inverse-CDF draw of one symbol with a 64-bit uniform u = r / 2^64.
template <ExactSequentialMeasure M>
Symbol draw_symbol(const M& measure, const PrefixStats& st, std::uint64_t r) {
  const BigInt u = r;
  for (Symbol s = first_symbol(measure.alphabet());; ++s) {
    if (!in_alphabet(measure.alphabet(), s)) fail(ErrorCode::zero_mass_prefix, "no symbol carries the sampled mass");
    const Prob cum = measure.cumulative_below(st, s) + measure.conditional(st, s);
    // u < cum  ⇔  r · den < num · 2^64
    if (u * cum.den < (cum.num << 64)) return s;
  }
}

}  // namespace detail

/// Samples x ~ measure of length n; deterministic given the seed.
template <ExactSequentialMeasure M>
SymbolString sample_sequence(const M& measure, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  SymbolString x;
  x.reserve(n);
  PrefixStats st;
  for (std::size_t i = 0; i < n; ++i) {
    const Symbol s = detail::draw_symbol(measure, st, rng.next());
    x.push_back(s);
    st.push(s);
  }
  return x;
}

}  // namespace ucode
