#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>

#include "ucode/error.hpp"

namespace ucode {

using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<
    boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>, boost::multiprecision::et_off>;

inline std::uint64_t bit_length(const BigInt& v) {
  return v.is_zero() ? 0 : static_cast<std::uint64_t>(boost::multiprecision::msb(v)) + 1;
}

/// Exact probability kept as an unreduced fraction. Products of long chains of
/// conditionals stay gcd-free; comparisons are exact.
struct Prob {
  BigInt num{1};
  BigInt den{1};

  Prob() = default;
  Prob(BigInt n, BigInt d) : num(std::move(n)), den(std::move(d)) {
    if (den <= 0) fail(ErrorCode::internal, "probability with non-positive denominator");
  }
  explicit Prob(const Rational& r)
      : num(boost::multiprecision::numerator(r)), den(boost::multiprecision::denominator(r)) {}

  static Prob one() { return {}; }
  static Prob zero() { return {BigInt(0), BigInt(1)}; }
  static Prob pow2_inverse(std::uint64_t k) { return {BigInt(1), BigInt(1) << k}; }

  [[nodiscard]] bool is_zero() const { return num.is_zero(); }

  Prob& operator*=(const Prob& o) {
    num *= o.num;
    den *= o.den;
    return *this;
  }
  friend Prob operator*(Prob a, const Prob& b) { return a *= b; }
  friend Prob operator+(const Prob& a, const Prob& b) {
    if (a.den == b.den) return {a.num + b.num, a.den};
    return {a.num * b.den + b.num * a.den, a.den * b.den};
  }

  [[nodiscard]] Rational to_rational() const { return Rational(num, den); }

  friend bool operator==(const Prob& a, const Prob& b) { return a.num * b.den == b.num * a.den; }
  friend bool operator<(const Prob& a, const Prob& b) { return a.num * b.den < b.num * a.den; }
  friend bool operator<=(const Prob& a, const Prob& b) { return a.num * b.den <= b.num * a.den; }
};

namespace detail {

// Sign of (a·2^shift − b) for non-negative a, b.
inline int compare_shifted(const BigInt& a, std::uint64_t shift, const BigInt& b) {
  if (a.is_zero()) return b.is_zero() ? 0 : -1;
  if (b.is_zero()) return 1;
  const auto la = bit_length(a) + shift;
  const auto lb = bit_length(b);
  if (la != lb) return la < lb ? -1 : 1;
  const BigInt lhs = a << shift;
  return lhs < b ? -1 : (lhs == b ? 0 : 1);
}

}  // namespace detail

/// True iff p ≥ 2^{-k}, i.e. −log₂ p ≤ k.
inline bool neg_log2_at_most(const Prob& p, std::uint64_t k) {
  return detail::compare_shifted(p.num, k, p.den) >= 0;
}

/// True iff p ≤ 2^{-k}, i.e. k + log₂ p ≤ 0.
inline bool at_most_pow2_inverse(const Prob& p, std::uint64_t k) {
  return detail::compare_shifted(p.num, k, p.den) <= 0;
}

/// ⌈−log₂ p⌉ for 0 < p ≤ 1, decided exactly as the least k with p ≥ 2^{-k}.
inline std::uint64_t ceil_neg_log2(const Prob& p) {
  if (p.is_zero()) fail(ErrorCode::zero_probability, "logarithm of zero probability");
  if (p.num >= p.den) return 0;
  const std::uint64_t guess = bit_length(p.den) - bit_length(p.num);
  // 2^{guess-1} < den/num < 2^{guess+1}
  std::uint64_t k = guess == 0 ? 0 : guess - 1;
  while (!neg_log2_at_most(p, k)) ++k;
  return k;
}

/// Approximates log₂ v for v > 0 using the top 64 bits; error far below 2^-40.
inline long double log2_approx(const BigInt& v) {
  const auto len = bit_length(v);
  if (len <= 64) return std::log2(static_cast<long double>(static_cast<std::uint64_t>(v)));
  const auto top = static_cast<std::uint64_t>(v >> (len - 64));
  return std::log2(static_cast<long double>(top)) + static_cast<long double>(len - 64);
}

/// −log₂ p as a fixed-point integer with `frac_bits` fractional bits, rounded to
/// nearest. Exact whenever −log₂ p is an integer.
inline std::int64_t neg_log2_fixed(const Prob& p, unsigned frac_bits) {
  if (p.is_zero()) fail(ErrorCode::zero_probability, "logarithm of zero probability");
  // Powers of two are resolved exactly.
  const auto num_len = bit_length(p.num);
  const auto den_len = bit_length(p.den);
  const bool num_pow2 = (p.num & (p.num - 1)).is_zero();
  const bool den_pow2 = (p.den & (p.den - 1)).is_zero();
  if (num_pow2 && den_pow2) {
    const auto e = static_cast<std::int64_t>(den_len) - static_cast<std::int64_t>(num_len);
    return e * (std::int64_t{1} << frac_bits);
  }
  const long double v = log2_approx(p.den) - log2_approx(p.num);
  return static_cast<std::int64_t>(std::llround(v * std::ldexp(1.0L, static_cast<int>(frac_bits))));
}

inline std::string to_decimal(const BigInt& v) { return v.str(); }

}  // namespace ucode

namespace ucode {

/// Exact test of length + log₂ p ≥ k (signed k).
inline bool redundancy_at_least(const Prob& p, std::uint64_t length, std::int64_t k) {
  const auto L = static_cast<std::int64_t>(length);
  if (L - k < 0) return false;  // would need p ≥ 2^{positive}
  return neg_log2_at_most(p, static_cast<std::uint64_t>(L - k));
}

/// Exact test of length + log₂ p ≤ k (signed k).
inline bool redundancy_at_most(const Prob& p, std::uint64_t length, std::int64_t k) {
  const auto L = static_cast<std::int64_t>(length);
  if (L - k < 0) return true;  // p ≤ 1 ≤ 2^{k − L}
  return at_most_pow2_inverse(p, static_cast<std::uint64_t>(L - k));
}

}  // namespace ucode
