#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>

#include "ucode/bits.hpp"
#include "ucode/error.hpp"
#include "ucode/measures.hpp"
#include "ucode/numeric.hpp"

namespace ucode {

namespace detail {

// Interval [low/den, (low + width)/den) of a prefix under lexicographic order.
struct CodingInterval {
  BigInt low = 0;
  BigInt width = 1;
  BigInt den = 1;

  // Restricts to the subinterval of symbol s, given the mass strictly below s
  // and the mass of s.
  void refine(const Prob& below, const Prob& mass) {
    if (below.den == mass.den) {
      low = low * mass.den + width * below.num;
      den *= mass.den;
    } else {
      const BigInt d = below.den * mass.den;
      low = low * d + width * below.num * mass.den;
      den *= d;
      width *= below.den;
    }
    width *= mass.num;
  }

  [[nodiscard]] Prob mass() const { return {width, den}; }
};

template <ExactSequentialMeasure M>
CodingInterval locate(const M& measure, std::span<const Symbol> x) {
  CodingInterval iv;
  PrefixStats st;
  for (Symbol s : x) {
    iv.refine(measure.cumulative_below(st, s), measure.conditional(st, s));
    st.push(s);
  }
  return iv;
}

// ⌊2^length · (low + width/2)/den⌋
inline BigInt midpoint_value(const CodingInterval& iv, std::uint64_t length) {
  return ((2 * iv.low + iv.width) << length) / (2 * iv.den);
}

// First `length` digits of the midpoint.
inline BitString midpoint_digits(const CodingInterval& iv, std::uint64_t length) {
  const BigInt value = midpoint_value(iv, length);
  BitString out;
  for (std::uint64_t i = length; i-- > 0;) out.push_back(boost::multiprecision::bit_test(value, static_cast<unsigned>(i)));
  return out;
}

}  // namespace detail

/// Shannon-Fano-Elias code for strings of one fixed length n: the codeword of
/// x is the first ⌈−log₂ P(x)⌉ + 1 binary digits of the midpoint of x's
/// interval in the lexicographic cumulative distribution.
template <ExactSequentialMeasure M>
struct FixedLengthCode {
  M measure;
  std::size_t n = 0;
};

template <ExactSequentialMeasure M>
FixedLengthCode(M, std::size_t) -> FixedLengthCode<M>;

/// ⌈−log₂ p⌉ + 1 for a string of probability p > 0.
inline std::uint64_t sfe_length(const Prob& p) {
  if (p.is_zero()) fail(ErrorCode::zero_probability, "string has zero probability under the coding measure");
  return ceil_neg_log2(p) + 1;
}

template <ExactSequentialMeasure M>
std::uint64_t codeword_length_fixed(const FixedLengthCode<M>& code, std::span<const Symbol> x) {
  return sfe_length(code.measure.marginal(x));
}

template <ExactSequentialMeasure M>
void encode_fixed_into(const FixedLengthCode<M>& code, std::span<const Symbol> x, BitString& out) {
  if (x.size() != code.n) fail(ErrorCode::invalid_argument, "string length differs from the code's length class");
  const auto iv = detail::locate(code.measure, x);
  const std::uint64_t length = sfe_length(iv.mass());
  out.append(detail::midpoint_digits(iv, length));
}

template <ExactSequentialMeasure M>
BitString encode_fixed(const FixedLengthCode<M>& code, std::span<const Symbol> x) {
  BitString out;
  encode_fixed_into(code, x, out);
  return out;
}

/// Decodes one length-n codeword starting at the reader's position.
///
/// Symbols are resolved one at a time: the digits read so far pin the codeword
/// point to a dyadic interval, and a symbol is accepted once that interval lies
/// inside a single symbol's subinterval. A valid codeword never needs digits
/// beyond its own length, so the reader stops exactly at its end.
template <ExactSequentialMeasure M>
SymbolString read_fixed(const FixedLengthCode<M>& code, BitReader& reader) {
  const Alphabet alphabet = code.measure.alphabet();
  detail::CodingInterval iv;
  PrefixStats st;
  SymbolString x;
  x.reserve(std::min<std::size_t>(code.n, 1U << 16));
  BigInt value = 0;  // digits read so far, as an integer
  std::uint64_t read = 0;

  // Sign of (value/2^read − a/b).
  const auto compare_point = [&](const BigInt& a, const BigInt& b) {
    const BigInt lhs = value * b;
    const BigInt rhs = a << read;
    return lhs < rhs ? -1 : (lhs == rhs ? 0 : 1);
  };
  const auto read_digit = [&] {
    value = (value << 1) | static_cast<unsigned>(reader.read());
    ++read;
  };

  for (std::size_t i = 0; i < code.n; ++i) {
    for (;;) {
      // Find the subinterval containing the left end of the digit interval.
      Symbol found = 0;
      bool have = false;
      detail::CodingInterval sub;
      for (Symbol s = first_symbol(alphabet); in_alphabet(alphabet, s); ++s) {
        const Prob mass = code.measure.conditional(st, s);
        if (mass.is_zero()) continue;
        sub = iv;
        sub.refine(code.measure.cumulative_below(st, s), mass);
        if (compare_point(sub.low + sub.width, sub.den) < 0) {
          found = s;
          have = true;
          break;
        }
      }
      if (!have) fail(ErrorCode::malformed_codeword, "digits select no positive-mass symbol");
      // Accept when the right end (value + 1)/2^read also stays inside.
      const BigInt right = (value + 1) * sub.den;
      if (right <= ((sub.low + sub.width) << read)) {
        iv = std::move(sub);
        x.push_back(found);
        st.push(found);
        break;
      }
      read_digit();
    }
  }

  const std::uint64_t length = sfe_length(iv.mass());
  if (read > length) fail(ErrorCode::malformed_codeword, "digits extend past the promised codeword length");
  while (read < length) read_digit();
  if (value != detail::midpoint_value(iv, length))
    fail(ErrorCode::malformed_codeword, "digits do not form the codeword of the decoded string");
  return x;
}

template <ExactSequentialMeasure M>
std::pair<SymbolString, std::size_t> decode_fixed(const FixedLengthCode<M>& code, const BitString& bits) {
  BitReader reader(bits);
  SymbolString x = read_fixed(code, reader);
  return {std::move(x), reader.position()};
}

}  // namespace ucode
