#pragma once

#include <bit>
#include <cstdint>
#include <string_view>
#include <utility>

#include "ucode/bits.hpp"
#include "ucode/error.hpp"

namespace ucode {

enum class IntegerCodeKind : std::uint8_t { omega = 0, unary = 1 };

constexpr std::string_view to_string(IntegerCodeKind kind) noexcept {
  return kind == IntegerCodeKind::omega ? "omega" : "unary";
}

/// Prefix-free code for the positive integers.
///
/// The Elias ω-code writes n as recursively prepended binary groups: starting
/// from a terminating "0", prepend bin(n), then bin(|bin(n)| − 1), and so on
/// until the group value reaches 1. Only the binary output alphabet is
/// implemented.
struct IntegerCode {
  IntegerCodeKind kind = IntegerCodeKind::omega;
  unsigned base = 2;

  static constexpr IntegerCode omega() noexcept { return {}; }
  static constexpr IntegerCode unary() noexcept { return {IntegerCodeKind::unary, 2}; }

  void validate() const {
    if (base != 2) fail(ErrorCode::unsupported_base, "integer codes are implemented for base 2 only");
  }

  friend constexpr bool operator==(const IntegerCode&, const IntegerCode&) = default;
};

namespace detail {

inline void require_positive(std::uint64_t n) {
  if (n == 0) fail(ErrorCode::invalid_argument, "integer codes are defined for n >= 1");
}

constexpr unsigned binary_width(std::uint64_t n) noexcept {
  return static_cast<unsigned>(std::bit_width(n));
}

}  // namespace detail

inline std::uint64_t int_code_length(const IntegerCode& code, std::uint64_t n) {
  code.validate();
  detail::require_positive(n);
  if (code.kind == IntegerCodeKind::unary) return n;
  std::uint64_t length = 1;
  while (n > 1) {
    const unsigned w = detail::binary_width(n);
    length += w;
    n = w - 1;
  }
  return length;
}

/// Appends the codeword of n to `out`.
inline void encode_int_into(const IntegerCode& code, std::uint64_t n, BitString& out) {
  code.validate();
  detail::require_positive(n);
  if (code.kind == IntegerCodeKind::unary) {
    for (std::uint64_t i = 1; i < n; ++i) out.push_back(true);
    out.push_back(false);
    return;
  }
  // Groups are produced least significant first, then emitted in reverse.
  std::uint64_t groups[8];
  unsigned count = 0;
  while (n > 1) {
    groups[count++] = n;
    n = detail::binary_width(n) - 1;
  }
  while (count > 0) {
    const std::uint64_t g = groups[--count];
    out.append_bits(g, detail::binary_width(g));
  }
  out.push_back(false);
}

inline BitString encode_int(const IntegerCode& code, std::uint64_t n) {
  BitString out;
  encode_int_into(code, n, out);
  return out;
}

/// Reads one codeword at the reader's position.
inline std::uint64_t read_int(const IntegerCode& code, BitReader& reader) {
  code.validate();
  if (code.kind == IntegerCodeKind::unary) {
    std::uint64_t n = 1;
    while (reader.read()) {
      if (n == UINT64_MAX) fail(ErrorCode::malformed_codeword, "unary codeword overflows 64 bits");
      ++n;
    }
    return n;
  }
  std::uint64_t n = 1;
  while (reader.read()) {
    // The leading 1 of the group has been consumed; n further bits follow.
    if (n >= 64) fail(ErrorCode::malformed_codeword, "omega codeword overflows 64 bits");
    n = (std::uint64_t{1} << n) | reader.read_bits(static_cast<unsigned>(n));
  }
  return n;
}

/// Decodes the codeword at the start of `bits`; returns (n, bits consumed).
inline std::pair<std::uint64_t, std::size_t> decode_int(const IntegerCode& code, const BitString& bits) {
  BitReader reader(bits);
  const std::uint64_t n = read_int(code, reader);
  return {n, reader.position()};
}

}  // namespace ucode
