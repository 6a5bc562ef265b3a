#include <catch_amalgamated.hpp>

#include <string>

#include "ucode/integer_codes.hpp"

using namespace ucode;

namespace {

// Recursive ω-construction on strings: prepend bin(n), continue with |bin(n)| − 1.
std::string omega_oracle(std::uint64_t n) {
  std::string code = "0";
  while (n > 1) {
    std::string bin;
    for (std::uint64_t v = n; v > 0; v >>= 1) bin.insert(bin.begin(), static_cast<char>('0' + (v & 1)));
    code = bin + code;
    n = bin.size() - 1;
  }
  return code;
}

}  // namespace

TEST_CASE("omega codewords match the recursive construction") {
  CHECK(encode_int(IntegerCode::omega(), 1).to_string() == "0");
  CHECK(encode_int(IntegerCode::omega(), 2).to_string() == "100");
  CHECK(encode_int(IntegerCode::omega(), 4).to_string() == "101000");
  CHECK(encode_int(IntegerCode::omega(), 7).to_string() == "101110");
  CHECK(encode_int(IntegerCode::omega(), 16).to_string() == "10100100000");
  for (std::uint64_t n = 1; n <= 5000; ++n) REQUIRE(encode_int(IntegerCode::omega(), n).to_string() == omega_oracle(n));
  CHECK(encode_int(IntegerCode::omega(), UINT64_MAX).to_string() == omega_oracle(UINT64_MAX));
}

TEST_CASE("unary codewords") {
  CHECK(encode_int(IntegerCode::unary(), 3).to_string() == "110");
  CHECK(encode_int(IntegerCode::unary(), 1).to_string() == "0");
  for (std::uint64_t k = 1; k <= 50; ++k) CHECK(int_code_length(IntegerCode::unary(), k) == k);
}

TEST_CASE("decode_int returns value and consumed length") {
  const auto omega = IntegerCode::omega();
  auto [n1, c1] = decode_int(omega, BitString::from_string("0110"));
  CHECK(n1 == 1);
  CHECK(c1 == 1);
  auto [n4, c4] = decode_int(omega, BitString::from_string("101000"));
  CHECK(n4 == 4);
  CHECK(c4 == 6);
  auto [u, cu] = decode_int(IntegerCode::unary(), BitString::from_string("1110"));
  CHECK(u == 4);
  CHECK(cu == 4);
}

TEST_CASE("integer code errors") {
  const auto omega = IntegerCode::omega();
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::internal;
  };
  CHECK(code_of([&] { (void)encode_int(omega, 0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { (void)int_code_length(omega, 0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { (void)decode_int(omega, BitString::from_string("10")); }) == ErrorCode::truncated_codeword);
  CHECK(code_of([&] { (void)decode_int(omega, BitString{}); }) == ErrorCode::truncated_codeword);
  CHECK(code_of([&] { (void)encode_int(IntegerCode{IntegerCodeKind::omega, 3}, 5); }) == ErrorCode::unsupported_base);
  // Group lengths that overflow 64 bits are rejected rather than wrapped.
  CHECK(code_of([&] { (void)decode_int(omega, BitString::from_string(std::string(200, '1'))); }) ==
        ErrorCode::malformed_codeword);
}

TEST_CASE("omega round trip and length function") {
  const auto omega = IntegerCode::omega();
  for (std::uint64_t n = 1; n <= 10000; ++n) {
    const auto bits = encode_int(omega, n);
    const auto [m, used] = decode_int(omega, bits);
    REQUIRE(m == n);
    REQUIRE(used == bits.size());
  }
  for (std::uint64_t n = 1; n <= 100000; ++n) REQUIRE(int_code_length(omega, n) == encode_int(omega, n).size());
}

TEST_CASE("omega code is prefix-free on [1, 2000]") {
  std::vector<BitString> words;
  for (std::uint64_t n = 1; n <= 2000; ++n) words.push_back(encode_int(IntegerCode::omega(), n));
  for (std::size_t i = 0; i < words.size(); ++i)
    for (std::size_t j = 0; j < words.size(); ++j)
      if (i != j) REQUIRE_FALSE(words[i].is_prefix_of(words[j]));
}

TEST_CASE("omega lengths are monotone and satisfy Kraft") {
  const auto omega = IntegerCode::omega();
  std::uint64_t prev = 0;
  for (std::uint64_t n = 1; n <= 1000000; n += (n < 100000 ? 1 : 997)) {
    const auto len = int_code_length(omega, n);
    REQUIRE(len >= prev);
    prev = len;
  }
  // Exact partial sum over n ≤ 10^6, scaled by 2^40.
  std::uint64_t partial = 0;
  for (std::uint64_t n = 1; n <= 1000000; ++n) partial += std::uint64_t{1} << (40 - int_code_length(omega, n));
  CHECK(partial <= (std::uint64_t{1} << 40));
  // Full sum by blocks of equal binary width: 2^{b−1} values share one length.
  long double total = 0;
  for (unsigned b = 1; b <= 64; ++b) {
    const std::uint64_t first = std::uint64_t{1} << (b - 1);
    total += std::ldexp(1.0L, static_cast<int>(b - 1) - static_cast<int>(int_code_length(omega, first)));
  }
  CHECK(total <= 1.0L);
}
