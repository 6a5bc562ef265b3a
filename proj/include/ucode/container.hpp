#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ucode/bits.hpp"
#include "ucode/codec.hpp"
#include "ucode/error.hpp"

namespace ucode {

// Byte layout:
//   "BYC1" | code-id | measure-id | param length L | L bytes of decimal params | payload
// The payload is one codeword packed most significant bit first and
// zero-padded to a byte boundary.
//
// measure-id: 1 bernoulli, 2 laplace, 3 geometric (Bayesian code);
//             0x10 | alphabet for LZ78, 0x20 | alphabet for the per-symbol code,
//             alphabet 0 = binary, 1 = positive integers.

inline constexpr char kContainerMagic[4] = {'B', 'Y', 'C', '1'};

namespace detail {

constexpr std::uint8_t alphabet_bits(Alphabet a) noexcept { return a == Alphabet::binary ? 0 : 1; }

}  // namespace detail

inline std::uint8_t container_measure_id(const AnyCodec& codec) {
  switch (codec.kind()) {
    case CodecKind::bayes:
      return static_cast<std::uint8_t>(std::get<BayesianCode<AnyMeasure>>(codec.variant()).mixture.id());
    case CodecKind::lz78: return static_cast<std::uint8_t>(0x10 | detail::alphabet_bits(codec.alphabet()));
    case CodecKind::per_symbol: return static_cast<std::uint8_t>(0x20 | detail::alphabet_bits(codec.alphabet()));
  }
  fail(ErrorCode::internal, "unknown codec kind");
}

inline std::string container_params(const AnyCodec& codec) {
  if (codec.kind() == CodecKind::bayes) return std::get<BayesianCode<AnyMeasure>>(codec.variant()).mixture.params();
  return {};
}

inline AnyCodec codec_from_ids(std::uint8_t code_id, std::uint8_t measure_id, const std::string& params) {
  if (code_id > 1) fail(ErrorCode::bad_container, "unknown integer code id " + std::to_string(code_id));
  const IntegerCode code{static_cast<IntegerCodeKind>(code_id), 2};
  const Alphabet alphabet = (measure_id & 1) != 0 ? Alphabet::naturals : Alphabet::binary;
  switch (measure_id & 0xF0) {
    case 0x00:
      if (measure_id < 1 || measure_id > 3) break;
      return AnyCodec::bayes(make_measure(static_cast<MeasureId>(measure_id), params), code);
    case 0x10:
      if ((measure_id & 0x0E) != 0) break;
      return Lz78Codec{alphabet, code};
    case 0x20:
      if ((measure_id & 0x0E) != 0) break;
      return PerSymbolCodec{alphabet, code};
    default: break;
  }
  fail(ErrorCode::bad_container, "unknown measure id " + std::to_string(measure_id));
}

inline std::vector<std::uint8_t> write_container(const AnyCodec& codec, std::span<const Symbol> x) {
  const std::string params = container_params(codec);
  if (params.size() > 255) fail(ErrorCode::invalid_argument, "measure parameters exceed 255 bytes");
  std::vector<std::uint8_t> out(std::begin(kContainerMagic), std::end(kContainerMagic));
  out.push_back(static_cast<std::uint8_t>(codec.integer_code().kind));
  out.push_back(container_measure_id(codec));
  out.push_back(static_cast<std::uint8_t>(params.size()));
  out.insert(out.end(), params.begin(), params.end());
  const auto payload = codec.encode(x).to_bytes();
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

struct ContainerContents {
  AnyCodec codec;
  SymbolString symbols;
};

inline ContainerContents read_container(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 7 || !std::equal(std::begin(kContainerMagic), std::end(kContainerMagic), bytes.begin()))
    fail(ErrorCode::bad_container, "missing BYC1 header");
  const std::uint8_t code_id = bytes[4];
  const std::uint8_t measure_id = bytes[5];
  const std::size_t param_len = bytes[6];
  if (bytes.size() < 7 + param_len) fail(ErrorCode::bad_container, "truncated parameter field");
  const std::string params(bytes.begin() + 7, bytes.begin() + 7 + static_cast<std::ptrdiff_t>(param_len));
  AnyCodec codec = codec_from_ids(code_id, measure_id, params);
  const BitString payload = BitString::from_bytes(bytes.subspan(7 + param_len));
  BitReader reader(payload);
  SymbolString x = codec.read(reader);
  if (reader.remaining() >= 8) fail(ErrorCode::bad_container, "trailing bytes after the codeword");
  while (!reader.at_end())
    if (reader.read()) fail(ErrorCode::bad_container, "nonzero padding bits");
  return {std::move(codec), std::move(x)};
}

}  // namespace ucode
