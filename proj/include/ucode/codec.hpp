#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "ucode/baselines.hpp"
#include "ucode/bayes_code.hpp"
#include "ucode/bits.hpp"
#include "ucode/integer_codes.hpp"
#include "ucode/measures.hpp"

namespace ucode {

enum class CodecKind : std::uint8_t { bayes, lz78, per_symbol };

constexpr std::string_view to_string(CodecKind k) noexcept {
  switch (k) {
    case CodecKind::bayes: return "bayes";
    case CodecKind::lz78: return "lz78";
    case CodecKind::per_symbol: return "persymbol";
  }
  return "unknown";
}

/// Any of the implemented prefix codes for strings of every positive length,
/// in the framing shared by files and experiments: Bayesian codewords carry
/// their own length prefix, the baselines are preceded by c(n).
class AnyCodec {
 public:
  using Variant = std::variant<BayesianCode<AnyMeasure>, Lz78Codec, PerSymbolCodec>;

  AnyCodec(BayesianCode<AnyMeasure> c) : v_(std::move(c)) {}  // NOLINT(google-explicit-constructor)
  AnyCodec(Lz78Codec c) : v_(c) {}                             // NOLINT(google-explicit-constructor)
  AnyCodec(PerSymbolCodec c) : v_(c) {}                        // NOLINT(google-explicit-constructor)

  static AnyCodec bayes(AnyMeasure mixture, IntegerCode code = IntegerCode::omega()) {
    return BayesianCode<AnyMeasure>{code, std::move(mixture)};
  }

  [[nodiscard]] CodecKind kind() const noexcept { return static_cast<CodecKind>(v_.index()); }
  [[nodiscard]] const Variant& variant() const noexcept { return v_; }

  [[nodiscard]] IntegerCode integer_code() const {
    return std::visit(
        [](const auto& c) {
          if constexpr (std::is_same_v<std::decay_t<decltype(c)>, BayesianCode<AnyMeasure>>)
            return c.length_code;
          else
            return c.symbol_code;
        },
        v_);
  }

  [[nodiscard]] Alphabet alphabet() const {
    return std::visit(
        [](const auto& c) {
          if constexpr (std::is_same_v<std::decay_t<decltype(c)>, BayesianCode<AnyMeasure>>)
            return c.mixture.alphabet();
          else
            return c.alphabet;
        },
        v_);
  }

  /// Short identifier used in reports, e.g. "bayes-laplace", "lz78".
  [[nodiscard]] std::string name() const {
    if (const auto* b = std::get_if<BayesianCode<AnyMeasure>>(&v_))
      return "bayes-" + std::string(to_string(b->mixture.id()));
    return std::string(to_string(kind()));
  }

  void encode_into(std::span<const Symbol> x, BitString& out) const {
    detail::require_nonempty(x);
    std::visit(
        [&](const auto& c) {
          using C = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<C, BayesianCode<AnyMeasure>>) {
            ucode::encode_into(c, x, out);
          } else if constexpr (std::is_same_v<C, Lz78Codec>) {
            BitString body;
            lz78_encode_into(c, x, body);
            encode_int_into(c.symbol_code, x.size(), out);
            out.append(body);
          } else {
            BitString body;
            per_symbol_encode_into(c, x, body);
            encode_int_into(c.symbol_code, x.size(), out);
            out.append(body);
          }
        },
        v_);
  }

  [[nodiscard]] BitString encode(std::span<const Symbol> x) const {
    BitString out;
    encode_into(x, out);
    return out;
  }

  SymbolString read(BitReader& reader) const {
    return std::visit(
        [&](const auto& c) -> SymbolString {
          using C = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<C, BayesianCode<AnyMeasure>>) {
            return ucode::read(c, reader);
          } else if constexpr (std::is_same_v<C, Lz78Codec>) {
            return lz78_read(c, reader, read_int(c.symbol_code, reader));
          } else {
            return per_symbol_read(c, reader, read_int(c.symbol_code, reader));
          }
        },
        v_);
  }

  [[nodiscard]] std::pair<SymbolString, std::size_t> decode(const BitString& bits) const {
    BitReader reader(bits);
    SymbolString x = read(reader);
    return {std::move(x), reader.position()};
  }

  /// Incremental codeword length over prefixes of a growing string.
  class Tracker {
   public:
    using Inner = std::variant<BayesianCode<AnyMeasure>::Tracker, Lz78Codec::Tracker, PerSymbolCodec::Tracker>;
    explicit Tracker(Inner inner) : inner_(std::move(inner)) {}
    void push(Symbol s) {
      std::visit([s](auto& t) { t.push(s); }, inner_);
    }
    [[nodiscard]] std::uint64_t length() const {
      return std::visit([](const auto& t) { return t.length(); }, inner_);
    }

   private:
    Inner inner_;
  };

  /// The tracker refers to *this, which must outlive it.
  [[nodiscard]] Tracker tracker() const {
    return std::visit([](const auto& c) { return Tracker(typename Tracker::Inner(c.tracker())); }, v_);
  }

  [[nodiscard]] std::uint64_t total_length(std::span<const Symbol> x) const {
    detail::require_nonempty(x);
    if (const auto* b = std::get_if<BayesianCode<AnyMeasure>>(&v_)) return ucode::total_length(*b, x);
    auto t = tracker();
    for (Symbol s : x) t.push(s);
    return t.length();
  }

 private:
  Variant v_;
};

}  // namespace ucode
