#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ucode/bits.hpp"
#include "ucode/error.hpp"
#include "ucode/integer_codes.hpp"
#include "ucode/measures.hpp"

namespace ucode {

// ---------------------------------------------------------------------------
// LZ78
// ---------------------------------------------------------------------------

/// One parsed phrase: a dictionary reference plus a fresh symbol. Only the
/// final phrase may lack the fresh symbol (input ended inside a match).
struct Lz78Phrase {
  std::uint64_t index = 0;  // 0 is the empty phrase
  std::optional<Symbol> symbol;

  friend bool operator==(const Lz78Phrase&, const Lz78Phrase&) = default;
};

/// Incremental LZ78 parser over a trie of phrases.
class Lz78Parser {
 public:
  /// Feeds one symbol; returns the phrase it completes, if any.
  std::optional<Lz78Phrase> push(Symbol s) {
    const auto it = children_.find({current_, s});
    if (it != children_.end()) {
      current_ = it->second;
      return std::nullopt;
    }
    const Lz78Phrase phrase{current_, s};
    children_.emplace(std::pair{current_, s}, ++phrases_);
    current_ = 0;
    return phrase;
  }

  /// Dictionary entry of the pending partial phrase; 0 when none.
  [[nodiscard]] std::uint64_t pending() const noexcept { return current_; }
  [[nodiscard]] std::uint64_t dictionary_size() const noexcept { return phrases_ + 1; }

 private:
  std::map<std::pair<std::uint64_t, Symbol>, std::uint64_t> children_;
  std::uint64_t current_ = 0;
  std::uint64_t phrases_ = 0;
};

inline std::vector<Lz78Phrase> lz78_parse(std::span<const Symbol> x) {
  Lz78Parser parser;
  std::vector<Lz78Phrase> out;
  for (Symbol s : x)
    if (auto p = parser.push(s)) out.push_back(*p);
  if (parser.pending() != 0) out.push_back({parser.pending(), std::nullopt});
  return out;
}

/// LZ78 code. Payload: a flag bit (1 iff the last phrase is partial), then per
/// phrase ω(index + 1) and ω(symbol), the symbol omitted on a partial last
/// phrase. The string length is carried by the framing header c(n).
struct Lz78Codec {
  Alphabet alphabet = Alphabet::naturals;
  IntegerCode symbol_code = IntegerCode::omega();

  class Tracker {
   public:
    explicit Tracker(const Lz78Codec& codec) : codec_(&codec) {}

    void push(Symbol s) {
      detail::require_symbol(codec_->alphabet, s);
      if (auto p = parser_.push(s))
        cost_ += int_code_length(codec_->symbol_code, p->index + 1) +
                 int_code_length(codec_->symbol_code, symbol_to_positive(codec_->alphabet, s));
      ++n_;
    }

    /// Framed codeword length of the current prefix.
    [[nodiscard]] std::uint64_t length() const {
      std::uint64_t len = int_code_length(codec_->symbol_code, n_) + 1 + cost_;
      if (parser_.pending() != 0) len += int_code_length(codec_->symbol_code, parser_.pending() + 1);
      return len;
    }

   private:
    const Lz78Codec* codec_;
    Lz78Parser parser_;
    std::uint64_t cost_ = 0;
    std::uint64_t n_ = 0;
  };

  [[nodiscard]] Tracker tracker() const { return Tracker(*this); }
};

inline void lz78_encode_into(const Lz78Codec& codec, std::span<const Symbol> x, BitString& out) {
  detail::require_nonempty(x);
  const auto phrases = lz78_parse(x);
  out.push_back(!phrases.back().symbol.has_value());
  for (const auto& p : phrases) {
    encode_int_into(codec.symbol_code, p.index + 1, out);
    if (p.symbol) {
      detail::require_symbol(codec.alphabet, *p.symbol);
      encode_int_into(codec.symbol_code, symbol_to_positive(codec.alphabet, *p.symbol), out);
    }
  }
}

inline BitString lz78_encode(const Lz78Codec& codec, std::span<const Symbol> x) {
  BitString out;
  lz78_encode_into(codec, x, out);
  return out;
}

/// Reads an LZ78 payload for a string of length n.
inline SymbolString lz78_read(const Lz78Codec& codec, BitReader& reader, std::uint64_t n) {
  if (n == 0) fail(ErrorCode::invalid_argument, "LZ78 payloads encode nonempty strings");
  const bool partial_last = reader.read();
  // Dictionary entries as (parent, symbol, length).
  struct Entry {
    std::uint64_t parent;
    Symbol symbol;
    std::uint64_t length;
  };
  std::vector<Entry> dict{{0, 0, 0}};
  SymbolString x;
  x.reserve(std::min<std::uint64_t>(n, 1U << 20));
  const auto append_phrase = [&](std::uint64_t index) {
    const std::size_t at = x.size();
    x.resize(at + dict[index].length);
    for (std::uint64_t i = index; i != 0; i = dict[i].parent) x[at + dict[i].length - 1] = dict[i].symbol;
  };
  while (x.size() < n) {
    const std::uint64_t index = read_int(codec.symbol_code, reader) - 1;
    if (index >= dict.size()) fail(ErrorCode::malformed_codeword, "LZ78 phrase references an unknown entry");
    const std::uint64_t reach = x.size() + dict[index].length;
    if (partial_last && reach == n && index != 0) {
      append_phrase(index);
      break;
    }
    if (reach + 1 > n) fail(ErrorCode::malformed_codeword, "LZ78 phrase overruns the string length");
    const Symbol s = positive_to_symbol(codec.alphabet, read_int(codec.symbol_code, reader));
    if (!in_alphabet(codec.alphabet, s)) fail(ErrorCode::malformed_codeword, "LZ78 symbol outside the alphabet");
    append_phrase(index);
    x.push_back(s);
    dict.push_back({index, s, dict[index].length + 1});
    if (partial_last && x.size() == n) fail(ErrorCode::malformed_codeword, "LZ78 stream promised a partial last phrase");
  }
  return x;
}

inline SymbolString lz78_decode(const Lz78Codec& codec, const BitString& bits, std::uint64_t n) {
  BitReader reader(bits);
  return lz78_read(codec, reader, n);
}

// ---------------------------------------------------------------------------
// Per-symbol integer code
// ---------------------------------------------------------------------------

/// Each symbol written with the integer code, after a c(n) length header.
struct PerSymbolCodec {
  Alphabet alphabet = Alphabet::naturals;
  IntegerCode symbol_code = IntegerCode::omega();

  class Tracker {
   public:
    explicit Tracker(const PerSymbolCodec& codec) : codec_(&codec) {}
    void push(Symbol s) {
      detail::require_symbol(codec_->alphabet, s);
      body_ += int_code_length(codec_->symbol_code, symbol_to_positive(codec_->alphabet, s));
      ++n_;
    }
    [[nodiscard]] std::uint64_t length() const { return int_code_length(codec_->symbol_code, n_) + body_; }
    /// Σ |c(xᵢ)| without the header.
    [[nodiscard]] std::uint64_t body_length() const noexcept { return body_; }

   private:
    const PerSymbolCodec* codec_;
    std::uint64_t body_ = 0;
    std::uint64_t n_ = 0;
  };

  [[nodiscard]] Tracker tracker() const { return Tracker(*this); }
};

/// Σ |c(xᵢ)| under the ω-code; binary symbols map 0 → 1, 1 → 2.
inline std::uint64_t per_symbol_length(std::span<const Symbol> x, Alphabet alphabet = Alphabet::naturals,
                                       const IntegerCode& code = IntegerCode::omega()) {
  std::uint64_t total = 0;
  for (Symbol s : x) {
    detail::require_symbol(alphabet, s);
    total += int_code_length(code, symbol_to_positive(alphabet, s));
  }
  return total;
}

inline void per_symbol_encode_into(const PerSymbolCodec& codec, std::span<const Symbol> x, BitString& out) {
  for (Symbol s : x) {
    detail::require_symbol(codec.alphabet, s);
    encode_int_into(codec.symbol_code, symbol_to_positive(codec.alphabet, s), out);
  }
}

inline SymbolString per_symbol_read(const PerSymbolCodec& codec, BitReader& reader, std::uint64_t n) {
  SymbolString x;
  x.reserve(std::min<std::uint64_t>(n, 1U << 20));
  for (std::uint64_t i = 0; i < n; ++i) {
    const Symbol s = positive_to_symbol(codec.alphabet, read_int(codec.symbol_code, reader));
    if (!in_alphabet(codec.alphabet, s)) fail(ErrorCode::malformed_codeword, "symbol outside the alphabet");
    x.push_back(s);
  }
  return x;
}

}  // namespace ucode
