#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ucode/error.hpp"

namespace ucode {

/// A finite sequence of binary output digits.
class BitString {
 public:
  BitString() = default;

  /// Parses a string of '0'/'1' characters.
  static BitString from_string(std::string_view text) {
    BitString out;
    out.bits_.reserve(text.size());
    for (char c : text) {
      if (c != '0' && c != '1') fail(ErrorCode::invalid_argument, "bit string contains non-binary character");
      out.bits_.push_back(c == '1');
    }
    return out;
  }

  void push_back(bool bit) { bits_.push_back(bit); }
  void append(const BitString& other) { bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end()); }

  /// Appends the low `width` bits of `value`, most significant first.
  void append_bits(std::uint64_t value, unsigned width) {
    for (unsigned i = width; i-- > 0;) bits_.push_back(((value >> i) & 1U) != 0);
  }

  [[nodiscard]] std::size_t size() const noexcept { return bits_.size(); }
  [[nodiscard]] bool empty() const noexcept { return bits_.empty(); }
  [[nodiscard]] bool operator[](std::size_t i) const { return bits_[i]; }

  [[nodiscard]] BitString slice(std::size_t from, std::size_t count) const {
    BitString out;
    out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(from),
                     bits_.begin() + static_cast<std::ptrdiff_t>(from + count));
    return out;
  }

  /// True if *this is a (not necessarily proper) prefix of `other`.
  [[nodiscard]] bool is_prefix_of(const BitString& other) const noexcept {
    if (size() > other.size()) return false;
    for (std::size_t i = 0; i < size(); ++i)
      if (bits_[i] != other.bits_[i]) return false;
    return true;
  }

  [[nodiscard]] std::string to_string() const {
    std::string out;
    out.reserve(bits_.size());
    for (bool b : bits_) out.push_back(b ? '1' : '0');
    return out;
  }

  /// Packs most-significant-bit first, zero-padded to a byte boundary.
  [[nodiscard]] std::vector<std::uint8_t> to_bytes() const {
    std::vector<std::uint8_t> out((bits_.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80U >> (i % 8));
    return out;
  }

  static BitString from_bytes(std::span<const std::uint8_t> bytes) {
    BitString out;
    out.bits_.reserve(bytes.size() * 8);
    for (std::uint8_t byte : bytes)
      for (int i = 7; i >= 0; --i) out.bits_.push_back(((byte >> i) & 1U) != 0);
    return out;
  }

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<bool> bits_;
};

/// Sequential cursor over a BitString. Reading past the end raises truncated_codeword.
class BitReader {
 public:
  explicit BitReader(const BitString& bits, std::size_t offset = 0) : bits_(&bits), pos_(offset) {}

  bool read() {
    if (pos_ >= bits_->size()) fail(ErrorCode::truncated_codeword, "bit stream ended inside a codeword");
    return (*bits_)[pos_++];
  }

  std::uint64_t read_bits(unsigned width) {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i) v = (v << 1) | static_cast<std::uint64_t>(read());
    return v;
  }

  [[nodiscard]] std::size_t position() const noexcept { return pos_; }
  [[nodiscard]] std::size_t remaining() const noexcept { return bits_->size() - pos_; }
  [[nodiscard]] bool at_end() const noexcept { return pos_ >= bits_->size(); }

 private:
  const BitString* bits_;
  std::size_t pos_;
};

}  // namespace ucode
