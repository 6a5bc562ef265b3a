#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ucode {

enum class ErrorCode {
  invalid_argument,     // n = 0, bad parameters, unsupported options
  unsupported_base,
  truncated_codeword,
  malformed_codeword,
  zero_probability,     // string with zero mass under the coding measure
  zero_mass_prefix,     // conditional requested after a null prefix
  precision_exhausted,
  bad_container,
  internal,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::unsupported_base: return "unsupported_base";
    case ErrorCode::truncated_codeword: return "truncated_codeword";
    case ErrorCode::malformed_codeword: return "malformed_codeword";
    case ErrorCode::zero_probability: return "zero_probability";
    case ErrorCode::zero_mass_prefix: return "zero_mass_prefix";
    case ErrorCode::precision_exhausted: return "precision_exhausted";
    case ErrorCode::bad_container: return "bad_container";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace ucode
