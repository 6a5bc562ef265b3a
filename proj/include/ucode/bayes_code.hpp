#pragma once

#include <cstdint>
#include <span>
#include <utility>

#include "ucode/bits.hpp"
#include "ucode/error.hpp"
#include "ucode/integer_codes.hpp"
#include "ucode/measures.hpp"
#include "ucode/numeric.hpp"
#include "ucode/sfe_coder.hpp"

namespace ucode {

/// Prefix code for strings of every positive length: the integer codeword of
/// |x| followed by the fixed-length codeword of x under the mixture measure.
/// |C(x)| = |c(|x|)| + ⌈−log₂ P(x)⌉ + 1.
template <ExactSequentialMeasure M>
struct BayesianCode {
  IntegerCode length_code;
  M mixture;

  /// Incremental codeword length of a growing prefix.
  class Tracker {
   public:
    explicit Tracker(const BayesianCode& code) : code_(&code) {}

    void push(Symbol s) {
      prob_ *= code_->mixture.conditional(stats_, s);
      stats_.push(s);
    }

    [[nodiscard]] std::uint64_t length() const {
      return int_code_length(code_->length_code, stats_.length) + sfe_length(prob_);
    }
    /// Mixture probability of the current prefix.
    [[nodiscard]] const Prob& mixture_prob() const noexcept { return prob_; }
    [[nodiscard]] std::uint64_t size() const noexcept { return stats_.length; }

   private:
    const BayesianCode* code_;
    PrefixStats stats_;
    Prob prob_;
  };

  [[nodiscard]] Tracker tracker() const { return Tracker(*this); }
};

template <ExactSequentialMeasure M>
BayesianCode(IntegerCode, M) -> BayesianCode<M>;

template <ExactSequentialMeasure M>
std::uint64_t total_length(const BayesianCode<M>& code, std::span<const Symbol> x) {
  detail::require_nonempty(x);
  return int_code_length(code.length_code, x.size()) + sfe_length(code.mixture.marginal(x));
}

template <ExactSequentialMeasure M>
void encode_into(const BayesianCode<M>& code, std::span<const Symbol> x, BitString& out) {
  detail::require_nonempty(x);
  // Probability is checked before anything is written.
  if (code.mixture.marginal(x).is_zero())
    fail(ErrorCode::zero_probability, "string has zero probability under the mixture");
  encode_int_into(code.length_code, x.size(), out);
  encode_fixed_into(FixedLengthCode<M>{code.mixture, x.size()}, x, out);
}

template <ExactSequentialMeasure M>
BitString encode(const BayesianCode<M>& code, std::span<const Symbol> x) {
  BitString out;
  encode_into(code, x, out);
  return out;
}

template <ExactSequentialMeasure M>
SymbolString read(const BayesianCode<M>& code, BitReader& reader) {
  const std::uint64_t n = read_int(code.length_code, reader);
  return read_fixed(FixedLengthCode<M>{code.mixture, n}, reader);
}

template <ExactSequentialMeasure M>
std::pair<SymbolString, std::size_t> decode(const BayesianCode<M>& code, const BitString& bits) {
  BitReader reader(bits);
  SymbolString x = read(code, reader);
  return {std::move(x), reader.position()};
}

}  // namespace ucode
