#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>

#include "ucode/genparam.hpp"
#include "ucode/measures.hpp"

using namespace ucode;

namespace {

SymbolString random_binary(Rng& rng, std::size_t n) {
  SymbolString x(n);
  for (auto& s : x) s = rng.next() >> 63;
  return x;
}

// Composite Simpson rule for ∫₀¹ θ^a (1−θ)^b dθ.
double beta_integral(unsigned a, unsigned b) {
  const int steps = 20000;
  const double h = 1.0 / steps;
  double sum = 0;
  for (int i = 0; i <= steps; ++i) {
    const double t = i * h;
    const double w = (i == 0 || i == steps) ? 1 : (i % 2 ? 4 : 2);
    sum += w * std::pow(t, a) * std::pow(1 - t, b);
  }
  return sum * h / 3;
}

}  // namespace

TEST_CASE("marginal probabilities of the closed-form measures") {
  const SymbolString geo{1, 2, 3};
  CHECK(marginal_prob(GeometricMixture{}, geo) == Rational(1, 64));

  const SymbolString x{0, 1, 1, 0};
  CHECK(marginal_prob(LaplaceMixture{}, x) == Rational(1, 30));
  CHECK(std::abs(beta_integral(2, 2) - 1.0 / 30) < 1e-12);

  Rng rng(3);
  for (std::size_t n = 0; n <= 12; ++n)
    CHECK(marginal_prob(BernoulliSource(Rational(1, 2)), random_binary(rng, n)) == Rational(1, BigInt(1) << n));
}

TEST_CASE("Laplace marginal matches the Beta integral") {
  for (unsigned a = 0; a <= 6; ++a)
    for (unsigned b = 0; b <= 6; ++b) {
      SymbolString x(a, 1);
      x.insert(x.end(), b, 0);
      const double exact = static_cast<double>(marginal_prob(LaplaceMixture{}, x));
      CHECK(std::abs(exact - beta_integral(a, b)) < 1e-10);
    }
}

TEST_CASE("conditional probabilities") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto prefix = random_binary(rng, rng.below(20));
    const auto ones = static_cast<std::uint64_t>(std::count(prefix.begin(), prefix.end(), 1U));
    const Rational c = conditional_prob(LaplaceMixture{}, prefix, 1);
    CHECK(c == Rational(BigInt(ones + 1), BigInt(prefix.size() + 2)));
    auto extended = prefix;
    extended.push_back(1);
    CHECK(marginal_prob(LaplaceMixture{}, extended) == marginal_prob(LaplaceMixture{}, prefix) * c);
  }
  const SymbolString prefix{5, 1, 2};
  for (Symbol k = 1; k <= 10; ++k)
    CHECK(conditional_prob(GeometricMixture{}, prefix, k) == Rational(1, BigInt(1) << k));
  const SymbolString bp{0, 1, 1};
  CHECK(conditional_prob(BernoulliSource(Rational(3, 7)), bp, 1) == Rational(3, 7));
}

TEST_CASE("zero-mass prefixes and foreign symbols are rejected") {
  const BernoulliSource certain(Rational(1));
  const SymbolString prefix{0};
  CHECK(marginal_prob(certain, prefix) == 0);
  try {
    (void)conditional_prob(certain, prefix, 1);
    FAIL("expected zero_mass_prefix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::zero_mass_prefix);
  }
  const SymbolString zero{0};
  CHECK_THROWS_AS(marginal_prob(GeometricMixture{}, zero), Error);
  const SymbolString two{2};
  CHECK_THROWS_AS(marginal_prob(LaplaceMixture{}, two), Error);
  CHECK_THROWS_AS(BernoulliSource(Rational(3, 2)), Error);
}

TEST_CASE("finite-alphabet normalization is exact") {
  Rng rng(5);
  const BernoulliSource bern(Rational(5, 13));
  for (int trial = 0; trial < 1000; ++trial) {
    const auto prefix = random_binary(rng, rng.below(40));
    CHECK(conditional_prob(LaplaceMixture{}, prefix, 0) + conditional_prob(LaplaceMixture{}, prefix, 1) == 1);
    CHECK(conditional_prob(bern, prefix, 0) + conditional_prob(bern, prefix, 1) == 1);
  }
}

TEST_CASE("geometric marginal identity on random strings") {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    SymbolString x(1 + rng.below(30));
    std::uint64_t sum = 0;
    for (auto& s : x) sum += (s = 1 + rng.below(12));
    CHECK(marginal_prob(GeometricMixture{}, x) == Rational(1, BigInt(1) << sum));
  }
}

TEST_CASE("Laplace mixture is exchangeable") {
  Rng rng(9);
  std::mt19937_64 shuffler(1);
  for (int trial = 0; trial < 100; ++trial) {
    auto x = random_binary(rng, 1 + rng.below(25));
    const Rational p = marginal_prob(LaplaceMixture{}, x);
    for (int k = 0; k < 10; ++k) {
      std::shuffle(x.begin(), x.end(), shuffler);
      CHECK(marginal_prob(LaplaceMixture{}, x) == p);
    }
  }
}

TEST_CASE("AnyMeasure forwards to the held measure") {
  const AnyMeasure m = BernoulliSource(Rational(1, 3));
  CHECK(m.id() == MeasureId::bernoulli);
  CHECK(m.params() == "1/3");
  const SymbolString x{1, 0};
  CHECK(marginal_prob(m, x) == Rational(2, 9));
  CHECK(make_measure(MeasureId::bernoulli, "1/3").params() == "1/3");
  CHECK(make_measure(MeasureId::geometric, "").alphabet() == Alphabet::naturals);
  CHECK_THROWS_AS(make_measure(MeasureId::bernoulli, "abc"), Error);
}

TEST_CASE("sample_sequence") {
  CHECK(sample_sequence(GeometricMixture{}, 0, 1).empty());
  CHECK(sample_sequence(BernoulliSource(Rational(1)), 5, 42) == SymbolString{1, 1, 1, 1, 1});
  CHECK(sample_sequence(BernoulliSource(Rational(0)), 3, 42) == SymbolString{0, 0, 0});
  CHECK(sample_sequence(LaplaceMixture{}, 50, 8) == sample_sequence(LaplaceMixture{}, 50, 8));
  CHECK(sample_sequence(LaplaceMixture{}, 50, 8) != sample_sequence(LaplaceMixture{}, 50, 9));

  // Symbol frequencies of the geometric mixture within 4σ binomial bounds.
  const std::size_t n = 100000;
  const auto x = sample_sequence(GeometricMixture{}, n, 2024);
  std::map<Symbol, std::size_t> counts;
  for (Symbol s : x) ++counts[s];
  for (Symbol k = 1; k <= 8; ++k) {
    const double p = std::ldexp(1.0, -static_cast<int>(k));
    const double sigma = std::sqrt(n * p * (1 - p));
    CHECK(std::abs(static_cast<double>(counts[k]) - n * p) <= 4 * sigma);
  }
}

TEST_CASE("sample_theta draws reproducible parameters") {
  PriorSampler a(77), b(77);
  for (int i = 0; i < 10; ++i) {
    const Rational t = a.sample_bernoulli_theta(16);
    CHECK(t == b.sample_bernoulli_theta(16));
    CHECK(t >= 0);
    CHECK(t < 1);
    // θ = m / 2^16
    CHECK((BigInt(1) << 16) % boost::multiprecision::denominator(t) == 0);
  }
  auto g1 = PriorSampler(5).sample_genparam();
  auto g2 = PriorSampler(5).sample_genparam();
  for (int i = 0; i < 100; ++i) CHECK(g1.digits().digit(BigInt(i)) == g2.digits().digit(BigInt(i)));

  PriorSampler prior(123);
  double sum = 0;
  for (int i = 0; i < 10000; ++i) sum += static_cast<double>(prior.sample_bernoulli_theta(16));
  CHECK(std::abs(sum / 10000 - 0.5) <= 0.015);
}
