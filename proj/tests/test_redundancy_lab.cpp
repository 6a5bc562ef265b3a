#include <catch_amalgamated.hpp>

#include <cmath>

#include "ucode/redundancy_lab.hpp"

using namespace ucode;

namespace {

const auto omega = IntegerCode::omega();
constexpr std::int64_t kOne = std::int64_t{1} << kLogFracBits;

// Catch-up bound by re-encoding every prefix and comparing materialized codewords.
std::uint64_t catchup_by_rescan(std::span<const Symbol> x, const AnyCodec& c1, const AnyCodec& c2, const Margin& f,
                                std::int64_t delta) {
  std::uint64_t best = 0;
  for (std::size_t n = 1; n <= x.size(); ++n) {
    const auto prefix = x.first(n);
    const auto l1 = static_cast<std::int64_t>(c1.encode(prefix).size());
    const auto l2 = static_cast<std::int64_t>(c2.encode(prefix).size());
    if (l1 - l2 - delta >= f(n)) best = n;
  }
  return best;
}

}  // namespace

TEST_CASE("self-redundancy of the geometric Bayesian code") {
  const AnyCodec codec = AnyCodec::bayes(GeometricMixture{});
  const auto x = sample_sequence(GeometricMixture{}, 200, 3);
  const auto traj = trajectory(codec, AnyMeasure(GeometricMixture{}), GeometricMixture{}, x);
  REQUIRE(traj.rows.size() == x.size());
  std::uint64_t sum = 0;
  for (const auto& row : traj.rows) {
    sum += x[row.n - 1];
    const auto c = static_cast<std::int64_t>(int_code_length(omega, row.n));
    // −log₂ P is the integer Σ xᵢ, so the redundancy is exactly |c(n)| + 1.
    CHECK(row.neg_log_true_fixed() == static_cast<std::int64_t>(sum) * kOne);
    CHECK(row.shannon_red_fixed() == (c + 1) * kOne);
    CHECK(row.code_len == int_code_length(omega, row.n) + sum + 1);
    CHECK_FALSE(row.barron_violation);
  }
}

TEST_CASE("Laplace code against a fair coin") {
  const AnyCodec codec = AnyCodec::bayes(LaplaceMixture{});
  const SymbolString x{0, 1, 1, 0};
  const auto traj = trajectory(codec, AnyMeasure(BernoulliSource(Rational(1, 2))), LaplaceMixture{}, x);
  const auto& last = traj.rows.back();
  CHECK(last.code_len == 12);
  CHECK(last.neg_log_true_fixed() == 4 * kOne);
  CHECK(last.shannon_red_fixed() == 8 * kOne);
  CHECK(last.mixture_prob == Prob(BigInt(1), BigInt(30)));
  CHECK(std::abs(static_cast<double>(last.neg_log_mixture_fixed()) / kOne - std::log2(30.0)) < 1e-9);

  // The first row equals the computation on x¹ alone.
  const auto first = trajectory(codec, AnyMeasure(BernoulliSource(Rational(1, 2))), LaplaceMixture{},
                                std::span(x).first(1));
  CHECK(first.rows.size() == 1);
  CHECK(first.rows[0] == traj.rows[0]);
}

TEST_CASE("trajectories are prefix-stable") {
  const AnyCodec codec = Lz78Codec{Alphabet::binary, omega};
  const auto x = sample_sequence(BernoulliSource(Rational(1, 5)), 120, 4);
  const TrueMeasure truth = AnyMeasure(BernoulliSource(Rational(1, 5)));
  const auto full = trajectory(codec, truth, LaplaceMixture{}, x);
  for (std::size_t m : {1U, 7U, 60U, 119U}) {
    const auto part = trajectory(codec, truth, LaplaceMixture{}, std::span(x).first(m));
    REQUIRE(part.rows.size() == m);
    for (std::size_t i = 0; i < m; ++i) CHECK(part.rows[i] == full.rows[i]);
  }
}

TEST_CASE("self-redundancy band of the Laplace code") {
  const AnyCodec codec = AnyCodec::bayes(LaplaceMixture{});
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto x = sample_sequence(LaplaceMixture{}, 150, seed);
    const auto traj = trajectory(codec, AnyMeasure(LaplaceMixture{}), LaplaceMixture{}, x);
    for (const auto& row : traj.rows) {
      const auto c = static_cast<std::int64_t>(int_code_length(omega, row.n));
      REQUIRE(redundancy_at_least(row.true_prob.lo, row.code_len, c + 1));
      REQUIRE(redundancy_at_most(row.true_prob.lo, row.code_len, c + 2));
    }
  }
}

TEST_CASE("Barron violations") {
  const AnyCodec bayes = AnyCodec::bayes(GeometricMixture{});
  const AnyCodec per = PerSymbolCodec{Alphabet::naturals, omega};
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto x = sample_sequence(GeometricMixture{}, 100, seed);
    CHECK(barron_violations(bayes, AnyMeasure(GeometricMixture{}), x).empty());

    // Direct computation: |c(n)| + Σ (|c(xᵢ)| − xᵢ) ≤ 0.
    std::vector<std::uint64_t> expected;
    std::int64_t partial = 0;
    for (std::size_t n = 1; n <= x.size(); ++n) {
      partial += static_cast<std::int64_t>(int_code_length(omega, x[n - 1])) - static_cast<std::int64_t>(x[n - 1]);
      if (static_cast<std::int64_t>(int_code_length(omega, n)) + partial <= 0) expected.push_back(n);
    }
    CHECK(barron_violations(per, AnyMeasure(GeometricMixture{}), x) == expected);
  }
}

TEST_CASE("mean violation count obeys the Kraft bound") {
  const AnyMeasure truth = GeometricMixture{};
  for (const AnyCodec& codec : {AnyCodec(PerSymbolCodec{Alphabet::naturals, omega}),
                                AnyCodec(Lz78Codec{Alphabet::naturals, omega})}) {
    const int trials = 1000;
    double sum = 0, sum_sq = 0;
    for (int t = 0; t < trials; ++t) {
      const auto x = sample_sequence(truth, 200, derive_seed(55, t));
      const double v = static_cast<double>(barron_violations(codec, truth, x).size());
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / trials;
    const double sd = std::sqrt((sum_sq - trials * mean * mean) / (trials - 1));
    CHECK(mean <= 1 + 3 * sd / std::sqrt(trials));
  }
}

TEST_CASE("catch-up lower bounds") {
  const AnyCodec bayes = AnyCodec::bayes(GeometricMixture{});
  const AnyCodec per = PerSymbolCodec{Alphabet::naturals, omega};
  const auto x = sample_sequence(GeometricMixture{}, 400, 8);

  CHECK(catchup_lower_bound(x, bayes, bayes, Margin::constant(1), 0).cut_lb == 0);
  CHECK(catchup_lower_bound(x, per, bayes, Margin::constant(0), 1'000'000).cut_lb == 0);

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto y = sample_sequence(GeometricMixture{}, 300, seed);
    const auto report = catchup_lower_bound(y, per, bayes, Margin{}, 64);
    CHECK(report.cut_lb == catchup_by_rescan(y, per, bayes, Margin{}, 64));
    CHECK(report.cut_lb <= report.horizon);
    CHECK(report.delta == 64);
  }
  CHECK_THROWS_AS(catchup_lower_bound(x, per, bayes, Margin{}, -1), Error);
}

TEST_CASE("margin specifications") {
  CHECK(Margin::parse("c+2")(1) == 3);
  CHECK(Margin::parse("c+2")(4) == 8);
  CHECK(Margin::parse("c-1")(1) == 0);
  CHECK(Margin::parse("c")(2) == 3);
  CHECK(Margin::parse("5")(100) == 5);
  CHECK(Margin::parse("c+2").to_string() == "c+2");
  CHECK(Margin::parse("-3").to_string() == "-3");
  CHECK_THROWS_AS(Margin::parse("x+2"), Error);
  CHECK_THROWS_AS(Margin::parse("c+"), Error);
}

TEST_CASE("a single-trial sweep reproduces the direct computation") {
  SweepConfig cfg;
  cfg.family = Family::bernoulli;
  cfg.master_seed = 99;
  cfg.trials = 1;
  cfg.horizon = 300;
  cfg.codecs = {"bayes", "lz78"};
  std::vector<TrialResult> seen;
  const auto report = monte_carlo_sweep(cfg, [&](const TrialResult& r) { seen.push_back(r); }, true);
  REQUIRE(seen.size() == 1);
  const auto& trial = seen[0];
  const BernoulliSource source(Rational(trial.theta));
  const AnyCodec bayes = AnyCodec::bayes(LaplaceMixture{});
  const AnyCodec lz = Lz78Codec{Alphabet::binary, omega};
  CHECK(trial.per_codec[0].violations == barron_violations(bayes, AnyMeasure(source), trial.sequence).size());
  CHECK(trial.per_codec[1].violations == barron_violations(lz, AnyMeasure(source), trial.sequence).size());
  CHECK(trial.per_codec[1].cut_lb == catchup_lower_bound(trial.sequence, lz, bayes, Margin{}, 64).cut_lb);
  CHECK(report.codecs[0].mean_violations == static_cast<double>(trial.per_codec[0].violations));

  // CSV rows agree with the trajectory.
  const auto traj = trajectory(bayes, AnyMeasure(source), LaplaceMixture{}, trial.sequence);
  std::istringstream csv(trial.csv);
  std::string line;
  std::size_t row = 0;
  while (std::getline(csv, line)) {
    if (line.find(",bayes-laplace,") == std::string::npos) continue;
    const auto& r = traj.rows[row++];
    std::ostringstream expect;
    expect << "0," << trial.theta_seed << ',' << r.n << ",bayes-laplace," << r.code_len << ','
           << r.neg_log_true_fixed() << ',' << kOne << ',' << r.neg_log_mixture_fixed() << ',' << kOne << ','
           << r.shannon_red_fixed() << ',' << (r.barron_violation ? 1 : 0);
    REQUIRE(line == expect.str());
  }
  CHECK(row == cfg.horizon);
}

TEST_CASE("sweeps are deterministic and thread-count independent") {
  SweepConfig cfg;
  cfg.family = Family::bernoulli;
  cfg.master_seed = 5;
  cfg.trials = 6;
  cfg.horizon = 80;
  cfg.codecs = {"bayes", "persymbol"};
  const auto run = [&](unsigned threads) {
    cfg.threads = threads;
    std::string csv;
    const auto rep = monte_carlo_sweep(cfg, [&](const TrialResult& r) { csv += r.csv; }, true);
    return csv + format_summary(rep);
  };
  const auto a = run(1);
  CHECK(a == run(1));
  CHECK(a == run(3));
}

TEST_CASE("GenParam sweep respects the violation bound") {
  SweepConfig cfg;
  cfg.family = Family::genparam;
  cfg.master_seed = 2;
  cfg.trials = 60;
  cfg.horizon = 40;
  cfg.codecs = {"bayes", "persymbol"};
  const auto report = monte_carlo_sweep(cfg);
  for (const auto& a : report.codecs) CHECK(a.mean_violations <= 1 + 3 * a.stderr_violations);
  CHECK(report.codecs[0].codec == "bayes-geometric");
}

TEST_CASE("sweep validation") {
  SweepConfig cfg;
  cfg.trials = 0;
  CHECK_THROWS_AS(monte_carlo_sweep(cfg), Error);
  cfg.trials = 1;
  cfg.codecs = {"zip"};
  CHECK_THROWS_AS(monte_carlo_sweep(cfg), Error);
  cfg.codecs = {"bayes"};
  cfg.horizon = 0;
  CHECK_THROWS_AS(monte_carlo_sweep(cfg), Error);
}
