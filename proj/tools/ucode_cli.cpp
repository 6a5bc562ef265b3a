// Command-line front end: encode/decode files, run experiments, audit Kraft sums.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "ucode/ucode.hpp"

namespace {

using namespace ucode;

enum ExitCode { kOk = 0, kValidation = 2, kData = 3, kInternal = 4 };

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument:
    case ErrorCode::unsupported_base: return kValidation;
    case ErrorCode::internal: return kInternal;
    default: return kData;
  }
}

void report_error(std::string_view code, int exit_code, const std::string& message) {
  std::string flat = message;
  for (char& c : flat)
    if (c == '\n') c = ' ';
  std::cerr << "error code=" << code << " exit=" << exit_code << " message=" << flat << '\n';
}

struct Options {
  std::string codec = "bayes";
  std::vector<std::string> codecs{"bayes"};
  std::string measure;
  std::string theta = "1/2";
  std::string alphabet;
  std::string int_code = "omega";
  std::string reference = "bayes";
  std::string margin = "c+2";
  std::string in;
  std::string out;
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  std::size_t horizon = 1000;
  std::int64_t delta = 64;
  unsigned threads = 1;
  unsigned max_len = 6;
  unsigned max_fixed_len = 8;
};

IntegerCode parse_int_code(const std::string& name) {
  if (name == "omega") return IntegerCode::omega();
  if (name == "unary") return IntegerCode::unary();
  fail(ErrorCode::invalid_argument, "unknown integer code '" + name + "' (known: omega, unary)");
}

AnyMeasure parse_measure(const Options& o) {
  if (o.measure == "laplace") return LaplaceMixture{};
  if (o.measure == "geometric") return GeometricMixture{};
  if (o.measure == "bernoulli") return make_measure(MeasureId::bernoulli, o.theta);
  fail(ErrorCode::invalid_argument, "unknown measure '" + o.measure + "' (known: laplace, geometric, bernoulli)");
}

Alphabet parse_alphabet(const Options& o) {
  if (o.alphabet == "binary") return Alphabet::binary;
  if (o.alphabet == "naturals") return Alphabet::naturals;
  if (!o.alphabet.empty())
    fail(ErrorCode::invalid_argument, "unknown alphabet '" + o.alphabet + "' (known: binary, naturals)");
  if (o.measure.empty()) return Alphabet::naturals;
  return parse_measure(o).alphabet();
}

AnyCodec parse_codec(const Options& o) {
  const IntegerCode code = parse_int_code(o.int_code);
  if (o.codec == "bayes") {
    if (o.measure.empty()) fail(ErrorCode::invalid_argument, "--measure is required for the bayes codec");
    return AnyCodec::bayes(parse_measure(o), code);
  }
  if (o.codec == "lz78") return Lz78Codec{parse_alphabet(o), code};
  if (o.codec == "persymbol") return PerSymbolCodec{parse_alphabet(o), code};
  fail(ErrorCode::invalid_argument, "unknown codec '" + o.codec + "' (known: bayes, lz78, persymbol)");
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::bad_container, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::ofstream open_output(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) fail(ErrorCode::invalid_argument, "cannot write '" + path + "'");
  return out;
}

SymbolString parse_symbols(const std::vector<std::uint8_t>& bytes) {
  std::istringstream in(std::string(bytes.begin(), bytes.end()));
  SymbolString x;
  std::string token;
  while (in >> token) {
    if (token.find_first_not_of("0123456789") != std::string::npos)
      fail(ErrorCode::malformed_codeword, "input token '" + token + "' is not a decimal integer");
    try {
      x.push_back(std::stoull(token));
    } catch (const std::exception&) {
      fail(ErrorCode::malformed_codeword, "input token '" + token + "' is out of range");
    }
  }
  return x;
}

int run_encode(const Options& o) {
  const AnyCodec codec = parse_codec(o);
  const SymbolString x = parse_symbols(read_file(o.in));
  if (x.empty()) fail(ErrorCode::zero_probability, "input contains no symbols");
  for (Symbol s : x)
    if (!in_alphabet(codec.alphabet(), s))
      fail(ErrorCode::zero_probability, "symbol " + std::to_string(s) + " is outside the codec's alphabet");
  const auto bytes = write_container(codec, x);
  auto out = open_output(o.out, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  return kOk;
}

int run_decode(const Options& o) {
  const auto contents = read_container(read_file(o.in));
  auto out = open_output(o.out);
  for (Symbol s : contents.symbols) out << s << '\n';
  return kOk;
}

Family parse_family(const std::string& name) {
  if (name == "bernoulli") return Family::bernoulli;
  if (name == "genparam") return Family::genparam;
  fail(ErrorCode::invalid_argument, "unknown family '" + name + "' (known: bernoulli, genparam)");
}

int run_experiment(const Options& o) {
  SweepConfig cfg;
  cfg.family = parse_family(o.measure.empty() ? "bernoulli" : o.measure);
  cfg.master_seed = o.seed;
  cfg.trials = o.trials;
  cfg.horizon = o.horizon;
  cfg.codecs.clear();
  for (const auto& item : o.codecs)
    if (!item.empty()) cfg.codecs.push_back(item);
  cfg.reference = o.reference;
  cfg.margin = Margin::parse(o.margin);
  cfg.delta = o.delta;
  cfg.integer_code = parse_int_code(o.int_code);
  cfg.threads = o.threads;
  cfg.validate();
  if (o.out.empty()) fail(ErrorCode::invalid_argument, "--out prefix is required for experiments");

  auto csv = open_output(o.out + ".csv");
  csv << kCsvHeader << '\n';
  const auto report = monte_carlo_sweep(cfg, [&](const TrialResult& r) { csv << r.csv; }, true);
  csv.close();

  const std::string text = format_summary(report);
  open_output(o.out + ".summary.txt") << text;
  std::cout << text;

  nlohmann::ordered_json j;
  j["family"] = std::string(to_string(cfg.family));
  j["master_seed"] = cfg.master_seed;
  j["trials"] = cfg.trials;
  j["horizon"] = cfg.horizon;
  j["margin"] = cfg.margin.to_string();
  j["delta"] = cfg.delta;
  j["reference"] = make_codec(cfg.reference, cfg.family, cfg.integer_code).name();
  j["codecs"] = nlohmann::ordered_json::array();
  for (const auto& a : report.codecs) {
    nlohmann::ordered_json c;
    c["codec"] = a.codec;
    c["mean_violations"] = a.mean_violations;
    c["std_violations"] = a.std_violations;
    c["stderr_violations"] = a.stderr_violations;
    c["max_violations"] = a.max_violations;
    c["frac_no_late_violation"] = a.frac_no_late_violation;
    c["frac_any_late_violation"] = a.frac_any_late_violation;
    c["cut_lb_min"] = a.cut_lb_min;
    c["cut_lb_median"] = a.cut_lb_median;
    c["cut_lb_mean"] = a.cut_lb_mean;
    c["cut_lb_max"] = a.cut_lb_max;
    j["codecs"].push_back(c);
  }
  open_output(o.out + ".summary.json") << j.dump(2) << '\n';
  return kOk;
}

template <typename M>
Rational kraft_fixed(const M& measure, unsigned n) {
  Rational sum = 0;
  const FixedLengthCode<M> code{measure, n};
  SymbolString x(n);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    for (unsigned i = 0; i < n; ++i) x[i] = (m >> (n - 1 - i)) & 1;
    if (measure.marginal(x).is_zero()) continue;
    sum += Rational(BigInt(1), BigInt(1) << encode_fixed(code, x).size());
  }
  return sum;
}

int run_kraft_audit(const Options& o) {
  const AnyMeasure measure = parse_measure(o);
  if (measure.alphabet() != Alphabet::binary)
    fail(ErrorCode::invalid_argument, "kraft-audit enumerates binary strings; use laplace or bernoulli");
  if (o.max_len > 20 || o.max_fixed_len > 20) fail(ErrorCode::invalid_argument, "audit lengths are limited to 20");
  const IntegerCode code = parse_int_code(o.int_code);
  const BayesianCode<AnyMeasure> bayes{code, measure};
  bool ok = true;
  const auto print = [&](const std::string& scope, const Rational& sum) {
    const bool within = sum <= 1;
    ok = ok && within;
    char value[32];
    std::snprintf(value, sizeof value, "%.12f", static_cast<double>(sum));
    std::cout << scope << " sum=" << sum.str() << " value=" << value << " ok=" << (within ? 1 : 0) << '\n';
  };
  for (unsigned n = 1; n <= o.max_fixed_len; ++n) print("fixed n=" + std::to_string(n), kraft_fixed(measure, n));
  Rational global = 0;
  for (unsigned n = 1; n <= o.max_len; ++n) {
    SymbolString x(n);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
      for (unsigned i = 0; i < n; ++i) x[i] = (m >> (n - 1 - i)) & 1;
      if (measure.marginal(x).is_zero()) continue;
      global += Rational(BigInt(1), BigInt(1) << encode(bayes, x).size());
    }
  }
  print("global n<=" + std::to_string(o.max_len), global);
  if (!ok) fail(ErrorCode::internal, "Kraft sum exceeds one");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Universal source codes and redundancy experiments"};
  app.set_config("--config", "", "Optional INI/TOML file with option values; flags override it");
  app.require_subcommand(1);
  Options o;

  auto* encode_cmd = app.add_subcommand("encode", "Encode a whitespace-separated symbol file into a BYC1 container");
  auto* decode_cmd = app.add_subcommand("decode", "Decode a BYC1 container into one symbol per line");
  auto* experiment_cmd = app.add_subcommand("experiment", "Monte Carlo sweep writing <out>.csv and summaries");
  auto* audit_cmd = app.add_subcommand("kraft-audit", "Exhaustive Kraft sums over binary strings");

  for (auto* cmd : {encode_cmd, audit_cmd}) {
    cmd->add_option("--measure", o.measure, "laplace | geometric | bernoulli");
    cmd->add_option("--theta", o.theta, "Bernoulli parameter as p/q");
    cmd->add_option("--int-code", o.int_code, "omega | unary");
  }
  encode_cmd->add_option("--codec", o.codec, "bayes | lz78 | persymbol");
  encode_cmd->add_option("--alphabet", o.alphabet, "binary | naturals (baselines; default follows the measure)");
  for (auto* cmd : {encode_cmd, decode_cmd}) {
    cmd->add_option("--in", o.in, "Input path")->required();
    cmd->add_option("--out", o.out, "Output path")->required();
  }

  experiment_cmd->add_option("--measure", o.measure, "Parameter family: bernoulli | genparam");
  experiment_cmd->add_option("--codec", o.codecs, "Comma-separated: bayes, bayes-laplace, bayes-geometric, lz78, persymbol")
      ->delimiter(',');
  experiment_cmd->add_option("--reference", o.reference, "Reference codec for catch-up bounds");
  experiment_cmd->add_option("--seed", o.seed, "Master seed");
  experiment_cmd->add_option("--trials", o.trials, "Number of trials");
  experiment_cmd->add_option("--horizon", o.horizon, "Sequence length N");
  experiment_cmd->add_option("--delta", o.delta, "Slack standing in for the reference decompressor length");
  experiment_cmd->add_option("--margin", o.margin, "Margin f(n): c+K for |c(n)|+K, or an integer");
  experiment_cmd->add_option("--int-code", o.int_code, "omega | unary");
  experiment_cmd->add_option("--threads", o.threads, "Worker threads");
  experiment_cmd->add_option("--out", o.out, "Output prefix")->required();

  audit_cmd->get_option("--measure")->required();
  audit_cmd->add_option("--max-len", o.max_len, "Largest length in the global audit");
  audit_cmd->add_option("--max-fixed-len", o.max_fixed_len, "Largest length in the per-length audits");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("validation", kValidation, e.what());
    return kValidation;
  }

  try {
    if (*encode_cmd) return run_encode(o);
    if (*decode_cmd) return run_decode(o);
    if (*experiment_cmd) return run_experiment(o);
    if (*audit_cmd) return run_kraft_audit(o);
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    report_error(to_string(e.code()), code, e.what());
    return code;
  } catch (const std::exception& e) {
    report_error("internal", kInternal, e.what());
    return kInternal;
  }
  return kInternal;
}
