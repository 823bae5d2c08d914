// Command-line front end: reproducible protocol sessions, yield
// computations and attack estimates with line-delimited JSON output.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "qsdc/qsdc.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitProtocolFailure = 2;

void write_text(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

std::pair<qsdc::GhzLabel, qsdc::GhzLabel> parse_initial_pair(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("initial pair must look like \"P+,P+\"");
  const auto g1 = qsdc::ghz_from_name(text.substr(0, comma));
  const auto g2 = qsdc::ghz_from_name(text.substr(comma + 1));
  if (!g1 || !g2) throw std::invalid_argument("unknown GHZ label in initial pair");
  return {*g1, *g2};
}

struct QsdcArgs {
  std::size_t n = 1;
  std::string alice_bits;
  std::string bob_bits;
  std::uint64_t seed = 0;
  int alice_scheme = 0;
  int bob_scheme = 0;
  std::string initial = "P+,P+";
  std::string out = "-";
};

int run_qsdc_cmd(const QsdcArgs& args) {
  qsdc::SessionConfig config;
  config.group_count = args.n;
  config.initial_pair = parse_initial_pair(args.initial);
  config.alice_scheme = args.alice_scheme;
  config.bob_scheme = args.bob_scheme;
  config.seed = args.seed;

  const qsdc::QsdcResult result = qsdc::run_qsdc_session(config, args.alice_bits, args.bob_bits);
  write_text(args.out, result.transcript.to_ndjson());
  qsdc::json record{{"alice_bits", result.charlie_alice_bits},
                    {"bob_bits", result.charlie_bob_bits},
                    {"failed_groups", result.failed_groups}};
  std::cout << record.dump() << "\n";
  std::cerr << "decoded alice=" << result.charlie_alice_bits
            << " bob=" << result.charlie_bob_bits << " (" << args.n << " groups, "
            << result.failed_groups.size() << " failed)\n";
  return result.tampering_flagged() ? kExitProtocolFailure : kExitOk;
}

struct QkdArgs {
  std::size_t n = 1;
  std::uint64_t seed = 0;
  int alice_scheme = 0;
  int bob_scheme = 0;
  std::string initial = "P+,P+";
  std::string out = "-";
  std::string out_alice_charlie;
  std::string out_bob_charlie;
};

int run_qkd_cmd(const QkdArgs& args) {
  qsdc::SessionConfig config;
  config.group_count = args.n;
  config.initial_pair = parse_initial_pair(args.initial);
  config.alice_scheme = args.alice_scheme;
  config.bob_scheme = args.bob_scheme;
  config.seed = args.seed;

  qsdc::Rng rng(config.seed);
  const qsdc::QkdResult result = qsdc::run_qkd_session(config, rng);
  write_text(args.out, result.transcript.to_ndjson());

  const auto key_json = [](const std::string& pair, const std::string& certain,
                           const std::string& random) {
    return qsdc::json{{"pair", pair},
                      {"certain_bits", certain},
                      {"random_bits", random},
                      {"certain_count", certain.size()},
                      {"random_count", random.size()}};
  };
  const qsdc::json ac = key_json("alice-charlie", result.keys.alice_charlie_certain,
                                 result.keys.alice_charlie_random);
  const qsdc::json bc = key_json("bob-charlie", result.keys.bob_charlie_certain,
                                 result.keys.bob_charlie_random);
  if (!args.out_alice_charlie.empty()) write_text(args.out_alice_charlie, ac.dump() + "\n");
  if (!args.out_bob_charlie.empty()) write_text(args.out_bob_charlie, bc.dump() + "\n");

  qsdc::json record{{"alice_charlie", {{"certain", result.keys.alice_charlie_certain.size()},
                                       {"random", result.keys.alice_charlie_random.size()}}},
                    {"bob_charlie", {{"certain", result.keys.bob_charlie_certain.size()},
                                     {"random", result.keys.bob_charlie_random.size()}}}};
  std::cout << record.dump() << "\n";
  std::cerr << "key material: alice-charlie " << result.keys.alice_charlie_certain.size()
            << "+" << result.keys.alice_charlie_random.size() << " bits, bob-charlie "
            << result.keys.bob_charlie_certain.size() << "+"
            << result.keys.bob_charlie_random.size() << " bits\n";
  return kExitOk;
}

struct YieldArgs {
  std::vector<std::pair<std::string, double>> diagonal_entries;
  std::vector<std::pair<int, double>> rate_entries;
  std::string diagonal_file;
  std::string rates_file;
  std::int64_t nprime = 1;
};

int run_yield_cmd(const YieldArgs& args) {
  const bool have_diagonal = !args.diagonal_entries.empty() || !args.diagonal_file.empty();
  const bool have_rates = !args.rate_entries.empty() || !args.rates_file.empty();
  if (have_diagonal == have_rates)
    throw std::invalid_argument("give either a diagonal or stabilizer rates, not both");

  qsdc::GhzDiagonal diagonal;
  if (have_diagonal) {
    qsdc::json j;
    if (!args.diagonal_file.empty()) {
      std::ifstream in(args.diagonal_file);
      if (!in) throw std::runtime_error("cannot open " + args.diagonal_file);
      in >> j;
    }
    for (const auto& [key, value] : args.diagonal_entries) j[key] = value;
    diagonal = qsdc::GhzDiagonal::from_json(j);
  } else {
    qsdc::StabilizerRates rates;
    if (!args.rates_file.empty()) {
      std::ifstream in(args.rates_file);
      if (!in) throw std::runtime_error("cannot open " + args.rates_file);
      qsdc::json j;
      in >> j;
      for (int k = 1; k <= 7; ++k)
        rates.s[static_cast<std::size_t>(k - 1)] = j.value("s" + std::to_string(k), 0.0);
    }
    for (const auto& [k, value] : args.rate_entries)
      rates.s[static_cast<std::size_t>(k - 1)] = value;
    diagonal = qsdc::diagonal_from_rates(rates);
  }

  const qsdc::YieldReport report = qsdc::yields(diagonal);
  const qsdc::Verdict verdict = qsdc::channel_verdict(diagonal, args.nprime);
  std::cout << report.to_json().dump() << "\n" << verdict.to_json().dump() << "\n";
  std::cerr << "D_h=" << report.d_h << " D_h'=" << report.d_h_prime << " -> "
            << (verdict.distill ? "distill" : "discard") << "\n";
  return kExitOk;
}

struct AttackArgs {
  std::string mode = "state-guess";
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
  bool leak_charlie = false;
  bool known_scheme = false;
};

int run_attack_cmd(const AttackArgs& args) {
  qsdc::SessionConfig config;
  config.seed = args.seed;
  if (args.mode == "state-guess") {
    const qsdc::AttackReport report =
        qsdc::run_state_guess_attack(config, args.trials, args.leak_charlie);
    std::cout << report.to_json().dump() << "\n";
    std::cerr << "state-guess rate " << report.rate << " over " << report.trials << " trials\n";
    return kExitOk;
  }
  const bool informed = args.known_scheme && args.leak_charlie;
  const qsdc::MessageGuessReport report =
      qsdc::run_message_guess_attack(config, args.trials, informed);
  std::cout << report.to_json().dump() << "\n";
  std::cerr << "message-guess rates: alice " << report.alice.rate << ", bob " << report.bob.rate
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-party GHZ entanglement-swapping secure direct communication simulator"};
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 success, 1 usage error, 2 protocol failure (decode inconsistency).\n"
      "QSDC_SEED supplies the default --seed. Output is line-delimited JSON on stdout\n"
      "with a human-readable summary on stderr.");

  QsdcArgs qsdc_args;
  CLI::App* cmd_qsdc = app.add_subcommand("qsdc", "Run a message-transmission session");
  cmd_qsdc->add_option("--n", qsdc_args.n, "Number of groups")->check(CLI::PositiveNumber);
  cmd_qsdc->add_option("--alice-bits", qsdc_args.alice_bits, "Alice's message (2N bits)")
      ->required();
  cmd_qsdc->add_option("--bob-bits", qsdc_args.bob_bits, "Bob's message (N bits)")->required();
  cmd_qsdc->add_option("--seed", qsdc_args.seed, "Session seed")->envname("QSDC_SEED");
  cmd_qsdc->add_option("--alice-scheme", qsdc_args.alice_scheme, "Alice's encoding scheme")
      ->check(CLI::Range(0, 23));
  cmd_qsdc->add_option("--bob-scheme", qsdc_args.bob_scheme, "Bob's encoding scheme")
      ->check(CLI::Range(0, 1));
  cmd_qsdc->add_option("--initial", qsdc_args.initial, "Initial GHZ pair, e.g. P+,P+");
  cmd_qsdc->add_option("--out", qsdc_args.out, "Transcript output path (- for stdout)");

  QkdArgs qkd_args;
  CLI::App* cmd_qkd = app.add_subcommand("qkd", "Run a key-distribution session");
  cmd_qkd->add_option("--n", qkd_args.n, "Number of groups")->check(CLI::PositiveNumber);
  cmd_qkd->add_option("--seed", qkd_args.seed, "Session seed")->envname("QSDC_SEED");
  cmd_qkd->add_option("--alice-scheme", qkd_args.alice_scheme, "Alice's encoding scheme")
      ->check(CLI::Range(0, 23));
  cmd_qkd->add_option("--bob-scheme", qkd_args.bob_scheme, "Bob's encoding scheme")
      ->check(CLI::Range(0, 1));
  cmd_qkd->add_option("--initial", qkd_args.initial, "Initial GHZ pair, e.g. P+,P+");
  cmd_qkd->add_option("--out", qkd_args.out, "Transcript output path (- for stdout)");
  cmd_qkd->add_option("--out-alice-charlie", qkd_args.out_alice_charlie,
                      "Alice-Charlie key file");
  cmd_qkd->add_option("--out-bob-charlie", qkd_args.out_bob_charlie, "Bob-Charlie key file");

  YieldArgs yield_args;
  CLI::App* cmd_yield = app.add_subcommand("yield", "Hashing yields of a GHZ-diagonal state");
  std::array<std::optional<double>, 8> p_flags;
  for (int idx = 0; idx < 8; ++idx) {
    const qsdc::GhzBits b = qsdc::ghz_bits_from_index(idx);
    const std::string name =
        "p" + std::to_string(b.p) + std::to_string(b.i1) + std::to_string(b.i2);
    cmd_yield->add_option("--" + name, p_flags[static_cast<std::size_t>(idx)],
                          "Diagonal entry " + name);
  }
  std::array<std::optional<double>, 7> s_flags;
  for (int k = 1; k <= 7; ++k)
    cmd_yield->add_option("--s" + std::to_string(k), s_flags[static_cast<std::size_t>(k - 1)],
                          "Error rate s" + std::to_string(k))
        ->check(CLI::Range(0.0, 1.0));
  cmd_yield->add_option("--diagonal-file", yield_args.diagonal_file,
                        "JSON file with p000..p111");
  cmd_yield->add_option("--rates-file", yield_args.rates_file, "JSON file with s1..s7");
  cmd_yield->add_option("--nprime", yield_args.nprime, "Ensemble size for the verdict")
      ->check(CLI::NonNegativeNumber);

  AttackArgs attack_args;
  CLI::App* cmd_attack = app.add_subcommand("attack", "Monte Carlo eavesdropper estimates");
  cmd_attack->add_option("--mode", attack_args.mode, "state-guess or message-guess")
      ->check(CLI::IsMember({"state-guess", "message-guess"}));
  cmd_attack->add_option("--trials", attack_args.trials, "Trial count")
      ->check(CLI::PositiveNumber);
  cmd_attack->add_option("--seed", attack_args.seed, "Master seed")->envname("QSDC_SEED");
  cmd_attack->add_flag("--leak-charlie", attack_args.leak_charlie,
                       "Leak Charlie's outcome to Eve");
  cmd_attack->add_flag("--known-scheme", attack_args.known_scheme,
                       "Give Eve the encoding schemes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand(cmd_qsdc)) return run_qsdc_cmd(qsdc_args);
    if (app.got_subcommand(cmd_qkd)) return run_qkd_cmd(qkd_args);
    if (app.got_subcommand(cmd_yield)) {
      for (int idx = 0; idx < 8; ++idx) {
        if (!p_flags[static_cast<std::size_t>(idx)]) continue;
        const qsdc::GhzBits b = qsdc::ghz_bits_from_index(idx);
        yield_args.diagonal_entries.emplace_back(
            "p" + std::to_string(b.p) + std::to_string(b.i1) + std::to_string(b.i2),
            *p_flags[static_cast<std::size_t>(idx)]);
      }
      for (int k = 1; k <= 7; ++k)
        if (s_flags[static_cast<std::size_t>(k - 1)])
          yield_args.rate_entries.emplace_back(k, *s_flags[static_cast<std::size_t>(k - 1)]);
      return run_yield_cmd(yield_args);
    }
    if (app.got_subcommand(cmd_attack)) return run_attack_cmd(attack_args);
  } catch (const qsdc::InconsistentTriple& e) {
    std::cerr << "protocol failure: " << e.what() << "\n";
    return kExitProtocolFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
