// Party state machines and session orchestration: message transmission,
// the key-distribution variant and the key-generation sub-protocol.
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qsdc/errors.hpp"
#include "qsdc/rng.hpp"
#include "qsdc/scheme.hpp"
#include "qsdc/state.hpp"
#include "qsdc/swap_algebra.hpp"
#include "qsdc/transcript.hpp"

namespace qsdc {

// Qubits of the two shared triples: Alice holds (0,3), Bob (1,4),
// Charlie (2,5).
inline constexpr std::pair<int, int> kAlicePair = {0, 3};
inline constexpr std::pair<int, int> kBobPair = {1, 4};
inline constexpr std::pair<int, int> kCharliePair = {2, 5};

enum class BobAlphabet {
  SigmaX,   // {I, σx}
  ISigmaY,  // {I, iσy}
};

inline std::span<const PauliOp> bob_alphabet_ops(BobAlphabet a) {
  return a == BobAlphabet::SigmaX ? std::span<const PauliOp>(kStandardBobOps)
                                  : std::span<const PauliOp>(kAlternateBobOps);
}

struct SessionConfig {
  std::size_t group_count = 1;  // N: each group consumes two fresh triples
  std::pair<GhzLabel, GhzLabel> initial_pair = {GhzLabel::Pp, GhzLabel::Pp};
  int alice_scheme = 0;  // 0..23 (0..1 when alphabets are swapped)
  int bob_scheme = 0;    // 0..1  (0..23 when alphabets are swapped)
  std::uint64_t seed = 0;
  BobAlphabet bob_alphabet = BobAlphabet::SigmaX;
  bool swap_alphabets = false;  // Alice sends 1 bit per group and Bob 2
  int key_map_index = 0;        // Bell-outcome-to-bits map for key material
};

namespace detail {

// One sender's alphabet together with its secret symbol assignment.
struct SenderCode {
  std::vector<PauliOp> alphabet;
  std::vector<int> symbol_of_pos;  // alphabet position -> symbol
  int bits_per_group;

  PauliOp op_for_symbol(int symbol) const {
    for (std::size_t pos = 0; pos < alphabet.size(); ++pos)
      if (symbol_of_pos[pos] == symbol) return alphabet[pos];
    throw std::out_of_range("SenderCode: symbol outside alphabet");
  }

  int symbol_of_op(PauliOp op) const {
    for (std::size_t pos = 0; pos < alphabet.size(); ++pos)
      if (alphabet[pos] == op) return symbol_of_pos[pos];
    throw std::out_of_range("SenderCode: operator outside alphabet");
  }
};

inline SenderCode four_symbol_code(int scheme_index) {
  const auto perm = permutation_of_rank<4>(scheme_index);
  return {{kPauliOps.begin(), kPauliOps.end()}, {perm.begin(), perm.end()}, 2};
}

inline SenderCode two_symbol_code(int scheme_index, BobAlphabet alphabet) {
  if (scheme_index < 0 || scheme_index > 1)
    throw std::out_of_range("two-symbol scheme index must be 0 or 1");
  const auto ops = bob_alphabet_ops(alphabet);
  return {{ops.begin(), ops.end()}, {scheme_index, 1 - scheme_index}, 1};
}

inline SenderCode alice_code(const SessionConfig& c) {
  return c.swap_alphabets ? two_symbol_code(c.alice_scheme, c.bob_alphabet)
                          : four_symbol_code(c.alice_scheme);
}

inline SenderCode bob_code(const SessionConfig& c) {
  return c.swap_alphabets ? four_symbol_code(c.bob_scheme)
                          : two_symbol_code(c.bob_scheme, c.bob_alphabet);
}

inline void check_bit_string(std::string_view bits, std::size_t expected, const char* who) {
  if (bits.size() != expected)
    throw std::invalid_argument(std::string(who) + ": message length must be " +
                                std::to_string(expected) + " bits");
  for (char c : bits)
    if (c != '0' && c != '1')
      throw std::invalid_argument(std::string(who) + ": message must be ASCII bits");
}

inline int slice_symbol(std::string_view bits, std::size_t group, int width) {
  int v = 0;
  for (int k = 0; k < width; ++k) v = (v << 1) | (bits[group * width + k] - '0');
  return v;
}

inline std::string symbol_bits(int symbol, int width) {
  std::string out(static_cast<std::size_t>(width), '0');
  for (int k = 0; k < width; ++k)
    out[static_cast<std::size_t>(k)] = static_cast<char>('0' + ((symbol >> (width - 1 - k)) & 1));
  return out;
}

// Step-1 coordination is public: the ordered group partition and channel
// labels open every transcript.
inline void announce_session(Transcript& transcript, const SessionConfig& config,
                             const char* mode) {
  transcript.append(Party::Charlie, EventKind::SessionMeta,
                    {{"mode", mode},
                     {"groups", config.group_count},
                     {"initial",
                      {to_string(config.initial_pair.first),
                       to_string(config.initial_pair.second)}}});
}

// Measurement round shared by all three modes. Alice announces first;
// Charlie measures before any outcome is declared.
struct GroupOutcomes {
  BellOutcome alice, bob, charlie;
};

inline GroupOutcomes measure_group(StateVector state, std::size_t group, Rng& rng,
                                   Transcript& transcript, bool declare_results) {
  auto [a, s1] = bell_measure(state, kAlicePair.first, kAlicePair.second, rng);
  auto [b, s2] = bell_measure(s1, kBobPair.first, kBobPair.second, rng);
  transcript.append(Party::Alice, EventKind::MeasurementAnnounced,
                    {{"group", group}, {"qubits", {kAlicePair.first, kAlicePair.second}}});
  transcript.append(Party::Bob, EventKind::MeasurementAnnounced,
                    {{"group", group}, {"qubits", {kBobPair.first, kBobPair.second}}});
  auto [c, s3] = bell_measure(s2, kCharliePair.first, kCharliePair.second, rng);
  transcript.append(Party::Charlie, EventKind::MeasurementAnnounced,
                    {{"group", group}, {"qubits", {kCharliePair.first, kCharliePair.second}}});
  if (declare_results) {
    transcript.append(Party::Alice, EventKind::ResultDeclared,
                      {{"group", group}, {"outcome", to_string(a)}});
    transcript.append(Party::Bob, EventKind::ResultDeclared,
                      {{"group", group}, {"outcome", to_string(b)}});
  }
  return {a, b, c};
}

}  // namespace detail

struct QsdcResult {
  std::string charlie_alice_bits;
  std::string charlie_bob_bits;
  Transcript transcript;
  std::vector<std::size_t> failed_groups;  // aborted by decode failure

  bool tampering_flagged() const { return !failed_groups.empty(); }
};

// Message transmission. Returns the bits Charlie decoded; equal to the
// inputs for honest runs. A group whose announcements admit no operator
// pair is aborted and flagged, and the session continues.
inline QsdcResult run_qsdc_session(const SessionConfig& config, std::string_view alice_message,
                                   std::string_view bob_message) {
  if (config.group_count < 1) throw std::invalid_argument("group_count must be >= 1");
  const detail::SenderCode alice = detail::alice_code(config);
  const detail::SenderCode bob = detail::bob_code(config);
  detail::check_bit_string(alice_message, config.group_count * alice.bits_per_group, "alice");
  detail::check_bit_string(bob_message, config.group_count * bob.bits_per_group, "bob");

  const auto [g1, g2] = config.initial_pair;
  const DecodeTable table(g1, g2, alice.alphabet, bob.alphabet);
  Rng rng(config.seed);
  QsdcResult result;
  detail::announce_session(result.transcript, config, "qsdc");
  for (std::size_t i = 0; i < config.group_count; ++i) {
    const PauliOp a_op = alice.op_for_symbol(detail::slice_symbol(alice_message, i, alice.bits_per_group));
    const PauliOp b_op = bob.op_for_symbol(detail::slice_symbol(bob_message, i, bob.bits_per_group));
    StateVector state = tensor(make_ghz(g1), make_ghz(g2));
    state = apply_local(state, a_op, 0);
    state = apply_local(state, b_op, 1);
    const auto out = detail::measure_group(std::move(state), i, rng, result.transcript, true);
    try {
      const DecodedOps& decoded = table.lookup(out.charlie, out.alice, out.bob);
      result.charlie_alice_bits +=
          detail::symbol_bits(alice.symbol_of_op(decoded.alice_op), alice.bits_per_group);
      result.charlie_bob_bits +=
          detail::symbol_bits(bob.symbol_of_op(decoded.bob_op), bob.bits_per_group);
      result.transcript.append(Party::Charlie, EventKind::Inference,
                               {{"group", i}, {"ok", true}});
    } catch (const InconsistentTriple&) {
      result.failed_groups.push_back(i);
      result.transcript.append(Party::Charlie, EventKind::Inference,
                               {{"group", i}, {"ok", false}});
    }
  }
  return result;
}

struct KeyMaterial {
  std::string alice_charlie_certain;
  std::string alice_charlie_random;
  std::string bob_charlie_certain;
  std::string bob_charlie_random;
};

struct QkdResult {
  KeyMaterial keys;
  Transcript transcript;
};

// Key-distribution mode: the senders encode random bits instead of a
// message. Each pair's certain bits are the encoded symbols, and the
// random bits come from the sender's pre-operation Bell outcome, which
// the receiver recovers from his decoding and the sender recovers by
// inverting her own operator.
inline QkdResult run_qkd_session(const SessionConfig& config, Rng& rng) {
  if (config.group_count < 1) throw std::invalid_argument("group_count must be >= 1");
  const detail::SenderCode alice = detail::alice_code(config);
  const detail::SenderCode bob = detail::bob_code(config);
  const BellKeyMap key_map = BellKeyMap::from_index(config.key_map_index);
  const auto [g1, g2] = config.initial_pair;
  const DecodeTable table(g1, g2, alice.alphabet, bob.alphabet);

  QkdResult result;
  detail::announce_session(result.transcript, config, "qkd");
  for (std::size_t i = 0; i < config.group_count; ++i) {
    int alice_symbol = 0;
    for (int k = 0; k < alice.bits_per_group; ++k) alice_symbol = (alice_symbol << 1) | rng.bit();
    int bob_symbol = 0;
    for (int k = 0; k < bob.bits_per_group; ++k) bob_symbol = (bob_symbol << 1) | rng.bit();
    const PauliOp a_op = alice.op_for_symbol(alice_symbol);
    const PauliOp b_op = bob.op_for_symbol(bob_symbol);

    StateVector state = tensor(make_ghz(g1), make_ghz(g2));
    state = apply_local(state, a_op, 0);
    state = apply_local(state, b_op, 1);
    const auto out = detail::measure_group(std::move(state), i, rng, result.transcript, true);

    const DecodedOps& decoded = table.lookup(out.charlie, out.alice, out.bob);
    // Sender-side derivation must agree with the receiver's decoding.
    if (decoded.alice_op != a_op || decoded.bob_op != b_op ||
        decoded.alice_pre != bell_preimage(a_op, out.alice) ||
        decoded.bob_pre != bell_preimage(b_op, out.bob))
      throw std::logic_error("qkd: sender and receiver derivations disagree");

    result.keys.alice_charlie_certain += detail::symbol_bits(alice_symbol, alice.bits_per_group);
    result.keys.alice_charlie_random += key_map.bits_for(decoded.alice_pre);
    result.keys.bob_charlie_certain += detail::symbol_bits(bob_symbol, bob.bits_per_group);
    result.keys.bob_charlie_random += key_map.bits_for(decoded.bob_pre);
    result.transcript.append(
        Party::Charlie, EventKind::KeyBit,
        {{"group", i}, {"pair", "alice-charlie"}, {"certain", alice.bits_per_group}, {"random", 2}});
    result.transcript.append(
        Party::Charlie, EventKind::KeyBit,
        {{"group", i}, {"pair", "bob-charlie"}, {"certain", bob.bits_per_group}, {"random", 2}});
  }
  return result;
}

struct KeygenResult {
  std::string key_bits;  // two bits per group, shared by the non-announcing pair
  Transcript transcript;
};

inline std::string pair_name(Party a, Party b) {
  return to_string(a) + "-" + to_string(b);
}

// Key-generation sub-protocol: all three parties Bell-measure, the
// announcing party publishes its outcome, and the remaining two infer each
// other's outcomes from the decomposition table. The first (in party
// order) non-announcing party's outcome supplies the shared key bits.
inline KeygenResult run_keygen_subprotocol(const SessionConfig& config, Party announcer,
                                           Rng& rng) {
  if (config.group_count < 1) throw std::invalid_argument("group_count must be >= 1");
  const BellKeyMap key_map = BellKeyMap::from_index(config.key_map_index);
  const auto [g1, g2] = config.initial_pair;
  const int announcer_pos = static_cast<int>(announcer);
  const std::array<Party, 3> parties = {Party::Alice, Party::Bob, Party::Charlie};
  std::array<int, 2> holders{};
  int n_holders = 0;
  for (int pos = 0; pos < 3; ++pos)
    if (pos != announcer_pos) holders[n_holders++] = pos;

  KeygenResult result;
  detail::announce_session(result.transcript, config, "keygen");
  for (std::size_t i = 0; i < config.group_count; ++i) {
    StateVector state = tensor(make_ghz(g1), make_ghz(g2));
    const auto out = detail::measure_group(std::move(state), i, rng, result.transcript, false);
    const std::array<BellOutcome, 3> outcomes = {out.alice, out.bob, out.charlie};

    result.transcript.append(parties[announcer_pos], EventKind::ResultDeclared,
                             {{"group", i}, {"outcome", to_string(outcomes[announcer_pos])}});
    // Each key holder infers the other's outcome; over a GHZ channel the
    // completion is unique and always right.
    for (int h = 0; h < 2; ++h) {
      const int me = holders[h];
      const int other = holders[1 - h];
      const BellOutcome inferred = infer_third_outcome(
          g1, g2, me, outcomes[me], announcer_pos, outcomes[announcer_pos]);
      if (inferred != outcomes[other])
        throw std::logic_error("keygen: inference disagrees with the actual outcome");
      result.transcript.append(parties[me], EventKind::Inference, {{"group", i}, {"ok", true}});
    }
    result.key_bits += key_map.bits_for(outcomes[holders[0]]);
    result.transcript.append(
        parties[holders[0]], EventKind::KeyBit,
        {{"group", i}, {"pair", pair_name(parties[holders[0]], parties[holders[1]])}, {"bits", 2}});
  }
  return result;
}

inline std::string xor_bits(std::string_view a, std::string_view b) {
  std::string out(a.size(), '0');
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = (a[i] != b[i]) ? '1' : '0';
  return out;
}

struct SchemeExchange {
  std::string alice_cipher;  // 5-bit one-time-pad ciphertext of Alice's scheme index
  std::string bob_cipher;    // 1-bit ciphertext of Bob's scheme index
  std::string alice_key;     // private pads (never logged)
  std::string bob_key;
  Transcript transcript;
};

// Scheme negotiation: keys from two key-generation runs one-time-pad the
// scheme indices into the public transcript. Five bits cover the 24 Alice
// schemes, one bit the 2 Bob schemes.
inline SchemeExchange negotiate_schemes(const SessionConfig& config, Rng& rng) {
  SessionConfig keygen = config;
  SchemeExchange ex;

  keygen.group_count = 3;  // 6 key bits >= 5
  KeygenResult ac = run_keygen_subprotocol(keygen, Party::Bob, rng);
  ex.alice_key = ac.key_bits.substr(0, 5);
  ex.transcript.extend(ac.transcript);

  keygen.group_count = 1;  // 2 key bits >= 1
  KeygenResult bc = run_keygen_subprotocol(keygen, Party::Alice, rng);
  ex.bob_key = bc.key_bits.substr(0, 1);
  ex.transcript.extend(bc.transcript);

  ex.alice_cipher = xor_bits(detail::symbol_bits(config.alice_scheme, 5), ex.alice_key);
  ex.bob_cipher = xor_bits(detail::symbol_bits(config.bob_scheme, 1), ex.bob_key);
  ex.transcript.append(Party::Alice, EventKind::Ciphertext,
                       {{"pair", "alice-charlie"}, {"bits", ex.alice_cipher}});
  ex.transcript.append(Party::Bob, EventKind::Ciphertext,
                       {{"pair", "bob-charlie"}, {"bits", ex.bob_cipher}});
  return ex;
}

// Receiver-side decryption of a negotiated scheme index.
inline int recover_scheme_index(std::string_view cipher, std::string_view key) {
  if (cipher.size() != key.size())
    throw std::invalid_argument("recover_scheme_index: length mismatch");
  const std::string bits = xor_bits(cipher, key);
  int v = 0;
  for (char c : bits) v = (v << 1) | (c - '0');
  return v;
}

}  // namespace qsdc
