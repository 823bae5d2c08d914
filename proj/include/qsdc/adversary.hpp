// Eavesdropper models: the announcement-listening state guesser, the
// message guesser, and distribution-phase tampering.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsdc/density.hpp"
#include "qsdc/protocol.hpp"
#include "qsdc/rng.hpp"
#include "qsdc/scheme.hpp"
#include "qsdc/security.hpp"
#include "qsdc/state.hpp"
#include "qsdc/swap_algebra.hpp"

namespace qsdc {

// Everything Eve can see: the known initial pair and the two announced
// outcomes. Never Charlie's outcome, never a scheme index.
struct EveObservation {
  GhzLabel g1 = GhzLabel::Pp;
  GhzLabel g2 = GhzLabel::Pp;
  BellOutcome alice_announced = BellOutcome::PhiPlus;
  BellOutcome bob_announced = BellOutcome::PhiPlus;
};

struct BranchTriple {
  BellOutcome alice, bob, charlie;

  friend constexpr bool operator==(const BranchTriple&, const BranchTriple&) = default;
};

// Pre-operation branches from which some allowed operator pair could
// produce the announcement. Alice's four operators reach every outcome,
// so only Bob's restricted alphabet constrains the set; four branches
// survive on any GHZ-pair channel.
inline std::vector<BranchTriple> eve_candidate_branches(
    const EveObservation& obs, std::span<const PauliOp> bob_alphabet = kStandardBobOps) {
  std::vector<BranchTriple> out;
  for (const SwapTerm& t : decompose(obs.g1, obs.g2)) {
    for (PauliOp b_op : bob_alphabet) {
      if (bell_action(b_op, t.bob).outcome == obs.bob_announced) {
        out.push_back({t.alice, t.bob, t.charlie});
        break;
      }
    }
  }
  return out;
}

namespace detail {

struct HonestGroup {
  PauliOp alice_op, bob_op;
  int alice_symbol, bob_symbol;
  BellOutcome alice_measured, bob_measured, charlie_measured;
  BranchTriple true_branch;  // pre-operation outcomes
};

// One honest group with uniformly random symbols under the given scheme.
inline HonestGroup run_honest_group(const SessionConfig& config, const EncodingScheme& scheme,
                                    Rng& rng) {
  HonestGroup g{};
  g.alice_symbol = (rng.bit() << 1) | rng.bit();
  g.bob_symbol = rng.bit();
  g.alice_op = scheme.alice_op_for(g.alice_symbol);
  const auto bob_ops = bob_alphabet_ops(config.bob_alphabet);
  g.bob_op = bob_ops[static_cast<std::size_t>(scheme.bob_position_for_bit(g.bob_symbol))];

  const auto [g1, g2] = config.initial_pair;
  StateVector state = tensor(make_ghz(g1), make_ghz(g2));
  state = apply_local(state, g.alice_op, 0);
  state = apply_local(state, g.bob_op, 1);
  auto [a, s1] = bell_measure(state, kAlicePair.first, kAlicePair.second, rng);
  auto [b, s2] = bell_measure(s1, kBobPair.first, kBobPair.second, rng);
  auto [c, s3] = bell_measure(s2, kCharliePair.first, kCharliePair.second, rng);
  g.alice_measured = a;
  g.bob_measured = b;
  g.charlie_measured = c;
  g.true_branch = {bell_preimage(g.alice_op, a), bell_preimage(g.bob_op, b), c};
  return g;
}

}  // namespace detail

// One state-guess trial: Eve narrows the pre-operation branch to four
// candidates from the announcement and guesses uniformly. With Charlie's
// outcome leaked the candidate set collapses to one.
inline bool eve_guess_trial(const SessionConfig& config, Rng& rng,
                            bool leak_charlie_outcome = false) {
  const EncodingScheme scheme = scheme_from_index(
      static_cast<int>(rng.below(24)), static_cast<int>(rng.below(2)));  // hidden from Eve
  const detail::HonestGroup g = detail::run_honest_group(config, scheme, rng);
  const EveObservation obs{config.initial_pair.first, config.initial_pair.second,
                           g.alice_measured, g.bob_measured};
  auto candidates = eve_candidate_branches(obs, bob_alphabet_ops(config.bob_alphabet));
  if (leak_charlie_outcome) {
    std::erase_if(candidates,
                  [&](const BranchTriple& t) { return t.charlie != g.charlie_measured; });
  }
  if (candidates.empty()) throw std::logic_error("eve_guess_trial: empty candidate set");
  const BranchTriple guess = candidates[rng.below(candidates.size())];
  return guess == g.true_branch;
}

struct EveMessageGuess {
  std::string alice_bits;  // two guessed bits
  std::string bob_bits;    // one guessed bit
};

// Blind strategy: uniform over candidate branches and over schemes.
inline EveMessageGuess eve_message_guess(const EveObservation& obs, Rng& rng) {
  const auto candidates = eve_candidate_branches(obs);
  const BranchTriple branch = candidates[rng.below(candidates.size())];

  const PauliOp implied_alice = op_taking(branch.alice, obs.alice_announced);
  const int implied_bob_pos = bell_bits(branch.bob).x == bell_bits(obs.bob_announced).x ? 0 : 1;

  const EncodingScheme guessed_scheme = scheme_from_index(
      static_cast<int>(rng.below(24)), static_cast<int>(rng.below(2)));
  return {two_bits(guessed_scheme.alice_symbol(implied_alice)),
          std::string(1, static_cast<char>('0' + guessed_scheme.bob_bit_for_position(implied_bob_pos)))};
}

// Full-information decode: with the scheme and Charlie's outcome known the
// message is determined.
inline EveMessageGuess eve_message_guess_informed(const EveObservation& obs, BellOutcome charlie,
                                                  const EncodingScheme& scheme) {
  const OpPair ops = decode(charlie, {obs.alice_announced, obs.bob_announced}, obs.g1, obs.g2);
  const int bob_pos = ops.bob_op == kStandardBobOps[0] ? 0 : 1;
  return {two_bits(scheme.alice_symbol(ops.alice_op)),
          std::string(1, static_cast<char>('0' + scheme.bob_bit_for_position(bob_pos)))};
}

struct AttackReport {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double rate = 0.0;
  double ci95 = 0.0;

  json to_json() const {
    return json{{"trials", trials}, {"successes", successes}, {"rate", rate}, {"ci95", ci95}};
  }
};

namespace detail {

inline AttackReport make_report(std::uint64_t trials, std::uint64_t successes) {
  AttackReport r;
  r.trials = trials;
  r.successes = successes;
  r.rate = trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
  r.ci95 = trials ? 1.96 * std::sqrt(r.rate * (1.0 - r.rate) / static_cast<double>(trials)) : 0.0;
  return r;
}

}  // namespace detail

// Monte Carlo state-guess harness; trials use independent streams derived
// from the session seed.
inline AttackReport run_state_guess_attack(const SessionConfig& config, std::uint64_t trials,
                                           bool leak_charlie_outcome = false) {
  std::uint64_t successes = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng = Rng::derive(config.seed, t);
    if (eve_guess_trial(config, rng, leak_charlie_outcome)) ++successes;
  }
  return detail::make_report(trials, successes);
}

struct MessageGuessReport {
  AttackReport alice;  // hit rate on the two-bit symbol
  AttackReport bob;    // hit rate on the one-bit symbol

  json to_json() const { return json{{"alice", alice.to_json()}, {"bob", bob.to_json()}}; }
};

inline MessageGuessReport run_message_guess_attack(const SessionConfig& config,
                                                   std::uint64_t trials, bool informed = false) {
  std::uint64_t alice_hits = 0, bob_hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng = Rng::derive(config.seed, t);
    const EncodingScheme scheme = scheme_from_index(
        static_cast<int>(rng.below(24)), static_cast<int>(rng.below(2)));
    const detail::HonestGroup g = detail::run_honest_group(config, scheme, rng);
    const EveObservation obs{config.initial_pair.first, config.initial_pair.second,
                             g.alice_measured, g.bob_measured};
    const EveMessageGuess guess =
        informed ? eve_message_guess_informed(obs, g.charlie_measured, scheme)
                 : eve_message_guess(obs, rng);
    if (guess.alice_bits == two_bits(g.alice_symbol)) ++alice_hits;
    if (guess.bob_bits == std::string(1, static_cast<char>('0' + g.bob_symbol))) ++bob_hits;
  }
  return {detail::make_report(trials, alice_hits), detail::make_report(trials, bob_hits)};
}

// Distribution-phase tampering applied to one in-transit GHZ triple.
struct TamperModel {
  enum class Kind { None, AncillaCoupling, Replacement };

  Kind kind = Kind::None;
  int target_qubit = 2;         // which qubit of the triple the ancilla couples to
  double coupling_angle = 0.0;  // 0 = identity, π/2 = full controlled flip
  std::optional<DensityMatrix> replacement;

  static TamperModel none() { return {}; }

  static TamperModel ancilla_coupling(int qubit, double angle) {
    TamperModel m;
    m.kind = Kind::AncillaCoupling;
    m.target_qubit = qubit;
    m.coupling_angle = angle;
    return m;
  }

  static TamperModel replacement_with(DensityMatrix rho) {
    TamperModel m;
    m.kind = Kind::Replacement;
    m.replacement = std::move(rho);
    return m;
  }
};

namespace detail {

inline void check_tamper(const TamperModel& model) {
  if (model.kind == TamperModel::Kind::AncillaCoupling) {
    if (model.target_qubit < 0 || model.target_qubit > 2)
      throw std::invalid_argument("TamperModel: target qubit must be 0..2");
    if (!std::isfinite(model.coupling_angle))
      throw std::invalid_argument("TamperModel: coupling angle must be finite");
  }
  if (model.kind == TamperModel::Kind::Replacement && !model.replacement.has_value())
    throw std::invalid_argument("TamperModel: replacement state missing");
}

// Controlled rotation of a fresh |0> ancilla, then trace the ancilla out.
inline DensityMatrix couple_ancilla(const StateVector& triple, int qubit, double angle) {
  const StateVector with_ancilla = tensor(triple, StateVector::computational(1, 0));
  const std::array<cplx, 4> rot = {std::cos(angle), -std::sin(angle), std::sin(angle),
                                   std::cos(angle)};
  return partial_trace_last_qubit(apply_controlled(with_ancilla, qubit, 3, rot));
}

}  // namespace detail

inline DensityMatrix apply_tamper(const TamperModel& model, const StateVector& channel) {
  detail::check_tamper(model);
  if (channel.num_qubits() != 3)
    throw std::invalid_argument("apply_tamper: expected a 3-qubit channel state");
  switch (model.kind) {
    case TamperModel::Kind::None: return density_from_pure(channel);
    case TamperModel::Kind::AncillaCoupling:
      return detail::couple_ancilla(channel, model.target_qubit, model.coupling_angle);
    case TamperModel::Kind::Replacement: return *model.replacement;
  }
  throw std::logic_error("apply_tamper: unknown model kind");
}

inline DensityMatrix apply_tamper(const TamperModel& model, const DensityMatrix& channel) {
  detail::check_tamper(model);
  switch (model.kind) {
    case TamperModel::Kind::None: return channel;
    case TamperModel::Kind::Replacement: return *model.replacement;
    case TamperModel::Kind::AncillaCoupling: {
      // ρ ⊗ |0><0|, the controlled rotation, then the ancilla trace, all
      // carried out on the 16x16 matrix.
      const double c = std::cos(model.coupling_angle);
      const double s = std::sin(model.coupling_angle);
      Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(16, 16);
      const int control_shift = 4 - 1 - model.target_qubit;  // ancilla is bit 0
      for (int i = 0; i < 16; ++i) {
        if (!((i >> control_shift) & 1) || (i & 1)) continue;
        u(i, i) = c;
        u(i, i + 1) = -s;
        u(i + 1, i) = s;
        u(i + 1, i + 1) = c;
      }
      Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(16, 16);
      for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) big(2 * a, 2 * b) = channel.matrix()(a, b);
      big = u * big * u.adjoint();
      Matrix8 out = Matrix8::Zero();
      for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b)
          out(a, b) = big(2 * a, 2 * b) + big(2 * a + 1, 2 * b + 1);
      out = ((out + out.adjoint()) / 2.0).eval();
      return DensityMatrix(std::move(out));
    }
  }
  throw std::logic_error("apply_tamper: unknown model kind");
}

}  // namespace qsdc
