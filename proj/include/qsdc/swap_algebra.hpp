// Closed-form entanglement-swapping algebra for GHZ pairs.
//
// Parties share two GHZ triples on qubits (0,1,2) and (3,4,5); Alice holds
// (0,3), Bob (1,4), Charlie (2,5). Bell-measuring the three pairs projects
// the product state onto eight equally weighted triples of Bell outcomes.
// With GHZ labels (p, i1, i2) and Bell labels (x, z), the support and signs
// of that expansion have a closed form which this module implements
// symbolically; the state engine provides the independent numeric route.
#pragma once

#include <array>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qsdc/bases.hpp"
#include "qsdc/errors.hpp"

namespace qsdc {

inline const double kSwapAmplitude = 1.0 / (2.0 * std::numbers::sqrt2);

struct SwapTerm {
  BellOutcome alice;
  BellOutcome bob;
  BellOutcome charlie;
  double amplitude;  // ±1/(2√2) for GHZ-pair inputs
};

struct SignedBell {
  BellOutcome outcome;
  int sign;  // ±1
};

struct SignedGhz {
  GhzLabel label;
  int sign;  // ±1
};

// Alice's four operators paired with Bob's two-operator alphabet.
struct OpPair {
  PauliOp alice_op;
  PauliOp bob_op;

  friend constexpr bool operator==(const OpPair&, const OpPair&) = default;
};

inline constexpr std::array<PauliOp, 2> kStandardBobOps = {PauliOp::Sigma00, PauliOp::Sigma01};
// The {I, iσy} two-symbol alphabet.
inline constexpr std::array<PauliOp, 2> kAlternateBobOps = {PauliOp::Sigma00, PauliOp::Sigma10};

// On the first qubit of a Bell pair, an operator with amplitude flip a and
// phase flip f maps B(x, z) to (-1)^{z·a} B(x⊕a, z⊕f).
constexpr SignedBell bell_action(PauliOp op, BellOutcome b) {
  const auto [x, z] = bell_bits(b);
  const int a = op_flips_amplitude(op);
  const int f = op_flips_phase(op);
  return {bell_from_bits(x ^ a, z ^ f), (z & a) ? -1 : 1};
}

// All four operators are involutions on Bell labels, so the same flips
// recover the pre-operation outcome.
constexpr BellOutcome bell_preimage(PauliOp op, BellOutcome measured) {
  return bell_action(op, measured).outcome;
}

// The unique operator whose Bell action maps `from` to `to`: with
// amplitude flip a = x⊕x' and phase flip f = z⊕z' that is σ_{f, f⊕a}.
constexpr PauliOp op_taking(BellOutcome from, BellOutcome to) {
  const auto [x1, z1] = bell_bits(from);
  const auto [x2, z2] = bell_bits(to);
  const int a = x1 ^ x2;
  const int f = z1 ^ z2;
  return static_cast<PauliOp>((f << 1) | (f ^ a));
}

// On qubit 0 of GHZ(p, i1, i2): label (p⊕f, i1⊕a, i2⊕a), sign (-1)^{p·a}.
constexpr SignedGhz ghz_action_qubit0(PauliOp op, GhzLabel g) {
  const auto [p, i1, i2] = ghz_bits(g);
  const int a = op_flips_amplitude(op);
  const int f = op_flips_phase(op);
  return {ghz_from_bits(p ^ f, i1 ^ a, i2 ^ a), (p & a) ? -1 : 1};
}

// On qubit 1 of GHZ(p, i1, i2): label (p⊕f, i1⊕a, i2), sign
// (-1)^{f·(i1⊕a)}.
constexpr SignedGhz ghz_action_qubit1(PauliOp op, GhzLabel g) {
  const auto [p, i1, i2] = ghz_bits(g);
  const int a = op_flips_amplitude(op);
  const int f = op_flips_phase(op);
  return {ghz_from_bits(p ^ f, i1 ^ a, i2), (f & (i1 ^ a)) ? -1 : 1};
}

// (alice_op on qubit 0) ⊗ (bob_op on qubit 1) ⊗ I applied to a GHZ state.
constexpr SignedGhz ghz_op_action(GhzLabel g, PauliOp alice_op, PauliOp bob_op) {
  const SignedGhz after_alice = ghz_action_qubit0(alice_op, g);
  const SignedGhz after_bob = ghz_action_qubit1(bob_op, after_alice.label);
  return {after_bob.label, after_alice.sign * after_bob.sign};
}

constexpr SignedGhz apply_op_pair(GhzLabel g, const OpPair& ops) {
  return ghz_op_action(g, ops.alice_op, ops.bob_op);
}

// Expansion of GHZ(p1,i1,i2) ⊗ GHZ(p2,j1,j2) over Bell(0,3) ⊗ Bell(1,4)
// ⊗ Bell(2,5). Exactly eight terms: the amplitude bits satisfy
// x_b = x_a ⊕ i1 ⊕ j1 and x_c = x_a ⊕ i2 ⊕ j2, the phase bits satisfy
// z_a ⊕ z_b ⊕ z_c = p1 ⊕ p2, and each term carries amplitude
// (-1)^{p2·x_a + z_b·i1 + z_c·i2} / (2√2).
inline std::array<SwapTerm, 8> decompose(GhzLabel g1, GhzLabel g2) {
  const auto [p1, i1, i2] = ghz_bits(g1);
  const auto [p2, j1, j2] = ghz_bits(g2);
  const int parity = p1 ^ p2;
  std::array<SwapTerm, 8> terms;
  std::size_t k = 0;
  for (int xa = 0; xa < 2; ++xa) {
    for (int za = 0; za < 2; ++za) {
      for (int zb = 0; zb < 2; ++zb) {
        const int zc = parity ^ za ^ zb;
        const int sign_bit = (p2 & xa) ^ (zb & i1) ^ (zc & i2);
        terms[k++] = {bell_from_bits(xa, za), bell_from_bits(xa ^ i1 ^ j1, zb),
                      bell_from_bits(xa ^ i2 ^ j2, zc),
                      sign_bit ? -kSwapAmplitude : kSwapAmplitude};
      }
    }
  }
  return terms;
}

// The (Alice, Bob) outcome pairs co-occurring with a given Charlie outcome
// when no encoding operations were applied. Two pairs for GHZ-pair inputs.
inline std::vector<std::pair<BellOutcome, BellOutcome>> charlie_consistent_pairs(
    BellOutcome charlie, GhzLabel g1, GhzLabel g2) {
  std::vector<std::pair<BellOutcome, BellOutcome>> pairs;
  for (const SwapTerm& t : decompose(g1, g2))
    if (t.charlie == charlie) pairs.emplace_back(t.alice, t.bob);
  return pairs;
}

// Decoded operator pair plus the pre-operation branch it acted on.
struct DecodedOps {
  PauliOp alice_op;
  PauliOp bob_op;
  BellOutcome alice_pre;
  BellOutcome bob_pre;
};

// Lookup table from (Charlie outcome, announced Alice outcome, announced
// Bob outcome) to the unique operator pair explaining the announcement.
// Construction enumerates every (operator pair, consistent branch)
// combination and refuses duplicate images, so instantiating a table is
// itself the uniqueness proof for its channel and alphabets.
class DecodeTable {
 public:
  DecodeTable(GhzLabel g1, GhzLabel g2,
              std::span<const PauliOp> alice_alphabet = kPauliOps,
              std::span<const PauliOp> bob_alphabet = kStandardBobOps) {
    for (BellOutcome charlie : kBellOutcomes) {
      for (const auto& [a0, b0] : charlie_consistent_pairs(charlie, g1, g2)) {
        for (PauliOp a_op : alice_alphabet) {
          for (PauliOp b_op : bob_alphabet) {
            const BellOutcome a_ann = bell_action(a_op, a0).outcome;
            const BellOutcome b_ann = bell_action(b_op, b0).outcome;
            auto& slot = entries_[slot_index(charlie, a_ann, b_ann)];
            if (slot.has_value())
              throw std::logic_error("DecodeTable: decode collision for channel (" +
                                     to_string(g1) + ", " + to_string(g2) + ")");
            slot = DecodedOps{a_op, b_op, a0, b0};
          }
        }
      }
    }
  }

  const DecodedOps& lookup(BellOutcome charlie, BellOutcome alice_announced,
                           BellOutcome bob_announced) const {
    const auto& slot = entries_[slot_index(charlie, alice_announced, bob_announced)];
    if (!slot.has_value()) {
      std::ostringstream msg;
      msg << "no operator pair reaches announcement (" << to_string(alice_announced) << ", "
          << to_string(bob_announced) << ") from Charlie outcome " << to_string(charlie);
      throw InconsistentTriple(msg.str());
    }
    return *slot;
  }

 private:
  static std::size_t slot_index(BellOutcome c, BellOutcome a, BellOutcome b) {
    return (static_cast<std::size_t>(c) << 4) | (static_cast<std::size_t>(a) << 2) |
           static_cast<std::size_t>(b);
  }

  std::array<std::optional<DecodedOps>, 64> entries_;
};

// Shared tables for the standard alphabets, one per initial GHZ pair.
inline const DecodeTable& standard_decode_table(GhzLabel g1, GhzLabel g2) {
  static const std::vector<DecodeTable> tables = [] {
    std::vector<DecodeTable> all;
    all.reserve(64);
    for (GhzLabel a : kGhzLabels)
      for (GhzLabel b : kGhzLabels) all.emplace_back(a, b);
    return all;
  }();
  return tables[static_cast<std::size_t>(g1) * 8 + static_cast<std::size_t>(g2)];
}

// Charlie's step-8 inference: the unique operator pair under which one of
// his consistent branches maps to the announced outcomes.
inline OpPair decode(BellOutcome charlie, std::pair<BellOutcome, BellOutcome> announced,
                     GhzLabel g1, GhzLabel g2) {
  const DecodedOps& d = standard_decode_table(g1, g2).lookup(charlie, announced.first,
                                                             announced.second);
  return {d.alice_op, d.bob_op};
}

// Key-generation inference: knowing the outcome at `known_pos` and the
// announced outcome at `announced_pos` (positions 0 = Alice's pair,
// 1 = Bob's, 2 = Charlie's), recover the third party's outcome.
inline BellOutcome infer_third_outcome(GhzLabel g1, GhzLabel g2, int known_pos,
                                       BellOutcome known, int announced_pos,
                                       BellOutcome announced) {
  if (known_pos == announced_pos || known_pos < 0 || known_pos > 2 || announced_pos < 0 ||
      announced_pos > 2)
    throw std::invalid_argument("infer_third_outcome: bad positions");
  const int third_pos = 3 - known_pos - announced_pos;
  std::optional<BellOutcome> third;
  for (const SwapTerm& t : decompose(g1, g2)) {
    const std::array<BellOutcome, 3> triple = {t.alice, t.bob, t.charlie};
    if (triple[known_pos] != known || triple[announced_pos] != announced) continue;
    if (third.has_value() && *third != triple[third_pos])
      throw InferenceAmbiguity("multiple completions for announced outcome");
    third = triple[third_pos];
  }
  if (!third.has_value())
    throw InconsistentTriple("no decomposition branch matches the announced outcomes");
  return *third;
}

}  // namespace qsdc
