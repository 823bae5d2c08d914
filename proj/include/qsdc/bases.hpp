// Symbolic Bell basis, GHZ basis and single-qubit encoding operators.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace qsdc {

// Bell basis. With the (x, z) labeling |B_xz> = (|0 x> + (-1)^z |1 x̄>)/√2
// the enum value packs as 2x + z:
//   Φ+ = (|00>+|11>)/√2   Φ- = (|00>-|11>)/√2
//   Ψ+ = (|01>+|10>)/√2   Ψ- = (|01>-|10>)/√2
enum class BellOutcome : std::uint8_t {
  PhiPlus = 0,
  PhiMinus = 1,
  PsiPlus = 2,
  PsiMinus = 3,
};

inline constexpr std::array<BellOutcome, 4> kBellOutcomes = {
    BellOutcome::PhiPlus, BellOutcome::PhiMinus, BellOutcome::PsiPlus,
    BellOutcome::PsiMinus};

struct BellBits {
  int x;  // amplitude bit: 0 for Φ, 1 for Ψ
  int z;  // phase bit: 0 for +, 1 for -

  friend constexpr bool operator==(BellBits, BellBits) = default;
};

constexpr BellBits bell_bits(BellOutcome b) {
  const int v = static_cast<int>(b);
  return {v >> 1, v & 1};
}

constexpr BellOutcome bell_from_bits(int x, int z) {
  return static_cast<BellOutcome>(((x & 1) << 1) | (z & 1));
}

// GHZ basis:
//   P± = (|000>±|111>)/√2   Q± = (|001>±|110>)/√2
//   R± = (|010>±|101>)/√2   S± = (|011>±|100>)/√2
// Each state equals (|0>|i1>|i2> + (-1)^p |1>|ī1>|ī2>)/√2; the bits
// (p, i1, i2) are the eigenvalue labels under the stabilizer generators
// XXX, ZZI, ZIZ with eigenvalue +1 ↔ label 0.
enum class GhzLabel : std::uint8_t {
  Pp = 0,
  Pm = 1,
  Qp = 2,
  Qm = 3,
  Rp = 4,
  Rm = 5,
  Sp = 6,
  Sm = 7,
};

inline constexpr std::array<GhzLabel, 8> kGhzLabels = {
    GhzLabel::Pp, GhzLabel::Pm, GhzLabel::Qp, GhzLabel::Qm,
    GhzLabel::Rp, GhzLabel::Rm, GhzLabel::Sp, GhzLabel::Sm};

struct GhzBits {
  int p;   // phase bit     (XXX eigenvalue)
  int i1;  // amplitude bit (ZZI eigenvalue)
  int i2;  // amplitude bit (ZIZ eigenvalue)

  friend constexpr bool operator==(GhzBits, GhzBits) = default;
};

constexpr GhzBits ghz_bits(GhzLabel g) {
  const int v = static_cast<int>(g);
  return {v & 1, (v >> 2) & 1, (v >> 1) & 1};
}

constexpr GhzLabel ghz_from_bits(int p, int i1, int i2) {
  return static_cast<GhzLabel>(((i1 & 1) << 2) | ((i2 & 1) << 1) | (p & 1));
}

// Probability-vector index 4p + 2*i1 + i2, used by the security module.
constexpr int ghz_bits_index(GhzBits b) { return ((b.p & 1) << 2) | ((b.i1 & 1) << 1) | (b.i2 & 1); }
constexpr int ghz_bits_index(GhzLabel g) { return ghz_bits_index(ghz_bits(g)); }
constexpr GhzBits ghz_bits_from_index(int idx) { return {(idx >> 2) & 1, (idx >> 1) & 1, idx & 1}; }
constexpr GhzLabel ghz_from_index(int idx) {
  const GhzBits b = ghz_bits_from_index(idx);
  return ghz_from_bits(b.p, b.i1, b.i2);
}

// Encoding operators σ_{k1 k2}. All four are real:
//   σ00 = I,  σ01 = σx,  σ10 = iσy = |0><1| - |1><0|,  σ11 = σz.
// The two-symbol sender uses σ0 = σ00 and σ1 = σ01.
enum class PauliOp : std::uint8_t {
  Sigma00 = 0,
  Sigma01 = 1,
  Sigma10 = 2,
  Sigma11 = 3,
};

inline constexpr std::array<PauliOp, 4> kPauliOps = {
    PauliOp::Sigma00, PauliOp::Sigma01, PauliOp::Sigma10, PauliOp::Sigma11};

// Row-major 2x2 matrix {m00, m01, m10, m11}.
constexpr std::array<double, 4> pauli_matrix(PauliOp op) {
  switch (op) {
    case PauliOp::Sigma00: return {1, 0, 0, 1};
    case PauliOp::Sigma01: return {0, 1, 1, 0};
    case PauliOp::Sigma10: return {0, 1, -1, 0};
    case PauliOp::Sigma11: return {1, 0, 0, -1};
  }
  return {};
}

// σ_{k1 k2} = σz^{k1} σx^{k1⊕k2}: the σx factor flips amplitude bits and
// the σz factor flips phase bits (σ01 = σx flips x, σ11 = σz flips z,
// σ10 = iσy flips both).
constexpr int op_flips_amplitude(PauliOp op) {
  const int v = static_cast<int>(op);
  return ((v >> 1) ^ v) & 1;
}
constexpr int op_flips_phase(PauliOp op) { return (static_cast<int>(op) >> 1) & 1; }

inline std::string to_string(BellOutcome b) {
  switch (b) {
    case BellOutcome::PhiPlus: return "Phi+";
    case BellOutcome::PhiMinus: return "Phi-";
    case BellOutcome::PsiPlus: return "Psi+";
    case BellOutcome::PsiMinus: return "Psi-";
  }
  return "?";
}

inline std::string to_string(GhzLabel g) {
  static constexpr std::array<const char*, 8> names = {"P+", "P-", "Q+", "Q-",
                                                       "R+", "R-", "S+", "S-"};
  return names[static_cast<int>(g)];
}

inline std::string to_string(PauliOp op) {
  static constexpr std::array<const char*, 4> names = {"sigma00", "sigma01",
                                                       "sigma10", "sigma11"};
  return names[static_cast<int>(op)];
}

inline std::optional<BellOutcome> bell_from_name(std::string_view name) {
  for (BellOutcome b : kBellOutcomes)
    if (to_string(b) == name) return b;
  return std::nullopt;
}

inline std::optional<GhzLabel> ghz_from_name(std::string_view name) {
  for (GhzLabel g : kGhzLabels)
    if (to_string(g) == name) return g;
  return std::nullopt;
}

}  // namespace qsdc
