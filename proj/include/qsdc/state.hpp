// Exact state engine for small qubit systems: basis constructors, tensor
// products, local operators and Bell-basis projective measurement.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qsdc/bases.hpp"
#include "qsdc/rng.hpp"

namespace qsdc {

using cplx = std::complex<double>;

inline constexpr int kMaxQubits = 8;
inline constexpr double kExactTol = 1e-12;
inline const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// Qubit 0 is the leftmost ket factor: in an n-qubit basis index the bit of
// qubit k sits at position n-1-k (most significant first), so |01> has
// index 1 and tensor(a, b) keeps a's qubits in front.
constexpr int bit_at(std::size_t index, int qubit, int num_qubits) {
  return static_cast<int>((index >> (num_qubits - 1 - qubit)) & 1u);
}

constexpr std::size_t qubit_mask(int qubit, int num_qubits) {
  return std::size_t{1} << (num_qubits - 1 - qubit);
}

class StateVector {
 public:
  StateVector(int num_qubits, std::vector<cplx> amplitudes)
      : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
    if (num_qubits_ < 1 || num_qubits_ > kMaxQubits)
      throw std::invalid_argument("StateVector: qubit count out of range");
    if (amps_.size() != (std::size_t{1} << num_qubits_))
      throw std::invalid_argument("StateVector: amplitude count != 2^n");
    if (std::abs(norm_squared() - 1.0) > 1e-9)
      throw std::invalid_argument("StateVector: amplitudes not unit norm");
  }

  static StateVector computational(int num_qubits, std::size_t basis_index) {
    if (num_qubits < 1 || num_qubits > kMaxQubits)
      throw std::invalid_argument("StateVector: qubit count out of range");
    std::vector<cplx> amps(std::size_t{1} << num_qubits, cplx{0.0, 0.0});
    if (basis_index >= amps.size())
      throw std::out_of_range("StateVector: basis index out of range");
    amps[basis_index] = cplx{1.0, 0.0};
    return StateVector(num_qubits, std::move(amps));
  }

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }
  std::span<const cplx> amplitudes() const { return amps_; }

  double norm_squared() const {
    double s = 0.0;
    for (const cplx& a : amps_) s += std::norm(a);
    return s;
  }

 private:
  friend StateVector apply_one_qubit(const StateVector&, const std::array<cplx, 4>&, int);
  int num_qubits_;
  std::vector<cplx> amps_;
};

inline cplx inner_product(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits())
    throw std::invalid_argument("inner_product: qubit count mismatch");
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline bool approx_equal(const StateVector& a, const StateVector& b, double tol = kExactTol) {
  if (a.num_qubits() != b.num_qubits()) return false;
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

// Global phase carries no observable content; protocol-level equality
// checks use this form unless a test says "exact".
inline bool equal_up_to_global_phase(const StateVector& a, const StateVector& b,
                                     double tol = kExactTol) {
  if (a.num_qubits() != b.num_qubits()) return false;
  std::size_t k = 0;
  for (std::size_t i = 1; i < a.dim(); ++i)
    if (std::abs(a[i]) > std::abs(a[k])) k = i;
  if (std::abs(a[k]) < tol) return approx_equal(a, b, tol);
  const cplx phase = b[k] / a[k];
  if (std::abs(std::abs(phase) - 1.0) > tol) return false;
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (std::abs(phase * a[i] - b[i]) > tol) return false;
  return true;
}

inline StateVector make_bell(BellOutcome outcome) {
  const auto [x, z] = bell_bits(outcome);
  std::vector<cplx> amps(4, cplx{0.0, 0.0});
  amps[static_cast<std::size_t>(x)] = kInvSqrt2;          // |0 x>
  amps[static_cast<std::size_t>(2 + (1 - x))] = z ? -kInvSqrt2 : kInvSqrt2;  // |1 x̄>
  return StateVector(2, std::move(amps));
}

inline StateVector make_ghz(GhzLabel label) {
  const auto [p, i1, i2] = ghz_bits(label);
  std::vector<cplx> amps(8, cplx{0.0, 0.0});
  amps[static_cast<std::size_t>(2 * i1 + i2)] = kInvSqrt2;  // |0 i1 i2>
  amps[static_cast<std::size_t>(4 + 2 * (1 - i1) + (1 - i2))] =
      p ? -kInvSqrt2 : kInvSqrt2;  // |1 ī1 ī2>
  return StateVector(3, std::move(amps));
}

inline StateVector tensor(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() + b.num_qubits() > kMaxQubits)
    throw std::invalid_argument("tensor: combined qubit count exceeds limit");
  std::vector<cplx> amps(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) amps[i * b.dim() + j] = a[i] * b[j];
  return StateVector(a.num_qubits() + b.num_qubits(), std::move(amps));
}

// Applies a 2x2 matrix {m00, m01, m10, m11} on one qubit.
inline StateVector apply_one_qubit(const StateVector& state, const std::array<cplx, 4>& m,
                                   int qubit) {
  if (qubit < 0 || qubit >= state.num_qubits())
    throw std::out_of_range("apply_one_qubit: qubit index out of range");
  const std::size_t mask = qubit_mask(qubit, state.num_qubits());
  std::vector<cplx> amps(state.amplitudes().begin(), state.amplitudes().end());
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & mask) continue;
    const cplx a0 = amps[i];
    const cplx a1 = amps[i | mask];
    amps[i] = m[0] * a0 + m[1] * a1;
    amps[i | mask] = m[2] * a0 + m[3] * a1;
  }
  return StateVector(state.num_qubits(), std::move(amps));
}

inline StateVector apply_local(const StateVector& state, PauliOp op, int qubit) {
  const auto m = pauli_matrix(op);
  return apply_one_qubit(state, {cplx{m[0], 0}, cplx{m[1], 0}, cplx{m[2], 0}, cplx{m[3], 0}},
                         qubit);
}

// Applies a 2x2 matrix on `target` when `control` is |1>.
inline StateVector apply_controlled(const StateVector& state, int control, int target,
                                    const std::array<cplx, 4>& m) {
  if (control < 0 || control >= state.num_qubits() || target < 0 ||
      target >= state.num_qubits() || control == target)
    throw std::out_of_range("apply_controlled: bad qubit indices");
  const std::size_t cmask = qubit_mask(control, state.num_qubits());
  const std::size_t tmask = qubit_mask(target, state.num_qubits());
  std::vector<cplx> amps(state.amplitudes().begin(), state.amplitudes().end());
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (!(i & cmask) || (i & tmask)) continue;
    const cplx a0 = amps[i];
    const cplx a1 = amps[i | tmask];
    amps[i] = m[0] * a0 + m[1] * a1;
    amps[i | tmask] = m[2] * a0 + m[3] * a1;
  }
  return StateVector(state.num_qubits(), std::move(amps));
}

namespace detail {

// <b_i b_j | B_xz>: the Bell coefficient on the ordered pair bits.
inline double bell_coeff(BellOutcome outcome, int bi, int bj) {
  const auto [x, z] = bell_bits(outcome);
  if (bi == 0) return bj == x ? kInvSqrt2 : 0.0;
  if (bj == (x ^ 1)) return z ? -kInvSqrt2 : kInvSqrt2;
  return 0.0;
}

struct BellProjection {
  double probability = 0.0;
  // Residual amplitudes keyed by the full index with the pair bits cleared.
  std::vector<cplx> residual;
};

inline BellProjection project_pair(const StateVector& state, int q1, int q2,
                                   BellOutcome outcome) {
  const int n = state.num_qubits();
  const std::size_t m1 = qubit_mask(q1, n);
  const std::size_t m2 = qubit_mask(q2, n);
  BellProjection proj;
  proj.residual.assign(state.dim(), cplx{0.0, 0.0});
  for (std::size_t i = 0; i < state.dim(); ++i) {
    const double c = bell_coeff(outcome, bit_at(i, q1, n), bit_at(i, q2, n));
    if (c != 0.0) proj.residual[i & ~(m1 | m2)] += c * state[i];
  }
  for (const cplx& r : proj.residual) proj.probability += std::norm(r);
  return proj;
}

}  // namespace detail

inline void check_pair(const StateVector& state, int q1, int q2) {
  if (q1 < 0 || q1 >= state.num_qubits() || q2 < 0 || q2 >= state.num_qubits() || q1 == q2)
    throw std::out_of_range("bell measurement: invalid qubit pair");
}

// Probabilities of projecting the ordered pair onto Φ+, Φ-, Ψ+, Ψ-.
inline std::array<double, 4> bell_probabilities(const StateVector& state, int q1, int q2) {
  check_pair(state, q1, q2);
  std::array<double, 4> probs{};
  for (BellOutcome o : kBellOutcomes)
    probs[static_cast<int>(o)] = detail::project_pair(state, q1, q2, o).probability;
  return probs;
}

// Projects the pair onto one Bell outcome. Returns the outcome probability
// and, when it is nonzero, the renormalized post-measurement state.
inline std::pair<double, std::vector<cplx>> bell_project_raw(const StateVector& state, int q1,
                                                             int q2, BellOutcome outcome) {
  check_pair(state, q1, q2);
  const int n = state.num_qubits();
  const auto proj = detail::project_pair(state, q1, q2, outcome);
  std::vector<cplx> amps;
  if (proj.probability > 1e-300) {
    const double scale = 1.0 / std::sqrt(proj.probability);
    amps.assign(state.dim(), cplx{0.0, 0.0});
    const std::size_t m1 = qubit_mask(q1, n);
    const std::size_t m2 = qubit_mask(q2, n);
    for (std::size_t i = 0; i < state.dim(); ++i) {
      const double c = detail::bell_coeff(outcome, bit_at(i, q1, n), bit_at(i, q2, n));
      if (c != 0.0) amps[i] = c * proj.residual[i & ~(m1 | m2)] * scale;
    }
  }
  return {proj.probability, std::move(amps)};
}

inline std::pair<double, std::optional<StateVector>> bell_project(const StateVector& state,
                                                                  int q1, int q2,
                                                                  BellOutcome outcome) {
  auto [p, amps] = bell_project_raw(state, q1, q2, outcome);
  if (amps.empty()) return {p, std::nullopt};
  return {p, StateVector(state.num_qubits(), std::move(amps))};
}

// Samples a Bell outcome for the pair by the Born rule and collapses the
// state. Deterministic given the random source's seed.
inline std::pair<BellOutcome, StateVector> bell_measure(const StateVector& state, int q1, int q2,
                                                        Rng& rng) {
  const auto probs = bell_probabilities(state, q1, q2);
  const auto outcome = static_cast<BellOutcome>(rng.pick(probs));
  auto [p, post] = bell_project(state, q1, q2, outcome);
  if (!post.has_value())
    throw std::logic_error("bell_measure: sampled an outcome of zero probability");
  return {outcome, *std::move(post)};
}

}  // namespace qsdc
