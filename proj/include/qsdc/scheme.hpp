// Secret encoding schemes: bijections between local operators and bit
// symbols, enumerated by lexicographic permutation rank.
#pragma once

#include <array>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qsdc/bases.hpp"

namespace qsdc {

namespace detail {
constexpr std::array<int, 5> kFactorial = {1, 1, 2, 6, 24};
}

// Lexicographic unrank of a permutation of {0, .., N-1}.
template <std::size_t N>
std::array<int, N> permutation_of_rank(int rank) {
  static_assert(N >= 1 && N <= 4);
  if (rank < 0 || rank >= detail::kFactorial[N])
    throw std::out_of_range("permutation rank out of range");
  std::array<int, N> pool{};
  std::iota(pool.begin(), pool.end(), 0);
  std::array<int, N> out{};
  std::size_t pool_size = N;
  for (std::size_t i = 0; i < N; ++i) {
    const int f = detail::kFactorial[N - 1 - i];
    const std::size_t k = static_cast<std::size_t>(rank / f);
    rank %= f;
    out[i] = pool[k];
    for (std::size_t j = k; j + 1 < pool_size; ++j) pool[j] = pool[j + 1];
    --pool_size;
  }
  return out;
}

template <std::size_t N>
int permutation_rank(const std::array<int, N>& perm) {
  static_assert(N >= 1 && N <= 4);
  int rank = 0;
  for (std::size_t i = 0; i < N; ++i) {
    int smaller_after = 0;
    for (std::size_t j = i + 1; j < N; ++j)
      if (perm[j] < perm[i]) ++smaller_after;
    rank += smaller_after * detail::kFactorial[N - 1 - i];
  }
  return rank;
}

inline std::string two_bits(int symbol) {
  return {static_cast<char>('0' + ((symbol >> 1) & 1)), static_cast<char>('0' + (symbol & 1))};
}

// The secret operator-to-symbol assignments. Index 0 is the natural
// assignment σ00→00, σ01→01, σ10→10, σ11→11 and σ0→0, σ1→1; the
// two-symbol map is stored by alphabet position so it also serves the
// {I, iσy} alternate alphabet.
struct EncodingScheme {
  std::array<int, 4> alice_symbol_of_op;  // operator value -> two-bit symbol
  std::array<int, 2> bob_symbol_of_pos;   // alphabet position -> bit
  int alice_index = 0;
  int bob_index = 0;

  int alice_symbol(PauliOp op) const { return alice_symbol_of_op[static_cast<int>(op)]; }

  PauliOp alice_op_for(int symbol) const {
    for (int op = 0; op < 4; ++op)
      if (alice_symbol_of_op[op] == symbol) return static_cast<PauliOp>(op);
    throw std::out_of_range("EncodingScheme: bad two-bit symbol");
  }

  int bob_bit_for_position(int pos) const { return bob_symbol_of_pos[pos]; }

  int bob_position_for_bit(int bit) const {
    return bob_symbol_of_pos[0] == bit ? 0 : 1;
  }
};

inline EncodingScheme scheme_from_index(int alice_index, int bob_index) {
  if (bob_index < 0 || bob_index > 1)
    throw std::out_of_range("scheme_from_index: bob index must be 0 or 1");
  EncodingScheme s;
  s.alice_symbol_of_op = permutation_of_rank<4>(alice_index);
  s.bob_symbol_of_pos = {bob_index, 1 - bob_index};
  s.alice_index = alice_index;
  s.bob_index = bob_index;
  return s;
}

// Public Bell-outcome-to-two-bit map used for the random half of the key
// material. Index 0 is Φ+→00, Φ-→01, Ψ+→10, Ψ-→11.
struct BellKeyMap {
  std::array<int, 4> symbol_of_outcome;
  int index = 0;

  static BellKeyMap from_index(int idx) {
    return {permutation_of_rank<4>(idx), idx};
  }

  std::string bits_for(BellOutcome b) const {
    return two_bits(symbol_of_outcome[static_cast<int>(b)]);
  }
};

}  // namespace qsdc
