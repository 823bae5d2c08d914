// Dense linear-algebra oracles for the tests, built from scratch so they
// share no code path with the library's state engine.
#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace oracle {

using cx = std::complex<double>;
using Vec = std::vector<cx>;
using Mat = std::vector<std::vector<cx>>;

inline Mat pauli(char letter) {
  switch (letter) {
    case 'I': return {{1, 0}, {0, 1}};
    case 'X': return {{0, 1}, {1, 0}};
    case 'Y': return {{0, cx{0, -1}}, {cx{0, 1}, 0}};
    case 'Z': return {{1, 0}, {0, -1}};
    default: throw std::invalid_argument("oracle::pauli: unknown letter");
  }
}

inline Mat kron(const Mat& a, const Mat& b) {
  const std::size_t ar = a.size(), ac = a[0].size();
  const std::size_t br = b.size(), bc = b[0].size();
  Mat out(ar * br, std::vector<cx>(ac * bc, cx{0, 0}));
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t j = 0; j < ac; ++j)
      for (std::size_t k = 0; k < br; ++k)
        for (std::size_t l = 0; l < bc; ++l) out[i * br + k][j * bc + l] = a[i][j] * b[k][l];
  return out;
}

inline Vec kron_vec(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

inline Vec matvec(const Mat& m, const Vec& v) {
  Vec out(m.size(), cx{0, 0});
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  return out;
}

// conj(a) · b
inline cx dot(const Vec& a, const Vec& b) {
  cx s{0, 0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// I ⊗ .. ⊗ m ⊗ .. ⊗ I with the 2x2 block on the given qubit (qubit 0
// leftmost).
inline Mat op_on_qubit(const Mat& m2, int qubit, int num_qubits) {
  Mat out = {{1}};
  for (int q = 0; q < num_qubits; ++q) out = kron(out, q == qubit ? m2 : pauli('I'));
  return out;
}

inline Mat three_qubit_op(char q0, char q1, char q2) {
  return kron(kron(pauli(q0), pauli(q1)), pauli(q2));
}

constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490;

inline Vec bell_vector(int x, int z) {
  Vec v(4, cx{0, 0});
  v[static_cast<std::size_t>(x)] = kInvSqrt2;                       // |0 x>
  v[static_cast<std::size_t>(2 + (1 - x))] = z ? -kInvSqrt2 : kInvSqrt2;  // |1 x̄>
  return v;
}

inline Vec ghz_vector(int p, int i1, int i2) {
  Vec v(8, cx{0, 0});
  v[static_cast<std::size_t>(2 * i1 + i2)] = kInvSqrt2;
  v[static_cast<std::size_t>(4 + 2 * (1 - i1) + (1 - i2))] = p ? -kInvSqrt2 : kInvSqrt2;
  return v;
}

// Eigenvalue of a ±1-eigenvalue observable on an eigenvector; throws if
// the vector is not an eigenvector.
inline int eigenvalue_sign(const Mat& observable, const Vec& v) {
  const Vec image = matvec(observable, v);
  bool plus = true, minus = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(image[i] - v[i]) > 1e-12) plus = false;
    if (std::abs(image[i] + v[i]) > 1e-12) minus = false;
  }
  if (plus == minus) throw std::runtime_error("oracle: not a ±1 eigenvector");
  return plus ? 1 : -1;
}

}  // namespace oracle
