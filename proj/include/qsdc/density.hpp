// Three-qubit density matrices.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "qsdc/state.hpp"

namespace qsdc {

using Matrix8 = Eigen::Matrix<cplx, 8, 8>;
using Vector8 = Eigen::Matrix<cplx, 8, 1>;

inline Vector8 to_vector8(const StateVector& s) {
  if (s.num_qubits() != 3)
    throw std::invalid_argument("expected a 3-qubit state");
  Vector8 v;
  for (int i = 0; i < 8; ++i) v(i) = s[static_cast<std::size_t>(i)];
  return v;
}

// Hermitian, unit-trace, positive semidefinite 8x8 matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix8 m) : m_(std::move(m)) {
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
      throw std::invalid_argument("DensityMatrix: not Hermitian");
    if (std::abs(m_.trace().real() - 1.0) > 1e-12 || std::abs(m_.trace().imag()) > 1e-12)
      throw std::invalid_argument("DensityMatrix: trace != 1");
    Eigen::SelfAdjointEigenSolver<Matrix8> solver(m_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-10)
      throw std::invalid_argument("DensityMatrix: negative eigenvalue");
  }

  static constexpr int dim() { return 8; }
  const Matrix8& matrix() const { return m_; }

  // <ψ|ρ|ψ>
  double fidelity(const StateVector& psi) const {
    const Vector8 v = to_vector8(psi);
    return (v.adjoint() * m_ * v)(0).real();
  }

 private:
  Matrix8 m_;
};

inline DensityMatrix density_from_pure(const StateVector& s) {
  const Vector8 v = to_vector8(s);
  Matrix8 m = v * v.adjoint();
  // Symmetrize away the last-bit rounding so the Hermiticity check is exact.
  m = ((m + m.adjoint()) / 2.0).eval();
  return DensityMatrix(std::move(m));
}

// Reduces a 4-qubit pure state to the 3-qubit density matrix of its first
// three qubits (the 4th is the traced-out ancilla, sitting in the least
// significant bit).
inline DensityMatrix partial_trace_last_qubit(const StateVector& s) {
  if (s.num_qubits() != 4)
    throw std::invalid_argument("partial_trace_last_qubit: expected 4 qubits");
  Matrix8 m = Matrix8::Zero();
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      for (int anc = 0; anc < 2; ++anc)
        m(a, b) += s[static_cast<std::size_t>(2 * a + anc)] *
                   std::conj(s[static_cast<std::size_t>(2 * b + anc)]);
  m = ((m + m.adjoint()) / 2.0).eval();
  return DensityMatrix(std::move(m));
}

}  // namespace qsdc
