// Channel-verification toolkit: GHZ-basis twirling, stabilizer error
// rates, distillation yields and sampled rate estimation.
#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsdc/bases.hpp"
#include "qsdc/density.hpp"
#include "qsdc/errors.hpp"
#include "qsdc/rng.hpp"
#include "qsdc/state.hpp"

namespace qsdc {

using json = nlohmann::json;

// Probability vector over the eight GHZ basis states, indexed by the
// label bits (b0, b1, b2) as 4*b0 + 2*b1 + b2.
struct GhzDiagonal {
  std::array<double, 8> p{};

  static GhzDiagonal from_probabilities(std::array<double, 8> probs) {
    double sum = 0.0;
    for (double& v : probs) {
      if (v < -1e-10) throw std::invalid_argument("GhzDiagonal: negative entry");
      if (v < 0.0) v = 0.0;
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("GhzDiagonal: entries do not sum to 1");
    return {probs};
  }

  double at(GhzBits b) const { return p[static_cast<std::size_t>(ghz_bits_index(b))]; }

  json to_json() const {
    json j;
    for (int idx = 0; idx < 8; ++idx) {
      const GhzBits b = ghz_bits_from_index(idx);
      j["p" + std::to_string(b.p) + std::to_string(b.i1) + std::to_string(b.i2)] =
          p[static_cast<std::size_t>(idx)];
    }
    return j;
  }

  static GhzDiagonal from_json(const json& j) {
    std::array<double, 8> probs{};
    for (int idx = 0; idx < 8; ++idx) {
      const GhzBits b = ghz_bits_from_index(idx);
      const std::string key =
          "p" + std::to_string(b.p) + std::to_string(b.i1) + std::to_string(b.i2);
      probs[static_cast<std::size_t>(idx)] = j.value(key, 0.0);
    }
    return from_probabilities(probs);
  }
};

// The seven non-trivial elements of the group generated by XXX, ZZI, ZIZ,
// in the fixed order
//   s1 = XXX, s2 = ZZI, s3 = ZIZ, s4 = -YYX, s5 = IZZ, s6 = -YXY, s7 = -XYY.
// Element k is the product of the generators named by kElementMasks[k-1]
// (bits packed like the label index), so its eigenvalue on label b is
// (-1)^popcount(mask & b).
inline constexpr std::array<int, 7> kElementMasks = {4, 2, 1, 6, 3, 5, 7};

constexpr int element_sign_on_label(int element, int label_index) {
  const int overlap = kElementMasks[static_cast<std::size_t>(element - 1)] & label_index;
  return (std::popcount(static_cast<unsigned>(overlap)) & 1) ? -1 : 1;
}

namespace detail {

inline Eigen::Matrix2cd pauli2(char letter) {
  Eigen::Matrix2cd m;
  switch (letter) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cplx{0, -1}, cplx{0, 1}, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli2: unknown letter");
  }
  return m;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Matrix8 three_qubit_pauli(char q0, char q1, char q2) {
  return kron(kron(pauli2(q0), pauli2(q1)), pauli2(q2));
}

}  // namespace detail

// Generators S0 = XXX, S1 = ZZI, S2 = ZIZ.
inline const Matrix8& stabilizer_generator(int which) {
  static const std::array<Matrix8, 3> gens = {
      detail::three_qubit_pauli('X', 'X', 'X'), detail::three_qubit_pauli('Z', 'Z', 'I'),
      detail::three_qubit_pauli('Z', 'I', 'Z')};
  return gens.at(static_cast<std::size_t>(which));
}

// Group element for a generator subset mask; carries the composite signs
// (e.g. mask 6 gives -YYX) because it is built as the literal product.
inline Matrix8 stabilizer_group_element(int mask) {
  Matrix8 m = Matrix8::Identity();
  if (mask & 4) m = (m * stabilizer_generator(0)).eval();
  if (mask & 2) m = (m * stabilizer_generator(1)).eval();
  if (mask & 1) m = (m * stabilizer_generator(2)).eval();
  return m;
}

inline const Matrix8& stabilizer_element(int element) {
  static const std::vector<Matrix8> elements = [] {
    std::vector<Matrix8> out;
    for (int k = 1; k <= 7; ++k)
      out.push_back(stabilizer_group_element(kElementMasks[static_cast<std::size_t>(k - 1)]));
    return out;
  }();
  if (element < 1 || element > 7) throw std::out_of_range("stabilizer element index");
  return elements[static_cast<std::size_t>(element - 1)];
}

// Unitary whose columns are the GHZ basis vectors in label-index order.
inline const Matrix8& ghz_basis_matrix() {
  static const Matrix8 u = [] {
    Matrix8 m;
    for (int idx = 0; idx < 8; ++idx) {
      const StateVector v = make_ghz(ghz_from_index(idx));
      for (int row = 0; row < 8; ++row) m(row, idx) = v[static_cast<std::size_t>(row)];
    }
    return m;
  }();
  return u;
}

struct TwirlResult {
  DensityMatrix state;
  GhzDiagonal diagonal;
};

// Randomly applying each generator with probability 1/2 averages the state
// over the eight group conjugations, which erases every GHZ-basis
// off-diagonal term and keeps the diagonal untouched.
inline TwirlResult twirl(const DensityMatrix& rho) {
  Matrix8 avg = Matrix8::Zero();
  for (int mask = 0; mask < 8; ++mask) {
    const Matrix8 g = stabilizer_group_element(mask);
    avg += g * rho.matrix() * g.adjoint();
  }
  avg /= 8.0;
  avg = ((avg + avg.adjoint()) / 2.0).eval();

  const Matrix8 in_ghz_basis = ghz_basis_matrix().adjoint() * avg * ghz_basis_matrix();
  std::array<double, 8> probs{};
  for (int idx = 0; idx < 8; ++idx) probs[static_cast<std::size_t>(idx)] = in_ghz_basis(idx, idx).real();
  return {DensityMatrix(avg), GhzDiagonal::from_probabilities(probs)};
}

// GHZ-basis diagonal of an arbitrary density matrix.
inline GhzDiagonal ghz_diagonal_of(const DensityMatrix& rho) {
  const Matrix8 in_basis = ghz_basis_matrix().adjoint() * rho.matrix() * ghz_basis_matrix();
  std::array<double, 8> probs{};
  for (int idx = 0; idx < 8; ++idx) probs[static_cast<std::size_t>(idx)] = in_basis(idx, idx).real();
  return GhzDiagonal::from_probabilities(probs);
}

// Error rates of the seven non-trivial stabilizer group elements.
struct StabilizerRates {
  std::array<double, 7> s{};

  json to_json() const {
    json j;
    for (int k = 1; k <= 7; ++k)
      j["s" + std::to_string(k)] = s[static_cast<std::size_t>(k - 1)];
    return j;
  }
};

inline StabilizerRates rates_from_diagonal(const GhzDiagonal& d) {
  StabilizerRates r;
  for (int k = 1; k <= 7; ++k) {
    double rate = 0.0;
    for (int idx = 0; idx < 8; ++idx)
      if (element_sign_on_label(k, idx) < 0) rate += d.p[static_cast<std::size_t>(idx)];
    r.s[static_cast<std::size_t>(k - 1)] = rate;
  }
  return r;
}

// Closed-form inverse of rates_from_diagonal.
inline GhzDiagonal diagonal_from_rates(const StabilizerRates& r) {
  const auto [s1, s2, s3, s4, s5, s6, s7] = r.s;
  std::array<double, 8> p{};
  const auto set = [&p](int b0, int b1, int b2, double value) {
    p[static_cast<std::size_t>(ghz_bits_index(GhzBits{b0, b1, b2}))] = value;
  };
  set(0, 0, 0, 1.0 - 0.25 * (s1 + s2 + s3 + s4 + s5 + s6 + s7));
  set(1, 0, 0, 0.25 * (s1 - s2 - s3 + s4 - s5 + s6 + s7));
  set(0, 1, 1, 0.25 * (-s1 + s2 + s3 + s4 - s5 + s6 - s7));
  set(1, 1, 1, 0.25 * (s1 + s2 + s3 - s4 - s5 - s6 + s7));
  set(0, 1, 0, 0.25 * (-s1 + s2 - s3 + s4 + s5 - s6 + s7));
  set(1, 1, 0, 0.25 * (s1 + s2 - s3 - s4 + s5 + s6 - s7));
  set(0, 0, 1, 0.25 * (-s1 - s2 + s3 - s4 + s5 + s6 + s7));
  set(1, 0, 1, 0.25 * (s1 - s2 + s3 + s4 + s5 - s6 - s7));

  for (double& v : p) {
    if (v < -1e-10 || v > 1.0 + 1e-10)
      throw InconsistentRates("rates map to an entry outside [0, 1]");
    v = std::clamp(v, 0.0, 1.0);
  }
  return GhzDiagonal::from_probabilities(p);
}

namespace detail {

inline double plog2p(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

}  // namespace detail

struct YieldReport {
  double h_b0 = 0.0;           // phase-bit entropy
  double h_b1 = 0.0;           // first amplitude-bit entropy
  double h_b2 = 0.0;           // second amplitude-bit entropy
  double h_b2_given_b1 = 0.0;  // H(b2 | b1)
  double mi_b0_b12 = 0.0;      // I(b0 ; b1 b2)
  double d_h = 0.0;            // hashing yield per input state
  double d_h_prime = 0.0;      // improved hashing yield

  json to_json() const {
    return json{{"H_b0", h_b0},
                {"H_b1", h_b1},
                {"H_b2", h_b2},
                {"H_b2_given_b1", h_b2_given_b1},
                {"I_b0_b1b2", mi_b0_b12},
                {"D_h", d_h},
                {"D_h_prime", d_h_prime},
                {"verdict", d_h_prime > 0.0 ? "distill" : "discard"}};
  }
};

// Hashing yields of the label distribution:
//   D_h  = 1 - max_{j>0} H(b_j) - H(b_0)
//   D_h' = 1 - max{H(b_1), H(b_2|b_1)} - H(b_0) + I(b_0; b_1 b_2)
inline YieldReport yields(const GhzDiagonal& d) {
  double q_b0 = 0.0, q_b1 = 0.0, q_b2 = 0.0;
  std::array<double, 4> joint_b1b2{};
  double h_full = 0.0;
  for (int idx = 0; idx < 8; ++idx) {
    const GhzBits b = ghz_bits_from_index(idx);
    const double pr = d.p[static_cast<std::size_t>(idx)];
    if (b.p == 1) q_b0 += pr;
    if (b.i1 == 1) q_b1 += pr;
    if (b.i2 == 1) q_b2 += pr;
    joint_b1b2[static_cast<std::size_t>(2 * b.i1 + b.i2)] += pr;
    h_full += detail::plog2p(pr);
  }
  const auto h_binary = [](double q) { return detail::plog2p(q) + detail::plog2p(1.0 - q); };

  YieldReport r;
  r.h_b0 = h_binary(q_b0);
  r.h_b1 = h_binary(q_b1);
  r.h_b2 = h_binary(q_b2);
  double h_b1b2 = 0.0;
  for (double pr : joint_b1b2) h_b1b2 += detail::plog2p(pr);
  r.h_b2_given_b1 = h_b1b2 - r.h_b1;
  r.mi_b0_b12 = r.h_b0 + h_b1b2 - h_full;
  r.d_h = 1.0 - std::max(r.h_b1, r.h_b2) - r.h_b0;
  r.d_h_prime = 1.0 - std::max(r.h_b1, r.h_b2_given_b1) - r.h_b0 + r.mi_b0_b12;
  return r;
}

struct Verdict {
  bool distill = false;
  std::int64_t count = 0;  // distillable states out of the ensemble
  double d_h = 0.0;
  double d_h_prime = 0.0;

  json to_json() const {
    json j{{"verdict", distill ? "distill" : "discard"}, {"D_h", d_h}, {"D_h_prime", d_h_prime}};
    if (distill) j["count"] = count;
    return j;
  }
};

// Distill when the improved yield is positive, otherwise discard the
// channel and rebuild it. Both yields are reported.
inline Verdict channel_verdict(const GhzDiagonal& d, std::int64_t ensemble_size) {
  if (ensemble_size < 0) throw std::invalid_argument("channel_verdict: negative ensemble");
  const YieldReport y = yields(d);
  Verdict v;
  v.d_h = y.d_h;
  v.d_h_prime = y.d_h_prime;
  v.distill = y.d_h_prime > 0.0;
  v.count = v.distill ? static_cast<std::int64_t>(
                            std::floor(static_cast<double>(ensemble_size) * y.d_h_prime))
                      : 0;
  return v;
}

namespace detail {

// Local measurement plan for one stabilizer element: which basis each
// party measures and the sign relating the outcome product to the
// element's eigenvalue (XZ = -iY, and Y letters come in pairs here).
struct ElementPlan {
  std::array<char, 3> letters;
  int sign;
};

inline ElementPlan element_plan(int element) {
  const int mask = kElementMasks[static_cast<std::size_t>(element - 1)];
  const bool has_s0 = mask & 4, has_s1 = mask & 2, has_s2 = mask & 1;
  const std::array<int, 3> x_pow = {has_s0, has_s0, has_s0};
  const std::array<int, 3> z_pow = {static_cast<int>(has_s1) ^ static_cast<int>(has_s2),
                                    static_cast<int>(has_s1), static_cast<int>(has_s2)};
  ElementPlan plan{};
  int xz_count = 0;
  for (int q = 0; q < 3; ++q) {
    if (x_pow[static_cast<std::size_t>(q)] && z_pow[static_cast<std::size_t>(q)]) {
      plan.letters[static_cast<std::size_t>(q)] = 'Y';
      ++xz_count;
    } else if (x_pow[static_cast<std::size_t>(q)]) {
      plan.letters[static_cast<std::size_t>(q)] = 'X';
    } else if (z_pow[static_cast<std::size_t>(q)]) {
      plan.letters[static_cast<std::size_t>(q)] = 'Z';
    } else {
      plan.letters[static_cast<std::size_t>(q)] = 'I';
    }
  }
  plan.sign = (xz_count % 4 == 2) ? -1 : 1;
  return plan;
}

// Joint distribution of the three local ±1 outcomes (I letters always +1).
inline std::array<double, 8> local_outcome_distribution(const DensityMatrix& rho, int element) {
  const ElementPlan plan = element_plan(element);
  std::array<double, 8> probs{};
  for (int bits = 0; bits < 8; ++bits) {
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Identity(1, 1);
    bool possible = true;
    for (int q = 0; q < 3 && possible; ++q) {
      const int outcome_sign = (bits >> (2 - q)) & 1 ? -1 : 1;  // bit set = outcome -1
      const char letter = plan.letters[static_cast<std::size_t>(q)];
      if (letter == 'I') {
        if (outcome_sign < 0) possible = false;  // nothing measured, outcome fixed +1
        proj = kron(proj, pauli2('I'));
      } else {
        const Eigen::Matrix2cd pi =
            (pauli2('I') + static_cast<double>(outcome_sign) * pauli2(letter)) / 2.0;
        proj = kron(proj, pi);
      }
    }
    probs[static_cast<std::size_t>(bits)] =
        possible ? std::max(0.0, (rho.matrix() * proj).trace().real()) : 0.0;
  }
  return probs;
}

}  // namespace detail

// One copy consumed: each party measures its letter of the element and the
// signed product of outcomes gives the element's value.
inline int measure_element_once(const DensityMatrix& rho, int element, Rng& rng) {
  const auto probs = detail::local_outcome_distribution(rho, element);
  const auto bits = static_cast<int>(rng.pick(probs));
  const int product = (std::popcount(static_cast<unsigned>(bits)) & 1) ? -1 : 1;
  return detail::element_plan(element).sign * product;
}

struct EstimatedRates {
  StabilizerRates rates;
  std::array<double, 7> half_width{};  // binomial standard error per element
  std::int64_t shots_per_element = 0;

  json to_json() const {
    json j = rates.to_json();
    json hw;
    for (int k = 1; k <= 7; ++k)
      hw["s" + std::to_string(k)] = half_width[static_cast<std::size_t>(k - 1)];
    return json{{"shots_per_element", shots_per_element}, {"rates", j}, {"stderr", hw}};
  }
};

// Empirical -1 frequency of each element over fresh copies of rho.
inline EstimatedRates estimate_rates(const DensityMatrix& rho, std::int64_t shots, Rng& rng) {
  if (shots < 1) throw std::invalid_argument("estimate_rates: shots must be >= 1");
  EstimatedRates est;
  est.shots_per_element = shots;
  for (int k = 1; k <= 7; ++k) {
    const auto probs = detail::local_outcome_distribution(rho, k);
    const int sign = detail::element_plan(k).sign;
    std::int64_t errors = 0;
    for (std::int64_t shot = 0; shot < shots; ++shot) {
      const auto bits = static_cast<int>(rng.pick(probs));
      const int product = (std::popcount(static_cast<unsigned>(bits)) & 1) ? -1 : 1;
      if (sign * product < 0) ++errors;
    }
    const double rate = static_cast<double>(errors) / static_cast<double>(shots);
    est.rates.s[static_cast<std::size_t>(k - 1)] = rate;
    est.half_width[static_cast<std::size_t>(k - 1)] =
        std::sqrt(rate * (1.0 - rate) / static_cast<double>(shots));
  }
  return est;
}

}  // namespace qsdc
