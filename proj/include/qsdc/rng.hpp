// Seeded random source. All sampling in the library goes through this
// wrapper so that results depend only on the seed, not on the standard
// library's distribution implementations.
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace qsdc {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  int bit() { return static_cast<int>(engine_() >> 63); }

  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: empty range");
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(bound));
  }

  // Index sampled in proportion to the given non-negative weights.
  std::size_t pick(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double u = uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
  }

  // Independent stream for a numbered trial; splitmix64 over (seed, stream)
  // so streams never collide for distinct counters.
  static Rng derive(std::uint64_t master_seed, std::uint64_t stream) {
    std::uint64_t z = master_seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qsdc
