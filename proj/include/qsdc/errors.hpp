#pragma once

#include <stdexcept>
#include <string>

namespace qsdc {

// Decoding found no operator pair consistent with the announced outcomes.
// Signals tampering or transcript corruption.
struct InconsistentTriple : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Stabilizer error rates that map to no valid probability vector.
struct InconsistentRates : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A measurement announcement that admits more than one consistent
// completion; cannot happen over maximally entangled GHZ channels.
struct InferenceAmbiguity : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qsdc
