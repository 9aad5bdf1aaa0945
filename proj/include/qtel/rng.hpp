#pragma once

#include <cstdint>
#include <random>

#include "qtel/state.hpp"

namespace qtel {

// Deterministic random streams.  One stream per trial, derived from
// (seed, trial index) by a splitmix-style hash, so trials are independent and
// a run is reproducible from its seed alone.  The uint64 -> double mapping is
// spelled out here instead of using library distributions, which are not
// pinned down by the standard.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  static RngStream for_trial(std::uint64_t seed, std::uint64_t trial) {
    return RngStream(mix(seed, trial));
  }

  // Uniform in [0, 1), 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller.
  double normal();

 private:
  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t trial) {
    const std::uint64_t golden = 0x9E3779B97F4A7C15ULL;
    return finalize(finalize(seed + golden) ^ (trial * golden + 0xD1B54A32D192ED03ULL));
  }

  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Haar-random pure state: iid complex gaussian amplitudes, normalized.
StateVector random_state(int n_qubits, RngStream& rng);

}  // namespace qtel
