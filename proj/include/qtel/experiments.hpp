#pragma once

#include <cstdint>
#include <string>

#include "qtel/protocols.hpp"
#include "qtel/report.hpp"
#include "qtel/synthesis.hpp"

// Experiment runners behind the CLI subcommands.  Every exact probability in
// a report comes from branch enumeration of the corresponding protocol; the
// runners never hard-code the expected values.

namespace qtel {

inline constexpr long long kDefaultTrials = 100000;
inline constexpr std::uint64_t kDefaultSeed = 42;

struct RotationConfig {
  Axis axis = Axis::Z;
  long long trials = kDefaultTrials;
  std::uint64_t seed = kDefaultSeed;
  int max_cycles = 30;
  double phi_z0 = 0.0;
  CorrectionMode correction = CorrectionMode::RepeatFlipped;
};
ExperimentReport run_rotation_experiment(const RotationConfig& cfg);

struct DgbConfig {
  double phi = 0.0;
  long long trials = kDefaultTrials;
  std::uint64_t seed = kDefaultSeed;
};
ExperimentReport run_dgb_experiment(const DgbConfig& cfg);

struct TeleportConfig {
  long long trials = kDefaultTrials;
  std::uint64_t seed = kDefaultSeed;
};
ExperimentReport run_teleport_experiment(const TeleportConfig& cfg);

struct GateTeleportConfig {
  Matrix unitary;        // 2x2
  std::string name;      // echo of how the unitary was specified
  long long trials = kDefaultTrials;
  std::uint64_t seed = kDefaultSeed;
  int attempt_cap = 100;
};
ExperimentReport run_gate_teleport_experiment(const GateTeleportConfig& cfg);

struct TreeConfig {
  Axis axis = Axis::Z;
  int cycles = 1;  // <= 12
  double phi_z0 = 0.0;
};
ExperimentReport run_tree_report(const TreeConfig& cfg);

struct CompileConfig {
  Matrix target;     // 2x2
  std::string name;  // echo
  double tolerance = 1e-10;
};
ExperimentReport run_compile_report(const CompileConfig& cfg);

// "I", "X", "Y", "Z", "H", or "rz:PHI" / "ry:PHI" / "rx:PHI" with
// R_a(PHI) = exp(-i PHI/2 sigma^a).  Throws on anything else.
Matrix named_unitary(const std::string& name);

// Four complex entries as "re im" pairs, row-major, whitespace separated.
Matrix load_matrix_file(const std::string& path);

// Fixed generic single-qubit reference state used when a report needs one
// concrete input for enumeration.
StateVector reference_state();

}  // namespace qtel
