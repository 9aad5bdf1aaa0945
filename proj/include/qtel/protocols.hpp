#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qtel/exchange.hpp"
#include "qtel/observables.hpp"
#include "qtel/rng.hpp"

// Measurement-driven protocols: teleportation of a state, of a general
// single-qubit gate, and of the fixed pi/4 rotations R via pair-spin
// measurements, plus the measured-ZZ phase rotation.
//
// Register layout for the rotation protocols: data on qubit 1, ancilla pair
// on qubits (2, 3).  A cycle measures total spin of (data, 2), then the
// squared z (or x) spin component of the same pair, then total spin of the
// pair holding the other two qubits.  Each cycle ends with R applied
// (success, probability 1/2) or R^dagger applied (erred) on one qubit; an
// erred cycle leaves an entangled leftover pair that seeds the next cycle.

namespace qtel {

enum class PrepOutcome { First, Second };  // |01> / |10> readout (|+->, |-+> for x)
enum class PairKind { Pulsed01, Pulsed10, Singlet, Triplet };
enum class AppliedOp { R, RDagger, Pending };
enum class CorrectionMode { RepeatFlipped, ZzPulse };

std::string to_string(Axis a);
std::string to_string(AppliedOp op);
std::string to_string(PairKind k);
std::string to_string(CorrectionMode m);

struct TranscriptStep {
  enum class Kind { Measurement, Pulse };
  Kind kind = Kind::Measurement;
  MeasurementRecord record;  // measurements
  std::string pulse;         // pulses
  int cycle = 0;             // 0 marks preparation steps
};

struct ProtocolTranscript {
  std::vector<TranscriptStep> steps;
  StateVector final_state;            // full register
  int output_qubit = 0;               // qubit holding the (possibly erred) data
  AppliedOp applied = AppliedOp::Pending;
  bool success = false;
  int cycles = 0;
  int measurement_count = 0;          // pair-spin measurements only
  int prep_measurement_count = 0;     // single-spin readouts during preparation
  PairKind leftover_pair = PairKind::Singlet;  // meaningful while erred
};

// Outcome labels of one cycle's measurements joined with commas, e.g.
// "S=1,0" for the second branch.  Identical across axes.
std::string branch_key(const ProtocolTranscript& t, int cycle);

// Ancilla pair state after cooling to the singlet, a single-spin readout and
// the entangling pulse.  Axis Z uses exchange_unitary(pi/8, phi_z0) on the
// readout state; axis X uses x_subspace_pulse(phi_z0).
StateVector prepared_ancilla_state(Axis axis, double phi_z0, PrepOutcome which);

struct AncillaPrep {
  StateVector state;
  PrepOutcome outcome;
  MeasurementRecord readout;
};
AncillaPrep prepare_entangled_ancilla(Axis axis, double phi_z0, RngStream& rng);

// One full protocol cycle on a fresh register: preparation, then up to three
// pair-spin measurements.  Terminates in one of four equiprobable branches.
ProtocolTranscript teleport_cycle(const StateVector& psi, Axis axis, double phi_z0,
                                  RngStream& rng);

// Runs the next cycle on an erred transcript, with the success/error
// assignment implied by the leftover pair.  Success probability 1/2.
ProtocolTranscript correction_cycle(const ProtocolTranscript& erred, Axis axis,
                                    RngStream& rng);

// Deterministic alternative to a correction cycle: the (pi/2, 0) pulse, equal
// to Z.Z, on (erred qubit, ancilla).  Turns R^dagger psi into R psi up to
// phase.  Requires a pure transverse pulse, so the Heisenberg model (and XXZ
// without a tunable z coupling) is rejected.
StateVector zz_correction(const StateVector& s, int erred_qubit, int ancilla,
                          ExchangeModel model, bool jz_tunable = true);

struct DriverPolicy {
  Axis axis = Axis::Z;
  double phi_z0 = 0.0;
  int max_cycles = 30;
  CorrectionMode correction = CorrectionMode::RepeatFlipped;
  ExchangeModel model = ExchangeModel::XY;
  bool jz_tunable = true;
  void validate() const;
};

struct RotationOutcome {
  ProtocolTranscript transcript;
  StateVector output_state;  // single qubit, extracted from output_qubit
};

// Drives cycles until R lands or max_cycles is exhausted; with ZzPulse
// correction an erred first cycle is fixed by one deterministic pulse.
// An exhausted driver returns with applied = RDagger and success = false.
RotationOutcome teleport_rotation(const StateVector& psi, const DriverPolicy& policy,
                                  RngStream& rng);

// Measured-ZZ phase rotation: ancilla (|0>+|1>)/sqrt(2), pulse
// exp(-i phi/2 Z.Z), sigma^z readout of the ancilla; outcome "1" is repaired
// by a second zz pulse.  Output carries exp(-i phi/2 Z)|psi> up to phase.
struct DgbRun {
  StateVector output;  // single qubit
  ProtocolTranscript transcript;
};
DgbRun dgb_z_rotation(const StateVector& psi, double phi, RngStream& rng);

// One-qubit state teleportation over a shared (|00>+|11>)/sqrt(2) pair:
// Bell readout of (1,2), Pauli correction on 3.  The register ends in
// (bell state) x psi; the extracted output matches psi up to global phase.
struct TeleportRun {
  StateVector output;  // single qubit
  MeasurementRecord bell;
};
TeleportRun state_teleport(const StateVector& psi, RngStream& rng);

// Gate teleportation: resource (I x U sigma^b)|00+11>/sqrt(2) prepared by a
// projective readout of |00>, then state teleportation.  A mismatched Bell
// outcome leaves U sigma^b sigma^a psi and is retried with the conjugated
// correction gate; matched outcomes (probability 1/4 per attempt) finish.
struct GateTeleportRun {
  StateVector output;  // single qubit, U psi up to phase
  int attempts = 0;
  bool first_attempt_matched = false;
};
GateTeleportRun gate_teleport(const StateVector& psi, const Matrix& u, RngStream& rng,
                              int attempt_cap = 100);

// Exact evolution tree for the rotation protocol: `cycles` rounds, erred
// leaves of round k < cycles expanded into round k+1.  Probabilities are
// absolute; leaves carry tag/applied/output annotations.
BranchTree enumerate_protocol_tree(const StateVector& psi, Axis axis, double phi_z0,
                                   int cycles, PrepOutcome prep = PrepOutcome::First);

struct TreeStats {
  double success_mass = 0.0;
  double erred_mass = 0.0;
  double expected_cycles = 0.0;
  double expected_measurements = 0.0;
  double measurements_per_cycle = 0.0;
  int leaf_count = 0;
};
TreeStats tree_stats(const BranchTree& root);

// The four branch probabilities of the first cycle, keyed by branch_key.
std::vector<std::pair<std::string, double>> first_cycle_branches(const BranchTree& root);

}  // namespace qtel
