#include "qtel/protocols.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qtel {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt_pulse(int i, int j, double phi_perp, double phi_z) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "exchange(%.9g, %.9g) on (%d,%d)", phi_perp, phi_z, i, j);
  return buf;
}

// The register is always (data, mid, bystander) with mid = 2; the data slot
// swaps between 1 and 3 as errors move the payload across the chain.
struct CycleGeometry {
  int data;
  int mid;
  int far;
};

CycleGeometry geometry_for_output(int output_qubit) {
  return output_qubit == 3 ? CycleGeometry{3, 2, 1} : CycleGeometry{1, 2, 3};
}

// Which of the four branch outcomes carry R vs R^dagger depends only on the
// kind of pair feeding the cycle.  `alice` flips the two branches decided by
// the (data, mid) measurements, `bob` the two decided by the far pair.
struct FlipPattern {
  bool alice;
  bool bob;
};

FlipPattern pattern_for(PairKind kind) {
  switch (kind) {
    case PairKind::Pulsed01: return {false, false};
    case PairKind::Pulsed10: return {true, true};
    case PairKind::Singlet:  return {true, false};
    case PairKind::Triplet:  return {false, true};
  }
  throw std::logic_error("unknown pair kind");
}

ProjectiveObservable component_sq(Axis axis, int i, int j) {
  return axis == Axis::Z ? sz_sq(i, j) : sx_sq(i, j);
}

void record_measurement(ProtocolTranscript& t, const Branch& b, int cycle) {
  t.steps.push_back({TranscriptStep::Kind::Measurement, b.record, "", cycle});
  t.final_state = b.state;
  ++t.measurement_count;
}

void finish_cycle(ProtocolTranscript& t, int cycle, int output_qubit, bool r_applied,
                  PairKind leftover) {
  t.output_qubit = output_qubit;
  t.applied = r_applied ? AppliedOp::R : AppliedOp::RDagger;
  t.success = r_applied;
  t.leftover_pair = leftover;
  t.cycles = cycle;
}

// One cycle: up to three pair measurements, four equiprobable terminations.
// An S=0 or "component 0" outcome hands the data to the far qubit; otherwise
// the far-pair measurement hands it back to the data qubit.
void run_cycle(ProtocolTranscript& t, Axis axis, const CycleGeometry& g, PairKind kind,
               RngStream& rng) {
  const int cycle = t.cycles + 1;
  const FlipPattern flip = pattern_for(kind);

  Branch b1 = measure_sample(t.final_state, total_spin_sq(g.data, g.mid), rng);
  record_measurement(t, b1, cycle);
  if (b1.record.outcome == "S=0") {
    finish_cycle(t, cycle, g.far, !flip.alice, PairKind::Singlet);
    return;
  }

  Branch b2 = measure_sample(t.final_state, component_sq(axis, g.data, g.mid), rng);
  record_measurement(t, b2, cycle);
  if (b2.record.outcome == "0") {
    finish_cycle(t, cycle, g.far, flip.alice, PairKind::Triplet);
    return;
  }

  Branch b3 = measure_sample(t.final_state, total_spin_sq(g.mid, g.far), rng);
  record_measurement(t, b3, cycle);
  if (b3.record.outcome == "S=0")
    finish_cycle(t, cycle, g.data, flip.bob, PairKind::Singlet);
  else
    finish_cycle(t, cycle, g.data, !flip.bob, PairKind::Triplet);
}

ExchangePulse prep_pulse(Axis axis, double phi_z0, int i, int j) {
  return axis == Axis::Z ? ExchangePulse(i, j, kPi / 8, phi_z0)
                         : ExchangePulse(i, j, kPi / 4 - phi_z0, phi_z0);
}

void check_single_qubit(const StateVector& psi, const char* who) {
  if (psi.n_qubits() != 1)
    throw std::invalid_argument(std::string(who) + ": input must be a single qubit");
}

}  // namespace

std::string to_string(Axis a) { return a == Axis::Z ? "z" : "x"; }

std::string to_string(AppliedOp op) {
  switch (op) {
    case AppliedOp::R: return "R";
    case AppliedOp::RDagger: return "R_dagger";
    case AppliedOp::Pending: return "pending";
  }
  throw std::logic_error("unknown applied op");
}

std::string to_string(PairKind k) {
  switch (k) {
    case PairKind::Pulsed01: return "pulsed01";
    case PairKind::Pulsed10: return "pulsed10";
    case PairKind::Singlet: return "singlet";
    case PairKind::Triplet: return "triplet0";
  }
  throw std::logic_error("unknown pair kind");
}

std::string to_string(CorrectionMode m) {
  return m == CorrectionMode::RepeatFlipped ? "repeat" : "zz";
}

std::string branch_key(const ProtocolTranscript& t, int cycle) {
  std::string key;
  for (const auto& step : t.steps) {
    if (step.kind != TranscriptStep::Kind::Measurement || step.cycle != cycle) continue;
    if (!key.empty()) key += ",";
    key += step.record.outcome;
  }
  return key;
}

StateVector prepared_ancilla_state(Axis axis, double phi_z0, PrepOutcome which) {
  const std::string label = axis == Axis::Z ? (which == PrepOutcome::First ? "01" : "10")
                                            : (which == PrepOutcome::First ? "+-" : "-+");
  const ExchangePulse p = prep_pulse(axis, phi_z0, 1, 2);
  return apply_unitary(StateVector::basis(label), {1, 2}, exchange_unitary(p));
}

AncillaPrep prepare_entangled_ancilla(Axis axis, double phi_z0, RngStream& rng) {
  const StateVector cooled = cool_to_singlet(ExchangeCouplings(1.0, 0.0, ExchangeModel::XY));
  Branch readout =
      measure_sample(cooled, axis == Axis::Z ? pauli_z(1) : pauli_x(1), rng);
  // The pair sits on register qubits (2, 3); relabel the local readout.
  readout.record.observable =
      axis == Axis::Z ? std::string("sigma_z(2)") : std::string("sigma_x(2)");
  const bool first =
      readout.record.outcome == "0" || readout.record.outcome == "+";
  const ExchangePulse p = prep_pulse(axis, phi_z0, 1, 2);
  return AncillaPrep{apply_unitary(readout.state, {1, 2}, exchange_unitary(p)),
                     first ? PrepOutcome::First : PrepOutcome::Second, readout.record};
}

ProtocolTranscript teleport_cycle(const StateVector& psi, Axis axis, double phi_z0,
                                  RngStream& rng) {
  check_single_qubit(psi, "teleport_cycle");
  ProtocolTranscript t;
  const AncillaPrep prep = prepare_entangled_ancilla(axis, phi_z0, rng);
  t.steps.push_back({TranscriptStep::Kind::Measurement, prep.readout, "", 0});
  t.prep_measurement_count = 1;
  const ExchangePulse p = prep_pulse(axis, phi_z0, 2, 3);
  t.steps.push_back({TranscriptStep::Kind::Pulse, {}, fmt_pulse(2, 3, p.phi_perp, p.phi_z), 0});
  t.final_state = tensor(psi, prep.state);
  run_cycle(t, axis, CycleGeometry{1, 2, 3},
            prep.outcome == PrepOutcome::First ? PairKind::Pulsed01 : PairKind::Pulsed10,
            rng);
  return t;
}

ProtocolTranscript correction_cycle(const ProtocolTranscript& erred, Axis axis,
                                    RngStream& rng) {
  if (erred.applied != AppliedOp::RDagger)
    throw std::invalid_argument("correction_cycle: transcript is not in the erred state");
  ProtocolTranscript t = erred;
  run_cycle(t, axis, geometry_for_output(erred.output_qubit), erred.leftover_pair, rng);
  return t;
}

StateVector zz_correction(const StateVector& s, int erred_qubit, int ancilla,
                          ExchangeModel model, bool jz_tunable) {
  if (model == ExchangeModel::Heisenberg || (model == ExchangeModel::XXZ && !jz_tunable))
    throw std::domain_error(
        "zz_correction: the (pi/2, 0) pulse needs the z coupling off, which this "
        "model cannot arrange");
  return apply_unitary(s, {erred_qubit, ancilla}, exchange_unitary(kPi / 2, 0.0));
}

void DriverPolicy::validate() const {
  if (max_cycles < 1) throw std::invalid_argument("DriverPolicy: max_cycles must be >= 1");
  if (correction == CorrectionMode::ZzPulse) {
    if (axis != Axis::Z)
      throw std::invalid_argument("DriverPolicy: the zz pulse correction fixes only z "
                                  "rotations; use repeat for the x axis");
    if (model == ExchangeModel::Heisenberg || (model == ExchangeModel::XXZ && !jz_tunable))
      throw std::invalid_argument("DriverPolicy: zz pulse correction unavailable for "
                                  "this coupling model");
  }
}

RotationOutcome teleport_rotation(const StateVector& psi, const DriverPolicy& policy,
                                  RngStream& rng) {
  policy.validate();
  ProtocolTranscript t = teleport_cycle(psi, policy.axis, policy.phi_z0, rng);
  if (!t.success && policy.correction == CorrectionMode::ZzPulse) {
    t.final_state = zz_correction(t.final_state, t.output_qubit, 2, policy.model,
                                  policy.jz_tunable);
    t.steps.push_back({TranscriptStep::Kind::Pulse, {},
                       fmt_pulse(t.output_qubit, 2, kPi / 2, 0.0), t.cycles});
    t.applied = AppliedOp::R;
    t.success = true;
  } else {
    while (!t.success && t.cycles < policy.max_cycles)
      t = correction_cycle(t, policy.axis, rng);
  }
  return RotationOutcome{t, extract_single_qubit(t.final_state, t.output_qubit)};
}

DgbRun dgb_z_rotation(const StateVector& psi, double phi, RngStream& rng) {
  check_single_qubit(psi, "dgb_z_rotation");
  ProtocolTranscript t;
  t.final_state = apply_unitary(tensor(psi, ket_plus()), {1, 2}, zz_phase_gate(phi / 2));
  t.steps.push_back({TranscriptStep::Kind::Pulse, {}, fmt_pulse(1, 2, 0.0, phi / 2), 0});
  Branch readout = measure_sample(t.final_state, pauli_z(2), rng);
  record_measurement(t, readout, 1);
  if (readout.record.outcome == "1") {
    t.final_state = apply_unitary(t.final_state, {1, 2}, zz_phase_gate(kPi - phi));
    t.steps.push_back({TranscriptStep::Kind::Pulse, {}, fmt_pulse(1, 2, 0.0, kPi - phi), 1});
  }
  finish_cycle(t, 1, 1, true, PairKind::Singlet);
  return DgbRun{extract_single_qubit(t.final_state, 1), t};
}

TeleportRun state_teleport(const StateVector& psi, RngStream& rng) {
  check_single_qubit(psi, "state_teleport");
  const StateVector phi_plus = StateVector::from_amplitudes(2, {1, 0, 0, 1});
  const StateVector reg = tensor(psi, phi_plus);
  Branch bell = measure_sample(reg, bell_basis(1, 2), rng);
  StateVector corrected = bell.state;
  if (bell.record.outcome != "I") {
    const char axis = static_cast<char>(bell.record.outcome[0] + ('a' - 'A'));
    corrected = apply_unitary(corrected, {3}, pauli(axis));
  }
  return TeleportRun{extract_single_qubit(corrected, 3), bell.record};
}

GateTeleportRun gate_teleport(const StateVector& psi, const Matrix& u, RngStream& rng,
                              int attempt_cap) {
  check_single_qubit(psi, "gate_teleport");
  if (u.dim() != 2 || !u.is_unitary(kCompareTol))
    throw std::invalid_argument("gate_teleport: the gate must be a 2x2 unitary");
  const StateVector phi_plus = StateVector::from_amplitudes(2, {1, 0, 0, 1});
  const char axes[4] = {'i', 'x', 'y', 'z'};
  const std::string names[4] = {"I", "X", "Y", "Z"};

  GateTeleportRun run;
  Matrix v = u;          // gate still owed to the data qubit
  StateVector cur = psi;
  for (int attempt = 1; attempt <= attempt_cap; ++attempt) {
    run.attempts = attempt;

    // Offline resource: project |00> onto the orthonormal basis
    // (I x V sigma^b)|00+11>/sqrt(2).  The readout label b is kept.
    std::vector<StateVector> resource;
    for (int b = 0; b < 4; ++b)
      resource.push_back(apply_unitary(phi_plus, {2}, v * pauli(axes[b])));
    Branch prep = measure_sample(
        StateVector::basis("00"),
        custom_basis("resource(1,2)", {1, 2}, resource, {names[0], names[1], names[2], names[3]}),
        rng);
    int beta = 0;
    while (names[beta] != prep.record.outcome) ++beta;

    Branch bell = measure_sample(tensor(cur, prep.state), bell_basis(1, 2), rng);
    int alpha = 0;
    while (names[alpha] != bell.record.outcome) ++alpha;

    StateVector handed = extract_single_qubit(bell.state, 3);
    if (alpha == beta) {
      // sigma^b sigma^a = I, so the data qubit holds V psi already.
      if (attempt == 1) run.first_attempt_matched = true;
      run.output = handed;
      return run;
    }
    // Mismatch leaves V sigma^b sigma^a psi; owe the conjugated fix instead.
    cur = handed;
    v = v * pauli(axes[beta]) * pauli(axes[alpha]) * v.adjoint();
    // The conjugation feeds v back into itself, so rounding drift compounds
    // geometrically over a long mismatch streak.  Snap back to the nearest
    // unitary (Gram-Schmidt on the two columns) so it cannot accumulate.
    {
      complexd a0 = v.at(0, 0), a1 = v.at(1, 0);
      double n0 = std::sqrt(std::norm(a0) + std::norm(a1));
      a0 /= n0;
      a1 /= n0;
      complexd b0 = v.at(0, 1), b1 = v.at(1, 1);
      const complexd overlap = std::conj(a0) * b0 + std::conj(a1) * b1;
      b0 -= overlap * a0;
      b1 -= overlap * a1;
      double n1 = std::sqrt(std::norm(b0) + std::norm(b1));
      v = Matrix(2, {a0, b0 / n1, a1, b1 / n1});
    }
  }
  throw std::runtime_error("gate_teleport: attempt cap exhausted");
}

namespace {

void annotate_leaf(BranchNode& n, int cycle, int output_qubit, bool r_applied) {
  n.tag = r_applied ? "success" : "erred";
  n.output_qubit = output_qubit;
  n.applied = r_applied ? "R" : "R_dagger";
  n.cycle = cycle;
}

void expand_cycle(BranchNode& node, Axis axis, const CycleGeometry& g, PairKind kind,
                  int cycle, int max_cycles);

void terminate_or_recurse(BranchNode& n, Axis axis, int cycle, int max_cycles,
                          int output_qubit, bool r_applied, PairKind leftover) {
  annotate_leaf(n, cycle, output_qubit, r_applied);
  if (!r_applied && cycle < max_cycles)
    expand_cycle(n, axis, geometry_for_output(output_qubit), leftover, cycle + 1,
                 max_cycles);
}

void add_children(BranchNode& parent, const ProjectiveObservable& obs) {
  for (Branch& b : measure_branches(parent.state, obs)) {
    BranchNode child;
    child.state = b.state;
    child.probability = parent.probability * b.record.probability;
    child.record = b.record;
    child.measurements = parent.measurements + 1;
    parent.children.push_back(std::move(child));
  }
}

void expand_cycle(BranchNode& node, Axis axis, const CycleGeometry& g, PairKind kind,
                  int cycle, int max_cycles) {
  const FlipPattern flip = pattern_for(kind);
  add_children(node, total_spin_sq(g.data, g.mid));
  for (BranchNode& c1 : node.children) {
    if (c1.record.outcome == "S=0") {
      terminate_or_recurse(c1, axis, cycle, max_cycles, g.far, !flip.alice,
                           PairKind::Singlet);
      continue;
    }
    add_children(c1, component_sq(axis, g.data, g.mid));
    for (BranchNode& c2 : c1.children) {
      if (c2.record.outcome == "0") {
        terminate_or_recurse(c2, axis, cycle, max_cycles, g.far, flip.alice,
                             PairKind::Triplet);
        continue;
      }
      add_children(c2, total_spin_sq(g.mid, g.far));
      for (BranchNode& c3 : c2.children) {
        const bool far_singlet = c3.record.outcome == "S=0";
        terminate_or_recurse(c3, axis, cycle, max_cycles, g.data,
                             far_singlet ? flip.bob : !flip.bob,
                             far_singlet ? PairKind::Singlet : PairKind::Triplet);
      }
    }
  }
}

void visit_leaves(const BranchNode& n, TreeStats& stats) {
  if (n.is_leaf()) {
    ++stats.leaf_count;
    if (n.tag == "success") {
      stats.success_mass += n.probability;
    } else {
      stats.erred_mass += n.probability;
    }
    stats.expected_cycles += n.probability * n.cycle;
    stats.expected_measurements += n.probability * n.measurements;
    return;
  }
  for (const BranchNode& c : n.children) visit_leaves(c, stats);
}

}  // namespace

BranchTree enumerate_protocol_tree(const StateVector& psi, Axis axis, double phi_z0,
                                   int cycles, PrepOutcome prep) {
  check_single_qubit(psi, "enumerate_protocol_tree");
  if (cycles < 1) throw std::invalid_argument("enumerate_protocol_tree: cycles must be >= 1");
  BranchNode root;
  root.state = tensor(psi, prepared_ancilla_state(axis, phi_z0, prep));
  root.probability = 1.0;
  expand_cycle(root, axis, CycleGeometry{1, 2, 3},
               prep == PrepOutcome::First ? PairKind::Pulsed01 : PairKind::Pulsed10, 1,
               cycles);
  return root;
}

TreeStats tree_stats(const BranchTree& root) {
  TreeStats stats;
  visit_leaves(root, stats);
  if (stats.expected_cycles > 0.0)
    stats.measurements_per_cycle = stats.expected_measurements / stats.expected_cycles;
  return stats;
}

std::vector<std::pair<std::string, double>> first_cycle_branches(const BranchTree& root) {
  if (root.children.size() != 2)
    throw std::invalid_argument("first_cycle_branches: malformed tree");
  std::vector<std::pair<std::string, double>> out;
  const BranchNode& s0 = root.children[0];
  out.emplace_back(s0.record.outcome, s0.probability);
  const BranchNode& s1 = root.children[1];
  const BranchNode& z0 = s1.children[0];
  out.emplace_back(s1.record.outcome + "," + z0.record.outcome, z0.probability);
  const BranchNode& z1 = s1.children[1];
  for (const BranchNode& b : z1.children)
    out.emplace_back(s1.record.outcome + "," + z1.record.outcome + "," + b.record.outcome,
                     b.probability);
  return out;
}

}  // namespace qtel
