#include "qtel/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qtel {

namespace {

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

template <typename F>
void for_each_leaf(const BranchNode& n, F&& f) {
  if (n.is_leaf()) {
    f(n);
    return;
  }
  for (const BranchNode& c : n.children) for_each_leaf(c, f);
}

// Capped-geometric cycle count: success probability p per cycle, hard stop
// after m cycles.  Returns mean and variance.
struct CappedGeometric {
  double mean = 0.0;
  double variance = 0.0;
  double success_probability = 0.0;
};

CappedGeometric capped_geometric(double p, int m) {
  CappedGeometric g;
  const double q = 1.0 - p;
  double e1 = 0.0;
  double e2 = 0.0;
  for (int k = 1; k <= m; ++k) {
    const double pk = k < m ? p * std::pow(q, k - 1) : std::pow(q, m - 1);
    e1 += k * pk;
    e2 += static_cast<double>(k) * k * pk;
  }
  g.mean = e1;
  g.variance = e2 - e1 * e1;
  g.success_probability = 1.0 - std::pow(q, m);
  return g;
}

struct FidelityStats {
  double min = 1.0;
  double sum = 0.0;
  long long n = 0;
  void add(double f) {
    if (f < min) min = f;
    sum += f;
    ++n;
  }
  void commit(ExperimentReport& r) const {
    r.fidelity_min = n > 0 ? min : 1.0;
    r.fidelity_mean = n > 0 ? sum / n : 1.0;
  }
};

double overlap(const StateVector& a, const StateVector& b) { return std::abs(inner(a, b)); }

Matrix axis_rotation(char axis, double phi) {
  const double c = std::cos(phi / 2);
  const double s = std::sin(phi / 2);
  switch (axis) {
    case 'z':
      return Matrix(2, {std::polar(1.0, -phi / 2), 0.0, 0.0, std::polar(1.0, phi / 2)});
    case 'y':
      return Matrix(2, {c, -s, s, c});
    case 'x':
      return Matrix(2, {c, complexd(0, -s), complexd(0, -s), c});
    default:
      throw std::invalid_argument("axis_rotation: unknown axis");
  }
}

void check_gate(const Matrix& u, const char* who) {
  if (u.dim() != 2 || !u.is_unitary(kCompareTol))
    throw std::invalid_argument(std::string(who) + ": need a 2x2 unitary");
}

}  // namespace

StateVector reference_state() {
  return StateVector::from_amplitudes(
      1, {std::cos(0.3), std::sin(0.3) * std::polar(1.0, 0.4)});
}

ExperimentReport run_rotation_experiment(const RotationConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("rotation experiment: trials must be >= 1");
  DriverPolicy policy;
  policy.axis = cfg.axis;
  policy.phi_z0 = cfg.phi_z0;
  policy.max_cycles = cfg.max_cycles;
  policy.correction = cfg.correction;
  policy.validate();

  ExperimentReport r;
  r.command = cfg.axis == Axis::Z ? "rz" : "rx";
  r.seed = cfg.seed;
  r.trials = cfg.trials;
  r.wall_clock = wall_clock_now();
  r.parameters = {{"axis", to_string(cfg.axis)},
                  {"max_cycles", std::to_string(cfg.max_cycles)},
                  {"phi_z0", fmt_num(cfg.phi_z0)},
                  {"correction", to_string(cfg.correction)}};

  // Exact single-cycle structure, from enumeration.
  const BranchTree tree = enumerate_protocol_tree(reference_state(), cfg.axis, cfg.phi_z0, 1);
  const auto expected_branches = first_cycle_branches(tree);
  const double p_cycle = tree_stats(tree).success_mass;

  const bool deterministic_fix = cfg.correction == CorrectionMode::ZzPulse;
  CappedGeometric cyc;
  if (deterministic_fix) {
    cyc.mean = 1.0;
    cyc.variance = 0.0;
    cyc.success_probability = 1.0;
  } else {
    cyc = capped_geometric(p_cycle, cfg.max_cycles);
  }

  std::vector<long long> counts(expected_branches.size(), 0);
  long long successes = 0;
  double cycles_sum = 0.0;
  double meas_sum = 0.0;
  double meas_sq_sum = 0.0;
  FidelityStats fid;

  for (long long t = 0; t < cfg.trials; ++t) {
    RngStream rng = RngStream::for_trial(cfg.seed, static_cast<std::uint64_t>(t));
    const StateVector psi = random_state(1, rng);
    const RotationOutcome out = teleport_rotation(psi, policy, rng);

    const std::string key = branch_key(out.transcript, 1);
    bool known = false;
    for (std::size_t i = 0; i < expected_branches.size(); ++i)
      if (expected_branches[i].first == key) {
        ++counts[i];
        known = true;
        break;
      }
    if (!known) throw std::logic_error("rotation experiment: unexpected branch key " + key);

    successes += out.transcript.success ? 1 : 0;
    cycles_sum += out.transcript.cycles;
    meas_sum += out.transcript.measurement_count;
    meas_sq_sum += static_cast<double>(out.transcript.measurement_count) *
                   out.transcript.measurement_count;

    const Matrix gate = r_gate(cfg.axis, out.transcript.applied == AppliedOp::RDagger);
    fid.add(overlap(apply_unitary(psi, {1}, gate), out.output_state));
  }

  for (std::size_t i = 0; i < expected_branches.size(); ++i)
    r.branches.push_back(branch_count(expected_branches[i].first, counts[i], cfg.trials,
                                      expected_branches[i].second));

  const double n = static_cast<double>(cfg.trials);
  const double sp = cyc.success_probability;
  r.checks.push_back(statistical_check("success_fraction", successes / n, sp,
                                       std::sqrt(sp * (1.0 - sp) / n)));
  r.checks.push_back(statistical_check("mean_cycles", cycles_sum / n, cyc.mean,
                                       std::sqrt(cyc.variance / n)));

  // Expected measurements per executed cycle from the four-branch structure;
  // a cycle's count is independent of whether earlier cycles erred.
  double meas_per_cycle = 0.0;
  for (const auto& [key, p] : expected_branches) {
    const int m = 1 + static_cast<int>(std::count(key.begin(), key.end(), ','));
    meas_per_cycle += p * m;
  }
  const double mean_meas = meas_sum / n;
  const double sample_var = meas_sq_sum / n - mean_meas * mean_meas;
  r.checks.push_back(statistical_check("mean_measurements", mean_meas,
                                       meas_per_cycle * cyc.mean,
                                       std::sqrt(std::max(sample_var, 0.0) / n)));
  r.checks.push_back(exact_check("fidelity_min", fid.min, 1.0, 1e-10));
  fid.commit(r);
  if (deterministic_fix)
    r.notes.push_back({"correction", "erred first cycle repaired by one (pi/2, 0) pulse; "
                                     "every trial terminates in R after one cycle"});
  finalize_report(r);
  return r;
}

ExperimentReport run_dgb_experiment(const DgbConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("dgb experiment: trials must be >= 1");
  ExperimentReport r;
  r.command = "dgb";
  r.seed = cfg.seed;
  r.trials = cfg.trials;
  r.wall_clock = wall_clock_now();
  r.parameters = {{"phi", fmt_num(cfg.phi)}};

  // Exact readout distribution, from enumeration on the reference input.
  const StateVector probe = apply_unitary(tensor(reference_state(), ket_plus()), {1, 2},
                                          zz_phase_gate(cfg.phi / 2));
  const auto exact = measure_branches(probe, pauli_z(2));

  const Matrix target = axis_rotation('z', cfg.phi);
  std::vector<long long> counts(exact.size(), 0);
  FidelityStats fid;
  for (long long t = 0; t < cfg.trials; ++t) {
    RngStream rng = RngStream::for_trial(cfg.seed, static_cast<std::uint64_t>(t));
    const StateVector psi = random_state(1, rng);
    const DgbRun run = dgb_z_rotation(psi, cfg.phi, rng);
    const std::string key = branch_key(run.transcript, 1);
    for (std::size_t i = 0; i < exact.size(); ++i)
      if (exact[i].record.outcome == key) ++counts[i];
    fid.add(overlap(apply_unitary(psi, {1}, target), run.output));
  }

  for (std::size_t i = 0; i < exact.size(); ++i)
    r.branches.push_back(branch_count(exact[i].record.outcome, counts[i], cfg.trials,
                                      exact[i].record.probability));
  r.checks.push_back(exact_check("p_outcome_0", exact[0].record.probability, 0.5, 1e-12));
  r.checks.push_back(exact_check("fidelity_min", fid.min, 1.0, 1e-10));
  fid.commit(r);
  finalize_report(r);
  return r;
}

ExperimentReport run_teleport_experiment(const TeleportConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("teleport experiment: trials must be >= 1");
  ExperimentReport r;
  r.command = "teleport";
  r.seed = cfg.seed;
  r.trials = cfg.trials;
  r.wall_clock = wall_clock_now();

  const StateVector pair = StateVector::from_amplitudes(2, {1, 0, 0, 1});
  const auto exact = measure_branches(tensor(reference_state(), pair), bell_basis(1, 2));

  std::vector<long long> counts(exact.size(), 0);
  FidelityStats fid;
  for (long long t = 0; t < cfg.trials; ++t) {
    RngStream rng = RngStream::for_trial(cfg.seed, static_cast<std::uint64_t>(t));
    const StateVector psi = random_state(1, rng);
    const TeleportRun run = state_teleport(psi, rng);
    for (std::size_t i = 0; i < exact.size(); ++i)
      if (exact[i].record.outcome == run.bell.outcome) ++counts[i];
    fid.add(overlap(psi, run.output));
  }
  for (std::size_t i = 0; i < exact.size(); ++i)
    r.branches.push_back(branch_count(exact[i].record.outcome, counts[i], cfg.trials,
                                      exact[i].record.probability));
  r.checks.push_back(exact_check("fidelity_min", fid.min, 1.0, 1e-10));
  fid.commit(r);
  finalize_report(r);
  return r;
}

ExperimentReport run_gate_teleport_experiment(const GateTeleportConfig& cfg) {
  if (cfg.trials < 1)
    throw std::invalid_argument("gate teleport experiment: trials must be >= 1");
  check_gate(cfg.unitary, "gate teleport experiment");
  ExperimentReport r;
  r.command = "gate-teleport";
  r.seed = cfg.seed;
  r.trials = cfg.trials;
  r.wall_clock = wall_clock_now();
  r.parameters = {{"unitary", cfg.name},
                  {"attempt_cap", std::to_string(cfg.attempt_cap)}};

  // Exact first-attempt match probability: sum over resource readouts of the
  // probability that the Bell readout repeats the same label.
  const StateVector phi_plus = StateVector::from_amplitudes(2, {1, 0, 0, 1});
  const char axes[4] = {'i', 'x', 'y', 'z'};
  const std::string names[4] = {"I", "X", "Y", "Z"};
  std::vector<StateVector> resource;
  for (int b = 0; b < 4; ++b)
    resource.push_back(apply_unitary(phi_plus, {2}, cfg.unitary * pauli(axes[b])));
  const auto prep = measure_branches(
      StateVector::basis("00"),
      custom_basis("resource(1,2)", {1, 2}, resource, {names[0], names[1], names[2], names[3]}));
  double p_match = 0.0;
  for (const auto& pb : prep) {
    const auto bell = measure_branches(tensor(reference_state(), pb.state), bell_basis(1, 2));
    for (const auto& bb : bell)
      if (bb.record.outcome == pb.record.outcome)
        p_match += pb.record.probability * bb.record.probability;
  }

  // Attempts are geometric in p_match, conditioned on success within the cap.
  const double q = 1.0 - p_match;
  const double z_norm = 1.0 - std::pow(q, cfg.attempt_cap);
  double e1 = 0.0;
  double e2 = 0.0;
  for (int k = 1; k <= cfg.attempt_cap; ++k) {
    const double pk = p_match * std::pow(q, k - 1) / z_norm;
    e1 += k * pk;
    e2 += static_cast<double>(k) * k * pk;
  }

  long long matched_first = 0;
  double attempts_sum = 0.0;
  FidelityStats fid;
  for (long long t = 0; t < cfg.trials; ++t) {
    RngStream rng = RngStream::for_trial(cfg.seed, static_cast<std::uint64_t>(t));
    const StateVector psi = random_state(1, rng);
    const GateTeleportRun run = gate_teleport(psi, cfg.unitary, rng, cfg.attempt_cap);
    matched_first += run.first_attempt_matched ? 1 : 0;
    attempts_sum += run.attempts;
    fid.add(overlap(apply_unitary(psi, {1}, cfg.unitary), run.output));
  }

  r.branches.push_back(branch_count("alpha=beta", matched_first, cfg.trials, p_match));
  r.branches.push_back(branch_count("alpha!=beta", cfg.trials - matched_first, cfg.trials,
                                    1.0 - p_match));
  const double n = static_cast<double>(cfg.trials);
  r.checks.push_back(statistical_check("mean_attempts", attempts_sum / n, e1,
                                       std::sqrt((e2 - e1 * e1) / n)));
  r.checks.push_back(exact_check("fidelity_min", fid.min, 1.0, 1e-10));
  fid.commit(r);
  finalize_report(r);
  return r;
}

ExperimentReport run_tree_report(const TreeConfig& cfg) {
  if (cfg.cycles < 1 || cfg.cycles > 12)
    throw std::invalid_argument("tree report: cycles must be in [1, 12]");
  ExperimentReport r;
  r.command = "tree";
  r.wall_clock = wall_clock_now();
  r.parameters = {{"axis", to_string(cfg.axis)},
                  {"cycles", std::to_string(cfg.cycles)},
                  {"phi_z0", fmt_num(cfg.phi_z0)}};

  const StateVector psi = reference_state();
  const BranchTree tree = enumerate_protocol_tree(psi, cfg.axis, cfg.phi_z0, cfg.cycles);
  const TreeStats stats = tree_stats(tree);
  const auto cycle1 = first_cycle_branches(tree);

  const BranchTree one = enumerate_protocol_tree(psi, cfg.axis, cfg.phi_z0, 1);
  const double p_cycle = tree_stats(one).success_mass;
  const CappedGeometric cyc = capped_geometric(p_cycle, cfg.cycles);

  for (const auto& [key, p] : cycle1)
    r.checks.push_back(exact_check("p[" + key + "]", p, 0.25, 1e-12));
  r.checks.push_back(exact_check("success_mass", stats.success_mass,
                                 1.0 - std::pow(2.0, -cfg.cycles), 1e-12));
  r.checks.push_back(exact_check("leaf_probability_total",
                                 stats.success_mass + stats.erred_mass, 1.0, 1e-10));
  r.checks.push_back(exact_check("expected_cycles_capped", stats.expected_cycles, cyc.mean,
                                 1e-12));
  r.checks.push_back(exact_check("expected_cycles_limit", 1.0 / p_cycle, 2.0, 1e-12));

  double meas_per_cycle = 0.0;
  for (const auto& [key, p] : cycle1) {
    const int m = 1 + static_cast<int>(std::count(key.begin(), key.end(), ','));
    meas_per_cycle += p * m;
  }
  r.checks.push_back(exact_check("measurements_per_cycle", stats.measurements_per_cycle,
                                 meas_per_cycle, 1e-12));

  FidelityStats fid;
  for_each_leaf(tree, [&](const BranchNode& leaf) {
    const Matrix gate = r_gate(cfg.axis, leaf.applied == "R_dagger");
    fid.add(overlap(apply_unitary(psi, {1}, gate),
                    extract_single_qubit(leaf.state, leaf.output_qubit)));
  });
  r.checks.push_back(exact_check("leaf_fidelity_min", fid.min, 1.0, 1e-10));
  fid.commit(r);

  r.notes.push_back({"leaf_count", std::to_string(stats.leaf_count)});
  r.notes.push_back({"expected_measurements", fmt_num(stats.expected_measurements)});
  r.notes.push_back(
      {"measurements_per_cycle",
       "direct expectation over the four branches: 1*(1/4) + 2*(1/4) + 3*(1/2) = 9/4 = 2.25"});
  r.notes.push_back(
      {"alternative_accounting",
       "the accounting 1*(1/4) + 3*(3/4)*(2/3)*(1/2) = 1 is sometimes quoted for this "
       "protocol; its summands cover only half of the branch mass, so it disagrees with "
       "the tree expectation 9/4 reported above"});
  finalize_report(r);
  return r;
}

ExperimentReport run_compile_report(const CompileConfig& cfg) {
  check_gate(cfg.target, "compile report");
  if (cfg.tolerance <= 0.0)
    throw std::invalid_argument("compile report: tolerance must be positive");
  ExperimentReport r;
  r.command = "compile";
  r.wall_clock = wall_clock_now();

  const EulerSynthesis syn = euler_synthesize(cfg.target);
  const Matrix got = evaluate(syn.sequence);
  const Matrix want = embed_unitary(cfg.target, 2, {1});
  const double residual = aligned_residual(got, want);

  r.parameters = {{"target", cfg.name},
                  {"step_count", std::to_string(syn.sequence.steps.size())},
                  {"alpha", fmt_num(syn.angles.alpha)},
                  {"beta", fmt_num(syn.angles.beta)},
                  {"gamma", fmt_num(syn.angles.gamma)},
                  {"delta", fmt_num(syn.angles.delta)},
                  {"elided_factors", std::to_string(syn.elided_factors)}};
  r.checks.push_back(exact_check("residual", residual, 0.0, cfg.tolerance));

  std::string listing;
  for (const ElementaryStep& step : syn.sequence.steps) {
    if (!listing.empty()) listing += "; ";
    if (const auto* p = std::get_if<ExchangePulse>(&step)) {
      listing += "U(" + std::to_string(p->i) + "," + std::to_string(p->j) + ";" +
                 fmt_num(p->phi_perp) + "," + fmt_num(p->phi_z) + ")";
    } else {
      const auto& g = std::get<RGateStep>(step);
      listing += std::string("R") + (g.axis == Axis::Z ? "z" : "x") + (g.dagger ? "'" : "") +
                 "(" + std::to_string(g.qubit) + ")";
    }
  }
  r.notes.push_back({"sequence", listing.empty() ? "(empty)" : listing});
  finalize_report(r);
  return r;
}

Matrix named_unitary(const std::string& name) {
  if (name == "I" || name == "i") return Matrix::identity(2);
  if (name == "X" || name == "x") return pauli('x');
  if (name == "Y" || name == "y") return pauli('y');
  if (name == "Z" || name == "z") return pauli('z');
  if (name == "H" || name == "h") return hadamard();
  for (const char* prefix : {"rz:", "ry:", "rx:"}) {
    if (name.rfind(prefix, 0) != 0) continue;
    const std::string arg = name.substr(3);
    std::size_t used = 0;
    double phi = 0.0;
    try {
      phi = std::stod(arg, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("named_unitary: bad angle in '" + name + "'");
    }
    if (used != arg.size())
      throw std::invalid_argument("named_unitary: bad angle in '" + name + "'");
    return axis_rotation(prefix[1], phi);
  }
  throw std::invalid_argument("named_unitary: unknown name '" + name +
                              "' (use I, X, Y, Z, H, rz:PHI, ry:PHI, rx:PHI)");
}

Matrix load_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("load_matrix_file: cannot open " + path);
  std::vector<complexd> entries;
  for (int k = 0; k < 4; ++k) {
    double re = 0.0;
    double im = 0.0;
    if (!(in >> re >> im))
      throw std::invalid_argument("load_matrix_file: expected four 're im' pairs in " + path);
    entries.emplace_back(re, im);
  }
  return Matrix(2, std::move(entries));
}

}  // namespace qtel
