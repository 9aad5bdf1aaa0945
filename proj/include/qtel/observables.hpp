#pragma once

#include <string>
#include <vector>

#include "qtel/rng.hpp"
#include "qtel/state.hpp"

// Projective measurements as explicit projector families, with both full
// branch enumeration (exact probabilities) and seeded sampling.

namespace qtel {

inline constexpr double kPruneTol = 1e-12;  // zero-probability branch cutoff

struct MeasurementRecord {
  std::string observable;
  std::string outcome;
  double probability = 0.0;
};

struct OutcomeProjector {
  std::string label;
  double eigenvalue;
  Matrix projector;  // acts on the observable's qubit subset
};

// A complete family of mutually orthogonal projectors on a qubit subset.
// Construction validates hermiticity, idempotence, orthogonality and
// completeness to 1e-10.
class ProjectiveObservable {
 public:
  ProjectiveObservable(std::string label, std::vector<int> qubits,
                       std::vector<OutcomeProjector> outcomes);

  const std::string& label() const { return label_; }
  const std::vector<int>& qubits() const { return qubits_; }
  const std::vector<OutcomeProjector>& outcomes() const { return outcomes_; }

 private:
  std::string label_;
  std::vector<int> qubits_;
  std::vector<OutcomeProjector> outcomes_;
};

// sigma^z of one qubit; outcomes "0" (+1) and "1" (-1).
ProjectiveObservable pauli_z(int j);
// sigma^x of one qubit; outcomes "+" (+1) and "-" (-1).
ProjectiveObservable pauli_x(int j);
// sigma^z sigma^z parity of a pair; outcomes "+1" and "-1".
ProjectiveObservable zz(int i, int j);
// Total spin of a pair: "S=0" projects on the singlet (eigenvalue 0 of S^2),
// "S=1" on the three triplets (eigenvalue 2).
ProjectiveObservable total_spin_sq(int i, int j);
// Squared z component of total pair spin: "0" on span{|01>,|10>},
// "1" on span{|00>,|11>}.  Same projectors as zz, relabeled.
ProjectiveObservable sz_sq(int i, int j);
// Squared x component: "0" on span{|+->,|-+>}, "1" on span{|++>,|-->}.
ProjectiveObservable sx_sq(int i, int j);
// Bell basis (sigma^a x I)|00+11>/sqrt(2), a in {I, X, Y, Z}; outcomes
// "I", "X", "Y", "Z".
ProjectiveObservable bell_basis(int i, int j);
// Rank-1 family from a caller-supplied orthonormal basis of the subset.
ProjectiveObservable custom_basis(std::string label, std::vector<int> qubits,
                                  const std::vector<StateVector>& basis,
                                  std::vector<std::string> outcome_labels = {});

struct Branch {
  MeasurementRecord record;
  StateVector state;
};

// All outcomes with probability >= kPruneTol, in declaration order, with
// collapsed renormalized states.  Probabilities sum to 1 before pruning.
std::vector<Branch> measure_branches(const StateVector& s,
                                     const ProjectiveObservable& obs);

// One sampled outcome: inverse-CDF over the declared outcome order.
Branch measure_sample(const StateVector& s, const ProjectiveObservable& obs,
                      RngStream& rng);

// Exact protocol evolution tree.  The root holds the initial state with
// probability 1; each child applies one measurement outcome.  Leaves carry the
// protocol classification filled in by the enumerator.
struct BranchNode {
  StateVector state;
  double probability = 1.0;  // absolute, from the root
  MeasurementRecord record;
  std::vector<BranchNode> children;

  // Leaf annotations.
  std::string tag;          // "success" or "erred"
  int output_qubit = 0;
  std::string applied;      // "R" or "R_dagger"
  int cycle = 0;            // cycle index (from 1) that terminated this path
  int measurements = 0;     // measurement count along the path from the root

  bool is_leaf() const { return children.empty(); }
};

using BranchTree = BranchNode;

}  // namespace qtel
