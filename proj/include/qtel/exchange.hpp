#pragma once

#include <array>
#include <vector>

#include "qtel/state.hpp"

// Two-spin exchange interaction: pulse unitaries, spectrum, cooling, and the
// fixed pi/4 single-qubit rotations the teleportation protocols consume.

namespace qtel {

enum class Axis { Z, X };

enum class ExchangeModel { XY, XXZ, Heisenberg };

// Couplings of H = j_perp*(X.X + Y.Y) + j_z*Z.Z on a qubit pair.
struct ExchangeCouplings {
  double j_perp;
  double j_z;
  ExchangeModel model;
  // Enforces the model constraint: XY has j_z = 0, Heisenberg has j_z = j_perp.
  ExchangeCouplings(double jp, double jz, ExchangeModel m);
};

// Time-integrated pulse on qubits (i, j): phi_perp = integral of j_perp,
// phi_z = integral of j_z over the pulse window.
struct ExchangePulse {
  int i;
  int j;
  double phi_perp;
  double phi_z;
  ExchangePulse(int qi, int qj, double perp, double z);
};

// Pulse parameters of a charge-qubit register: per-qubit tunneling amplitudes,
// per-qubit biases (kept at the degeneracy point, i.e. zero), and pairwise
// junction couplings.
struct DGBParameters {
  std::vector<double> deltas;
  std::vector<double> biases;
  std::vector<double> josephson;
  DGBParameters(std::vector<double> d, std::vector<double> b, std::vector<double> j);
};

// 4x4 unitary exp(-i [phi_perp*(XX+YY) + phi_z*ZZ]) in the basis
// |00>, |01>, |10>, |11>:
//   diag corners  e^{-i phi_z}
//   center block  e^{+i phi_z} [[cos 2phi_perp, -i sin 2phi_perp],
//                               [-i sin 2phi_perp, cos 2phi_perp]]
Matrix exchange_unitary(double phi_perp, double phi_z);
Matrix exchange_unitary(const ExchangePulse& p);

// exp(-i theta Z.Z); equal to exchange_unitary(0, theta).
Matrix zz_phase_gate(double theta);

struct ExchangeEigenpair {
  double value;
  StateVector state;
};

// Eigenvalues ascending; degenerate values keep the fixed state order
// singlet, triplet0, |00>, |11>.
std::array<ExchangeEigenpair, 4> exchange_eigensystem(const ExchangeCouplings& c);

// Relaxation to the ground state; requires the singlet to be the unique
// ground state, i.e. j_perp > 0 and j_perp > -j_z.
StateVector cool_to_singlet(const ExchangeCouplings& c);

// exchange_unitary(pi/4 - phi_z0, phi_z0): acts as a quarter swap-with-phase
// inside span{|+->, |-+>} for every phi_z0.
Matrix x_subspace_pulse(double phi_z0);

// R = exp(i (pi/4) sigma^axis); dagger gives exp(-i (pi/4) sigma^axis).
// Identities: sigma = -i R^2 and R^dagger = -R^3.
Matrix r_gate(Axis axis, bool dagger = false);

}  // namespace qtel
