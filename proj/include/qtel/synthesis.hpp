#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "qtel/exchange.hpp"

// Compilation of single-qubit rotations into exchange pulses plus the fixed
// R gates.  The register is a qubit pair; compiled rotations land on the
// declared target qubit with the partner untouched.
//
// Every builder accepts arbitrary z pulse angles: the two pulses of an
// XX block share one z angle, which cancels out of the block, so the
// compiled action never depends on them.

namespace qtel {

struct RGateStep {
  int qubit;
  Axis axis;
  bool dagger = false;
};

using ElementaryStep = std::variant<ExchangePulse, RGateStep>;

struct GateSequence {
  std::vector<ElementaryStep> steps;  // temporal order: steps[0] acts first
  int n_qubits = 2;
  int target = 1;                // qubit carrying the compiled gate
  std::string declared_target;   // human-readable description of the intent
};

// Full register unitary of one step / of a sequence (product over steps,
// first step rightmost).
Matrix step_unitary(const ElementaryStep& step, int n_qubits);
Matrix evaluate(const GateSequence& seq, int n_qubits);
Matrix evaluate(const GateSequence& seq);  // uses seq.n_qubits

// u acting on the target qubits with identity elsewhere.
Matrix embed_unitary(const Matrix& u, int n_qubits, const std::vector<int>& targets);

// Reversed sequence with every step inverted; evaluate(inverse(s)) equals
// evaluate(s)^dagger.
GateSequence inverse(const GateSequence& seq);

// [inverse(wing), body, wing]: evaluates to W B W^dagger with
// W = evaluate(wing), B = evaluate(body).  For W = exp(i theta A) this is the
// theta-conjugation of the body by A.
GateSequence conjugate(const GateSequence& wing, const GateSequence& body);

// exp(-i theta X1 X2), 6 steps: the pulse pair brackets a sign flip of the
// YY and ZZ terms, so only 2*(theta/2) XX survives.
GateSequence build_xx(double theta, double phi_z = 0.0);

// exp(-i theta Y1 X2), 8 steps: an XX block dressed by R_z on the target.
GateSequence build_yx(double theta, double phi_z = 0.0);

// exp(-i phi Z1), 22 steps: XX block conjugated by the pi/4 YX block.
GateSequence build_z_rotation(double phi, const std::array<double, 3>& phi_z = {0, 0, 0});

// exp(-i phi Y1), 22 steps: XX block conjugated by a mixed wing
// L = R_x . exp(-i pi/4 X1X2) . R_z^dagger, which maps X1X2 to Y1.
GateSequence build_y_rotation(double phi, const std::array<double, 3>& phi_z = {0, 0, 0});

// z-y-z decomposition u = e^{i delta} Rz(alpha) Ry(beta) Rz(gamma) with
// Ra(t) = exp(-i t sigma^a); alpha, gamma in (-pi, pi], beta in [0, pi/2]
// (the atan2 branch never needs (pi/2, pi]).  Gimbal cases fold gamma into
// alpha.
struct EulerAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
};
EulerAngles euler_zyz(const Matrix& u);

// Compiles an arbitrary 2x2 unitary via euler_zyz: up to three 22-step
// rotation blocks (66 steps total); zero-angle factors are elided and the
// elision count reported.  The action matches u up to global phase.
struct EulerSynthesis {
  EulerAngles angles;
  GateSequence sequence;
  int elided_factors = 0;
};
EulerSynthesis euler_synthesize(const Matrix& u, double zero_tol = 1e-12);

// Max-norm difference after the Frobenius-optimal global phase alignment of
// `got` onto `want`.
double aligned_residual(const Matrix& got, const Matrix& want);

}  // namespace qtel
