#include "qtel/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>

namespace qtel {

namespace {

constexpr double kPi = 3.14159265358979323846;

void append(GateSequence& seq, const GateSequence& part) {
  seq.steps.insert(seq.steps.end(), part.steps.begin(), part.steps.end());
}

GateSequence r_step(int qubit, Axis axis, bool dagger) {
  GateSequence s;
  s.steps.push_back(RGateStep{qubit, axis, dagger});
  return s;
}

ElementaryStep invert_step(const ElementaryStep& step) {
  if (const auto* p = std::get_if<ExchangePulse>(&step))
    return ExchangePulse(p->i, p->j, -p->phi_perp, -p->phi_z);
  const auto& r = std::get<RGateStep>(step);
  return RGateStep{r.qubit, r.axis, !r.dagger};
}

}  // namespace

Matrix embed_unitary(const Matrix& u, int n_qubits, const std::vector<int>& targets) {
  detail::check_targets(n_qubits, targets, u.dim());
  const std::size_t dim = std::size_t{1} << n_qubits;
  Matrix full(static_cast<int>(dim));
  std::vector<complexd> col(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    std::fill(col.begin(), col.end(), complexd(0));
    col[c] = 1.0;
    const auto out = detail::apply_on_targets(col, n_qubits, targets, u);
    for (std::size_t r = 0; r < dim; ++r) full.at(static_cast<int>(r), static_cast<int>(c)) = out[r];
  }
  return full;
}

Matrix step_unitary(const ElementaryStep& step, int n_qubits) {
  if (const auto* p = std::get_if<ExchangePulse>(&step))
    return embed_unitary(exchange_unitary(*p), n_qubits, {p->i, p->j});
  const auto& r = std::get<RGateStep>(step);
  return embed_unitary(r_gate(r.axis, r.dagger), n_qubits, {r.qubit});
}

Matrix evaluate(const GateSequence& seq, int n_qubits) {
  Matrix total = Matrix::identity(1 << n_qubits);
  for (const ElementaryStep& step : seq.steps) total = step_unitary(step, n_qubits) * total;
  return total;
}

Matrix evaluate(const GateSequence& seq) { return evaluate(seq, seq.n_qubits); }

GateSequence inverse(const GateSequence& seq) {
  GateSequence inv;
  inv.n_qubits = seq.n_qubits;
  inv.target = seq.target;
  inv.declared_target = seq.declared_target.empty() ? "" : "inverse of " + seq.declared_target;
  inv.steps.reserve(seq.steps.size());
  for (auto it = seq.steps.rbegin(); it != seq.steps.rend(); ++it)
    inv.steps.push_back(invert_step(*it));
  return inv;
}

GateSequence conjugate(const GateSequence& wing, const GateSequence& body) {
  if (wing.n_qubits != body.n_qubits)
    throw std::invalid_argument("conjugate: register size mismatch");
  GateSequence seq;
  seq.n_qubits = body.n_qubits;
  seq.target = body.target;
  seq.declared_target = "conjugated " + (body.declared_target.empty() ? "body" : body.declared_target);
  append(seq, inverse(wing));
  append(seq, body);
  append(seq, wing);
  return seq;
}

std::string angle_tag(const char* fmt, double phi) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, phi);
  return buf;
}

GateSequence build_xx(double theta, double phi_z) {
  GateSequence seq;
  const ExchangePulse half(1, 2, theta / 2, phi_z);
  seq.steps = {RGateStep{1, Axis::X, false}, RGateStep{1, Axis::X, false}, half,
               RGateStep{1, Axis::X, true},  RGateStep{1, Axis::X, true},  half};
  seq.declared_target = angle_tag("exp(-i %.9g X1X2)", theta);
  return seq;
}

GateSequence build_yx(double theta, double phi_z) {
  GateSequence seq;
  append(seq, r_step(1, Axis::Z, false));
  append(seq, build_xx(theta, phi_z));
  append(seq, r_step(1, Axis::Z, true));
  seq.declared_target = angle_tag("exp(-i %.9g Y1X2)", theta);
  return seq;
}

GateSequence build_z_rotation(double phi, const std::array<double, 3>& phi_z) {
  GateSequence seq;
  append(seq, build_yx(kPi / 4, phi_z[0]));
  append(seq, build_xx(phi, phi_z[1]));
  append(seq, build_yx(-kPi / 4, phi_z[2]));
  seq.declared_target = angle_tag("exp(-i %.9g Z1)", phi);
  return seq;
}

GateSequence build_y_rotation(double phi, const std::array<double, 3>& phi_z) {
  // Wing L = R_x . exp(-i pi/4 X1X2) . R_z^dagger; the sequence is
  // [L^dagger, XX(phi), L] in temporal order and evaluates to
  // L XX(phi) L^dagger = exp(-i phi Y1).
  GateSequence seq;
  append(seq, r_step(1, Axis::X, true));
  append(seq, build_xx(-kPi / 4, phi_z[0]));
  append(seq, r_step(1, Axis::Z, false));
  append(seq, build_xx(phi, phi_z[1]));
  append(seq, r_step(1, Axis::Z, true));
  append(seq, build_xx(kPi / 4, phi_z[2]));
  append(seq, r_step(1, Axis::X, false));
  seq.declared_target = angle_tag("exp(-i %.9g Y1)", phi);
  return seq;
}

EulerAngles euler_zyz(const Matrix& u) {
  if (u.dim() != 2) throw std::invalid_argument("euler_zyz: need a 2x2 matrix");
  if (!u.is_unitary(1e-9)) throw std::invalid_argument("euler_zyz: matrix is not unitary");
  EulerAngles e;
  const complexd det = u.at(0, 0) * u.at(1, 1) - u.at(0, 1) * u.at(1, 0);
  e.delta = 0.5 * std::arg(det);
  const complexd phase = std::exp(complexd(0, -e.delta));
  const complexd v00 = u.at(0, 0) * phase;
  const complexd v10 = u.at(1, 0) * phase;
  e.beta = std::atan2(std::abs(v10), std::abs(v00));
  // v00 = cos(beta) e^{-i(alpha+gamma)}, v10 = sin(beta) e^{i(alpha-gamma)};
  // when one of them vanishes only the angle sum or difference is fixed.
  constexpr double kGimbalTol = 1e-9;
  if (std::abs(v10) <= kGimbalTol) {
    e.alpha = -std::arg(v00);
    e.gamma = 0.0;
  } else if (std::abs(v00) <= kGimbalTol) {
    e.alpha = 0.5 * std::arg(v10);
    e.gamma = -e.alpha;
  } else {
    e.alpha = 0.5 * (-std::arg(v00) + std::arg(v10));
    e.gamma = 0.5 * (-std::arg(v00) - std::arg(v10));
  }
  return e;
}

EulerSynthesis euler_synthesize(const Matrix& u, double zero_tol) {
  EulerSynthesis out;
  out.angles = euler_zyz(u);
  auto block = [&](double angle, bool y_axis) {
    if (std::abs(angle) <= zero_tol) {
      ++out.elided_factors;
      return;
    }
    append(out.sequence, y_axis ? build_y_rotation(angle) : build_z_rotation(angle));
  };
  block(out.angles.gamma, false);
  block(out.angles.beta, true);
  block(out.angles.alpha, false);
  out.sequence.declared_target = "zyz synthesis";
  return out;
}

double aligned_residual(const Matrix& got, const Matrix& want) {
  if (got.dim() != want.dim())
    throw std::invalid_argument("aligned_residual: dimension mismatch");
  complexd overlap = 0.0;
  for (int r = 0; r < got.dim(); ++r)
    for (int c = 0; c < got.dim(); ++c) overlap += std::conj(want.at(r, c)) * got.at(r, c);
  if (std::abs(overlap) < 1e-300) return got.max_abs_diff(want);
  const complexd phase = std::conj(overlap) / std::abs(overlap);
  return (got * phase).max_abs_diff(want);
}

}  // namespace qtel
