#include "qtel/observables.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace qtel {

namespace {

constexpr double kProjTol = 1e-10;

Matrix outer_sum(const std::vector<StateVector>& states) {
  const int dim = static_cast<int>(states.front().dim());
  Matrix p(dim);
  for (const auto& s : states)
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c)
        p.at(r, c) += s.amp(r) * std::conj(s.amp(c));
  return p;
}

std::string pair_label(const std::string& name, int i, int j) {
  return name + "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

StateVector basis2(const std::string& label) { return StateVector::basis(label); }

}  // namespace

ProjectiveObservable::ProjectiveObservable(std::string label, std::vector<int> qubits,
                                           std::vector<OutcomeProjector> outcomes)
    : label_(std::move(label)), qubits_(std::move(qubits)), outcomes_(std::move(outcomes)) {
  if (outcomes_.empty()) throw std::invalid_argument(label_ + ": no outcomes");
  const int dim = 1 << qubits_.size();
  Matrix sum(dim);
  for (const auto& o : outcomes_) {
    const Matrix& p = o.projector;
    if (p.dim() != dim)
      throw std::invalid_argument(label_ + ": projector dimension mismatch");
    if (p.max_abs_diff(p.adjoint()) > kProjTol)
      throw std::invalid_argument(label_ + ": projector for '" + o.label + "' not hermitian");
    if ((p * p).max_abs_diff(p) > kProjTol)
      throw std::invalid_argument(label_ + ": projector for '" + o.label + "' not idempotent");
    sum = sum + p;
  }
  for (std::size_t a = 0; a < outcomes_.size(); ++a)
    for (std::size_t b = a + 1; b < outcomes_.size(); ++b) {
      const Matrix prod = outcomes_[a].projector * outcomes_[b].projector;
      if (prod.max_abs_diff(Matrix(dim)) > kProjTol)
        throw std::invalid_argument(label_ + ": projectors '" + outcomes_[a].label +
                                    "' and '" + outcomes_[b].label + "' overlap");
    }
  if (sum.max_abs_diff(Matrix::identity(dim)) > kProjTol)
    throw std::invalid_argument(label_ + ": projectors do not resolve the identity");
}

ProjectiveObservable pauli_z(int j) {
  return ProjectiveObservable(
      "sigma_z(" + std::to_string(j) + ")", {j},
      {{"0", 1.0, outer_sum({ket0()})}, {"1", -1.0, outer_sum({ket1()})}});
}

ProjectiveObservable pauli_x(int j) {
  return ProjectiveObservable(
      "sigma_x(" + std::to_string(j) + ")", {j},
      {{"+", 1.0, outer_sum({ket_plus()})}, {"-", -1.0, outer_sum({ket_minus()})}});
}

ProjectiveObservable zz(int i, int j) {
  return ProjectiveObservable(
      pair_label("zz", i, j), {i, j},
      {{"+1", 1.0, outer_sum({basis2("00"), basis2("11")})},
       {"-1", -1.0, outer_sum({basis2("01"), basis2("10")})}});
}

ProjectiveObservable total_spin_sq(int i, int j) {
  return ProjectiveObservable(
      pair_label("S2", i, j), {i, j},
      {{"S=0", 0.0, outer_sum({singlet()})},
       {"S=1", 2.0, outer_sum({basis2("00"), triplet0(), basis2("11")})}});
}

ProjectiveObservable sz_sq(int i, int j) {
  return ProjectiveObservable(
      pair_label("Sz2", i, j), {i, j},
      {{"0", 0.0, outer_sum({basis2("01"), basis2("10")})},
       {"1", 1.0, outer_sum({basis2("00"), basis2("11")})}});
}

ProjectiveObservable sx_sq(int i, int j) {
  return ProjectiveObservable(
      pair_label("Sx2", i, j), {i, j},
      {{"0", 0.0, outer_sum({basis2("+-"), basis2("-+")})},
       {"1", 1.0, outer_sum({basis2("++"), basis2("--")})}});
}

ProjectiveObservable bell_basis(int i, int j) {
  const StateVector phi_plus = StateVector::from_amplitudes(2, {1, 0, 0, 1});
  const char axes[4] = {'i', 'x', 'y', 'z'};
  const std::string names[4] = {"I", "X", "Y", "Z"};
  std::vector<OutcomeProjector> outcomes;
  for (int a = 0; a < 4; ++a) {
    const StateVector bell = apply_unitary(phi_plus, {1}, pauli(axes[a]));
    outcomes.push_back({names[a], static_cast<double>(a), outer_sum({bell})});
  }
  return ProjectiveObservable(pair_label("bell", i, j), {i, j}, std::move(outcomes));
}

ProjectiveObservable custom_basis(std::string label, std::vector<int> qubits,
                                  const std::vector<StateVector>& basis,
                                  std::vector<std::string> outcome_labels) {
  if (outcome_labels.empty())
    for (std::size_t k = 0; k < basis.size(); ++k)
      outcome_labels.push_back(std::to_string(k));
  if (outcome_labels.size() != basis.size())
    throw std::invalid_argument(label + ": outcome label count mismatch");
  std::vector<OutcomeProjector> outcomes;
  for (std::size_t k = 0; k < basis.size(); ++k)
    outcomes.push_back({outcome_labels[k], static_cast<double>(k), outer_sum({basis[k]})});
  // Orthonormality and completeness are enforced by the family validation.
  return ProjectiveObservable(std::move(label), std::move(qubits), std::move(outcomes));
}

namespace {

struct RawBranch {
  double probability;
  std::vector<complexd> projected;
};

std::vector<RawBranch> project_all(const StateVector& s, const ProjectiveObservable& obs) {
  std::vector<RawBranch> raw;
  raw.reserve(obs.outcomes().size());
  for (const auto& o : obs.outcomes()) {
    auto projected = detail::apply_on_targets(s.amps(), s.n_qubits(), obs.qubits(), o.projector);
    raw.push_back({detail::norm2(projected), std::move(projected)});
  }
  return raw;
}

Branch make_branch(const StateVector& s, const ProjectiveObservable& obs,
                   std::size_t k, RawBranch&& raw) {
  return Branch{
      {obs.label(), obs.outcomes()[k].label, raw.probability},
      StateVector::from_amplitudes(s.n_qubits(), std::move(raw.projected))};
}

}  // namespace

std::vector<Branch> measure_branches(const StateVector& s, const ProjectiveObservable& obs) {
  auto raw = project_all(s, obs);
  std::vector<Branch> branches;
  for (std::size_t k = 0; k < raw.size(); ++k)
    if (raw[k].probability >= kPruneTol)
      branches.push_back(make_branch(s, obs, k, std::move(raw[k])));
  return branches;
}

Branch measure_sample(const StateVector& s, const ProjectiveObservable& obs, RngStream& rng) {
  auto raw = project_all(s, obs);
  const double u = rng.uniform();
  double cum = 0.0;
  std::size_t pick = raw.size();
  for (std::size_t k = 0; k < raw.size(); ++k) {
    cum += raw[k].probability;
    if (u < cum) { pick = k; break; }
  }
  if (pick == raw.size()) {  // float shortfall: fall back to the last real branch
    for (std::size_t k = raw.size(); k-- > 0;)
      if (raw[k].probability >= kPruneTol) { pick = k; break; }
  }
  if (pick == raw.size())
    throw std::domain_error(obs.label() + ": all outcome probabilities vanish");
  return make_branch(s, obs, pick, std::move(raw[pick]));
}

}  // namespace qtel
