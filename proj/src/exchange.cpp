#include "qtel/exchange.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qtel {

ExchangeCouplings::ExchangeCouplings(double jp, double jz, ExchangeModel m)
    : j_perp(jp), j_z(jz), model(m) {
  if (m == ExchangeModel::XY && jz != 0.0)
    throw std::invalid_argument("XY model requires j_z = 0");
  if (m == ExchangeModel::Heisenberg && jz != jp)
    throw std::invalid_argument("Heisenberg model requires j_z = j_perp");
}

ExchangePulse::ExchangePulse(int qi, int qj, double perp, double z)
    : i(qi), j(qj), phi_perp(perp), phi_z(z) {
  if (qi == qj) throw std::invalid_argument("exchange pulse needs two distinct qubits");
}

DGBParameters::DGBParameters(std::vector<double> d, std::vector<double> b,
                             std::vector<double> j)
    : deltas(std::move(d)), biases(std::move(b)), josephson(std::move(j)) {
  if (biases.size() != deltas.size())
    throw std::invalid_argument("bias count must match qubit count");
  for (double bias : biases)
    if (bias != 0.0)
      throw std::invalid_argument("all biases must stay at the degeneracy point (zero)");
}

Matrix exchange_unitary(double phi_perp, double phi_z) {
  const complexd i{0.0, 1.0};
  const complexd corner = std::exp(-i * phi_z);
  const complexd mid = std::exp(i * phi_z);
  const double c = std::cos(2.0 * phi_perp);
  const double s = std::sin(2.0 * phi_perp);
  Matrix u(4);
  u.at(0, 0) = corner;
  u.at(1, 1) = mid * c;
  u.at(1, 2) = mid * (-i * s);
  u.at(2, 1) = mid * (-i * s);
  u.at(2, 2) = mid * c;
  u.at(3, 3) = corner;
  return u;
}

Matrix exchange_unitary(const ExchangePulse& p) {
  return exchange_unitary(p.phi_perp, p.phi_z);
}

Matrix zz_phase_gate(double theta) { return exchange_unitary(0.0, theta); }

std::array<ExchangeEigenpair, 4> exchange_eigensystem(const ExchangeCouplings& c) {
  // H is diagonal in {singlet, triplet0, |00>, |11>} for every coupling choice.
  std::array<ExchangeEigenpair, 4> pairs = {{
      {-2.0 * c.j_perp - c.j_z, singlet()},
      {2.0 * c.j_perp - c.j_z, triplet0()},
      {c.j_z, StateVector::basis("00")},
      {c.j_z, StateVector::basis("11")},
  }};
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const ExchangeEigenpair& a, const ExchangeEigenpair& b) {
                     return a.value < b.value;
                   });
  return pairs;
}

StateVector cool_to_singlet(const ExchangeCouplings& c) {
  if (!(c.j_perp > 0.0) || !(c.j_perp > -c.j_z))
    throw std::domain_error(
        "cooling does not reach the singlet: need j_perp > 0 and j_perp > -j_z");
  return singlet();
}

Matrix x_subspace_pulse(double phi_z0) {
  const double pi = std::acos(-1.0);
  return exchange_unitary(pi / 4.0 - phi_z0, phi_z0);
}

Matrix r_gate(Axis axis, bool dagger) {
  const complexd i{0.0, 1.0};
  const double pi = std::acos(-1.0);
  const complexd e = std::exp(i * (pi / 4.0));
  Matrix r(2);
  if (axis == Axis::Z) {
    r.at(0, 0) = e;
    r.at(1, 1) = std::conj(e);
  } else {
    const double s = 1.0 / std::sqrt(2.0);
    r.at(0, 0) = s;
    r.at(0, 1) = i * s;
    r.at(1, 0) = i * s;
    r.at(1, 1) = s;
  }
  return dagger ? r.adjoint() : r;
}

}  // namespace qtel
