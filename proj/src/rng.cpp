#include "qtel/rng.hpp"

#include <cmath>

namespace qtel {

double RngStream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double two_pi = 2.0 * std::acos(-1.0);
  spare_ = r * std::sin(two_pi * u2);
  have_spare_ = true;
  return r * std::cos(two_pi * u2);
}

StateVector random_state(int n_qubits, RngStream& rng) {
  std::vector<complexd> amps(std::size_t{1} << n_qubits);
  for (auto& a : amps) a = complexd{rng.normal(), rng.normal()};
  return StateVector::from_amplitudes(n_qubits, std::move(amps));
}

}  // namespace qtel
