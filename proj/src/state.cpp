#include "qtel/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qtel {

namespace {

const complexd kInvSqrt2{1.0 / std::sqrt(2.0), 0.0};

void check_qubit_count(int n) {
  if (n < 1 || n > kMaxQubits)
    throw std::invalid_argument("qubit count must be in [1, " +
                                std::to_string(kMaxQubits) + "], got " +
                                std::to_string(n));
}

}  // namespace

Matrix::Matrix(int dim, std::vector<complexd> entries) : dim_(dim), e_(std::move(entries)) {
  if (e_.size() != static_cast<std::size_t>(dim) * dim)
    throw std::invalid_argument("matrix entry count does not match dimension");
}

Matrix Matrix::identity(int dim) {
  Matrix m(dim);
  for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
  return m;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (dim_ != rhs.dim_) throw std::invalid_argument("matrix dimension mismatch in product");
  Matrix out(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int k = 0; k < dim_; ++k) {
      const complexd v = at(r, k);
      if (v == complexd{}) continue;
      for (int c = 0; c < dim_; ++c) out.at(r, c) += v * rhs.at(k, c);
    }
  return out;
}

Matrix Matrix::operator*(complexd s) const {
  Matrix out = *this;
  for (auto& v : out.e_) v *= s;
  return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
  if (dim_ != rhs.dim_) throw std::invalid_argument("matrix dimension mismatch in sum");
  Matrix out = *this;
  for (std::size_t i = 0; i < e_.size(); ++i) out.e_[i] += rhs.e_[i];
  return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
  if (dim_ != rhs.dim_) throw std::invalid_argument("matrix dimension mismatch in difference");
  Matrix out = *this;
  for (std::size_t i = 0; i < e_.size(); ++i) out.e_[i] -= rhs.e_[i];
  return out;
}

Matrix Matrix::adjoint() const {
  Matrix out(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) out.at(c, r) = std::conj(at(r, c));
  return out;
}

double Matrix::max_abs_diff(const Matrix& rhs) const {
  if (dim_ != rhs.dim_) throw std::invalid_argument("matrix dimension mismatch in comparison");
  double m = 0.0;
  for (std::size_t i = 0; i < e_.size(); ++i) m = std::max(m, std::abs(e_[i] - rhs.e_[i]));
  return m;
}

bool Matrix::is_unitary(double tol) const {
  return (adjoint() * *this).max_abs_diff(identity(dim_)) <= tol;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.dim() * b.dim());
  for (int ar = 0; ar < a.dim(); ++ar)
    for (int ac = 0; ac < a.dim(); ++ac) {
      const complexd v = a.at(ar, ac);
      if (v == complexd{}) continue;
      for (int br = 0; br < b.dim(); ++br)
        for (int bc = 0; bc < b.dim(); ++bc)
          out.at(ar * b.dim() + br, ac * b.dim() + bc) = v * b.at(br, bc);
    }
  return out;
}

Matrix pauli(char axis) {
  const complexd i{0.0, 1.0};
  switch (axis) {
    case 'i': return Matrix(2, {1, 0, 0, 1});
    case 'x': return Matrix(2, {0, 1, 1, 0});
    case 'y': return Matrix(2, {0, -i, i, 0});
    case 'z': return Matrix(2, {1, 0, 0, -1});
    default: throw std::invalid_argument(std::string("unknown Pauli axis '") + axis + "'");
  }
}

Matrix hadamard() {
  return Matrix(2, {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2});
}

StateVector StateVector::basis(int n_qubits, std::size_t index) {
  check_qubit_count(n_qubits);
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (index >= dim) throw std::invalid_argument("basis index out of range");
  std::vector<complexd> amps(dim);
  amps[index] = 1.0;
  return StateVector(n_qubits, std::move(amps));
}

StateVector StateVector::basis(const std::string& label) {
  const int n = static_cast<int>(label.size());
  check_qubit_count(n);
  StateVector out = [&] {
    switch (label[0]) {
      case '0': return ket0();
      case '1': return ket1();
      case '+': return ket_plus();
      case '-': return ket_minus();
      default: throw std::invalid_argument("basis label chars must be one of 01+-");
    }
  }();
  for (int q = 1; q < n; ++q) out = tensor(out, basis(label.substr(q, 1)));
  return out;
}

StateVector StateVector::from_amplitudes(int n_qubits, std::vector<complexd> amps) {
  check_qubit_count(n_qubits);
  if (amps.size() != (std::size_t{1} << n_qubits))
    throw std::invalid_argument("amplitude count does not match qubit count");
  const double n2 = detail::norm2(amps);
  if (n2 <= kNormTol) throw std::invalid_argument("cannot normalize a zero-norm state");
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& a : amps) a *= inv;
  return StateVector(n_qubits, std::move(amps));
}

StateVector ket0() { return StateVector::basis(1, 0); }
StateVector ket1() { return StateVector::basis(1, 1); }
StateVector ket_plus() { return StateVector::from_amplitudes(1, {1, 1}); }
StateVector ket_minus() { return StateVector::from_amplitudes(1, {1, -1}); }
StateVector singlet() { return StateVector::from_amplitudes(2, {0, 1, -1, 0}); }
StateVector triplet0() { return StateVector::from_amplitudes(2, {0, 1, 1, 0}); }
StateVector triplet0_x() { return StateVector::from_amplitudes(2, {1, 0, 0, -1}); }

StateVector tensor(const StateVector& a, const StateVector& b) {
  check_qubit_count(a.n_qubits() + b.n_qubits());
  std::vector<complexd> amps(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (a.amp(i) == complexd{}) continue;
    for (std::size_t j = 0; j < b.dim(); ++j) amps[i * b.dim() + j] = a.amp(i) * b.amp(j);
  }
  return StateVector::from_amplitudes(a.n_qubits() + b.n_qubits(), std::move(amps));
}

complexd inner(const StateVector& a, const StateVector& b) {
  if (a.n_qubits() != b.n_qubits())
    throw std::invalid_argument("inner product dimension mismatch");
  complexd s{};
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a.amp(i)) * b.amp(i);
  return s;
}

StateVector apply_unitary(const StateVector& s, const std::vector<int>& targets,
                          const Matrix& u) {
  detail::check_targets(s.n_qubits(), targets, u.dim());
  auto amps = detail::apply_on_targets(s.amps(), s.n_qubits(), targets, u);
  const double n2 = detail::norm2(amps);
  if (std::abs(n2 - 1.0) > 1e-9)
    throw std::invalid_argument("apply_unitary: matrix is not norm-preserving on this state");
  return StateVector::from_amplitudes(s.n_qubits(), std::move(amps));
}

bool equal_up_to_global_phase(const StateVector& a, const StateVector& b, double tol) {
  return std::abs(inner(a, b)) >= 1.0 - tol;
}

StateVector extract_single_qubit(const StateVector& s, int qubit, double tol) {
  if (qubit < 1 || qubit > s.n_qubits())
    throw std::invalid_argument("extract_single_qubit: qubit index out of range");
  const std::size_t rest = s.dim() / 2;
  const int shift = s.n_qubits() - qubit;
  std::vector<complexd> r0(rest), r1(rest);
  for (std::size_t j = 0; j < rest; ++j) {
    // Insert the qubit's bit at position `shift` of the remainder index j.
    const std::size_t high = (j >> shift) << (shift + 1);
    const std::size_t low = j & ((std::size_t{1} << shift) - 1);
    r0[j] = s.amp(high | low);
    r1[j] = s.amp(high | (std::size_t{1} << shift) | low);
  }
  std::size_t best = 0;
  double best_w = -1.0;
  for (std::size_t j = 0; j < rest; ++j) {
    const double w = std::norm(r0[j]) + std::norm(r1[j]);
    if (w > best_w) { best_w = w; best = j; }
  }
  const complexd a0 = r0[best], a1 = r1[best];
  // Product states have all 2x2 cross determinants zero.
  double cross = 0.0;
  for (std::size_t j = 0; j < rest; ++j)
    cross = std::max(cross, std::abs(r0[j] * a1 - r1[j] * a0));
  if (cross > tol)
    throw std::domain_error("extract_single_qubit: qubit is entangled with the rest");
  return StateVector::from_amplitudes(1, {a0, a1});
}

namespace detail {

double norm2(const std::vector<complexd>& amps) {
  double s = 0.0;
  for (const auto& a : amps) s += std::norm(a);
  return s;
}

void check_targets(int n, const std::vector<int>& targets, int matrix_dim) {
  if (targets.empty()) throw std::invalid_argument("target qubit list is empty");
  if (matrix_dim != (1 << targets.size()))
    throw std::invalid_argument("matrix dimension does not match target count");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 1 || targets[i] > n)
      throw std::invalid_argument("target qubit " + std::to_string(targets[i]) +
                                  " out of range for " + std::to_string(n) + " qubits");
    for (std::size_t j = i + 1; j < targets.size(); ++j)
      if (targets[i] == targets[j])
        throw std::invalid_argument("duplicate target qubit " + std::to_string(targets[i]));
  }
}

std::vector<complexd> apply_on_targets(const std::vector<complexd>& amps, int n,
                                       const std::vector<int>& targets,
                                       const Matrix& m) {
  const int k = static_cast<int>(targets.size());
  const int sub = 1 << k;
  // Bit position (from lsb) of each target; targets[0] is the msb of m's index.
  std::vector<int> shift(k);
  for (int t = 0; t < k; ++t) shift[t] = n - targets[t];

  std::vector<complexd> out(amps.size());
  std::size_t target_mask = 0;
  for (int t = 0; t < k; ++t) target_mask |= std::size_t{1} << shift[t];

  for (std::size_t base = 0; base < amps.size(); ++base) {
    if (base & target_mask) continue;  // enumerate each untouched remainder once
    std::size_t idx[1 << kMaxQubits];
    for (int r = 0; r < sub; ++r) {
      std::size_t b = base;
      for (int t = 0; t < k; ++t)
        if (r & (1 << (k - 1 - t))) b |= std::size_t{1} << shift[t];
      idx[r] = b;
    }
    for (int r = 0; r < sub; ++r) {
      complexd acc{};
      for (int c = 0; c < sub; ++c) acc += m.at(r, c) * amps[idx[c]];
      out[idx[r]] = acc;
    }
  }
  return out;
}

}  // namespace detail

}  // namespace qtel
