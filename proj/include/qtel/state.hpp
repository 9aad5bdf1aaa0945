#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

// Dense complex vectors and matrices for few-qubit simulation.
//
// Qubit convention: qubits are numbered from 1 and qubit 1 is the most
// significant bit of a basis index, so |q1 q2 .. qn> lives at index
// q1*2^(n-1) + q2*2^(n-2) + .. + qn.  Everything downstream (pulses,
// measurements, protocols) relies on this ordering.

namespace qtel {

using complexd = std::complex<double>;

inline constexpr int kMaxQubits = 8;
inline constexpr double kNormTol = 1e-12;     // norm deviation allowed on states
inline constexpr double kCompareTol = 1e-10;  // default comparison tolerance

// Dense square complex matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int dim) : dim_(dim), e_(static_cast<std::size_t>(dim) * dim) {}
  Matrix(int dim, std::vector<complexd> entries);

  static Matrix identity(int dim);

  int dim() const { return dim_; }
  complexd& at(int r, int c) { return e_[static_cast<std::size_t>(r) * dim_ + c]; }
  const complexd& at(int r, int c) const { return e_[static_cast<std::size_t>(r) * dim_ + c]; }
  const std::vector<complexd>& entries() const { return e_; }

  Matrix operator*(const Matrix& rhs) const;
  Matrix operator*(complexd s) const;
  Matrix operator+(const Matrix& rhs) const;
  Matrix operator-(const Matrix& rhs) const;
  Matrix adjoint() const;

  double max_abs_diff(const Matrix& rhs) const;
  bool is_unitary(double tol) const;

 private:
  int dim_ = 0;
  std::vector<complexd> e_;
};

inline Matrix operator*(complexd s, const Matrix& m) { return m * s; }

Matrix kron(const Matrix& a, const Matrix& b);

// 2x2 constants. pauli() accepts 'i', 'x', 'y', 'z'.
Matrix pauli(char axis);
Matrix hadamard();

// Normalized pure state of 1..kMaxQubits qubits.  Value type: every operation
// returns a fresh state and leaves its inputs untouched.
class StateVector {
 public:
  // Empty placeholder (0 qubits); every real state comes from a factory.
  StateVector() = default;

  static StateVector basis(int n_qubits, std::size_t index);
  // label is one character per qubit, msb first; accepts '0' '1' '+' '-'.
  static StateVector basis(const std::string& label);
  // Normalizes; rejects zero-norm input.
  static StateVector from_amplitudes(int n_qubits, std::vector<complexd> amps);

  int n_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<complexd>& amps() const { return amps_; }
  complexd amp(std::size_t i) const { return amps_[i]; }

 private:
  StateVector(int n, std::vector<complexd> amps) : n_(n), amps_(std::move(amps)) {}
  int n_ = 0;
  std::vector<complexd> amps_;
};

// Common one- and two-qubit states.
StateVector ket0();
StateVector ket1();
StateVector ket_plus();
StateVector ket_minus();
StateVector singlet();      // (|01> - |10>)/sqrt(2)
StateVector triplet0();     // (|01> + |10>)/sqrt(2)
StateVector triplet0_x();   // (|+-> + |-+>)/sqrt(2) = (|00> - |11>)/sqrt(2)

// a's qubits become the leading (most significant) block.
StateVector tensor(const StateVector& a, const StateVector& b);

// Conjugate-linear in the first argument.
complexd inner(const StateVector& a, const StateVector& b);

// Applies u on the given qubits (first target supplies the msb of u's index).
// u must be norm-preserving on the state; the result is renormalized to keep
// the norm invariant tight over long pulse sequences.
StateVector apply_unitary(const StateVector& s, const std::vector<int>& targets,
                          const Matrix& u);

// |<a|b>| >= 1 - tol for normalized states.
bool equal_up_to_global_phase(const StateVector& a, const StateVector& b,
                              double tol = kCompareTol);

// Recovers the state of one qubit from a product state; rejects entangled
// input (rank check residual above tol).
StateVector extract_single_qubit(const StateVector& s, int qubit,
                                 double tol = 1e-9);

namespace detail {
// Raw application of an arbitrary (not necessarily unitary) matrix on the
// given qubits; no normalization.  Shared by gates and projectors.
std::vector<complexd> apply_on_targets(const std::vector<complexd>& amps, int n,
                                       const std::vector<int>& targets,
                                       const Matrix& m);
double norm2(const std::vector<complexd>& amps);
void check_targets(int n, const std::vector<int>& targets, int matrix_dim);
}  // namespace detail

}  // namespace qtel
