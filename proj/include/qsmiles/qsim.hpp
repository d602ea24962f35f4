// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <span>
#include <vector>

namespace qsmiles {

using cdouble = std::complex<double>;

// Dense statevector over n qubits. Qubit ordering is little-endian: qubit 0
// is the least significant bit of the basis index. Gates mutate in place
// with stride arithmetic; no full unitary matrices are ever built here.
class StateVector {
 public:
  // |0...0> on n qubits. 1 <= n <= 14.
  explicit StateVector(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amps_.size(); }

  std::span<const cdouble> amplitudes() const { return amps_; }
  cdouble& amp(std::size_t i) { return amps_[i]; }
  const cdouble& amp(std::size_t i) const { return amps_[i]; }

  // RY(t) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]]
  void apply_ry(int qubit, double angle);
  // RZ(t) = diag(e^{-it/2}, e^{+it/2})
  void apply_rz(int qubit, double angle);
  // RZ on target where the control bit is 1.
  void apply_crz(int control, int target, double angle);

  double norm_sq() const;

  // Per-qubit <Z> = P(bit=0) - P(bit=1), exact (no sampling).
  std::vector<double> z_expectations(std::span<const int> qubits) const;

  // Probability that every listed qubit reads 0.
  double zero_projection_prob(std::span<const int> qubits) const;

  // Projects the listed qubits onto |0>, renormalizes, and returns the
  // pre-projection probability. A probability of ~0 leaves the amplitudes
  // unnormalized; callers must treat that sample as degenerate.
  double project_zero(std::span<const int> qubits);

 private:
  int n_qubits_;
  std::vector<cdouble> amps_;

  void check_qubit(int qubit) const;
  std::size_t qubit_mask(std::span<const int> qubits) const;
};

StateVector zero_state(int n_qubits);

// |<a|b>|^2. Requires matching qubit counts.
double fidelity(const StateVector& a, const StateVector& b);

}  // namespace qsmiles
