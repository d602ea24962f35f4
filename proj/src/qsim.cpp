// SPDX-License-Identifier: Apache-2.0
#include "qsmiles/qsim.hpp"

#include <cmath>
#include <string>

#include "qsmiles/errors.hpp"

namespace qsmiles {

namespace {
constexpr int kMaxQubits = 14;
}

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw config_error("statevector: qubit count " + std::to_string(n_qubits) +
                       " outside [1, " + std::to_string(kMaxQubits) + "]");
  }
  amps_.assign(std::size_t{1} << n_qubits, cdouble{0.0, 0.0});
  amps_[0] = cdouble{1.0, 0.0};
}

void StateVector::check_qubit(int qubit) const {
  if (qubit < 0 || qubit >= n_qubits_) {
    throw index_error("statevector: qubit " + std::to_string(qubit) +
                      " out of range for " + std::to_string(n_qubits_) +
                      " qubits");
  }
}

void StateVector::apply_ry(int qubit, double angle) {
  check_qubit(qubit);
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  const std::size_t bit = std::size_t{1} << qubit;
  const std::size_t n = amps_.size();
  for (std::size_t base = 0; base < n; base += 2 * bit) {
    for (std::size_t low = 0; low < bit; ++low) {
      const std::size_t i0 = base + low;
      const std::size_t i1 = i0 + bit;
      const cdouble a0 = amps_[i0];
      const cdouble a1 = amps_[i1];
      amps_[i0] = c * a0 - s * a1;
      amps_[i1] = s * a0 + c * a1;
    }
  }
}

void StateVector::apply_rz(int qubit, double angle) {
  check_qubit(qubit);
  const cdouble p0 = std::polar(1.0, -angle / 2.0);
  const cdouble p1 = std::polar(1.0, angle / 2.0);
  const std::size_t bit = std::size_t{1} << qubit;
  const std::size_t n = amps_.size();
  for (std::size_t i = 0; i < n; ++i) {
    amps_[i] *= (i & bit) ? p1 : p0;
  }
}

void StateVector::apply_crz(int control, int target, double angle) {
  check_qubit(control);
  check_qubit(target);
  if (control == target) {
    throw index_error("crz: control and target both " +
                      std::to_string(control));
  }
  const cdouble p0 = std::polar(1.0, -angle / 2.0);
  const cdouble p1 = std::polar(1.0, angle / 2.0);
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  const std::size_t n = amps_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i & cbit) amps_[i] *= (i & tbit) ? p1 : p0;
  }
}

double StateVector::norm_sq() const {
  double total = 0.0;
  for (const cdouble& a : amps_) total += std::norm(a);
  return total;
}

std::size_t StateVector::qubit_mask(std::span<const int> qubits) const {
  std::size_t mask = 0;
  for (int q : qubits) {
    check_qubit(q);
    const std::size_t bit = std::size_t{1} << q;
    if (mask & bit) {
      throw index_error("statevector: duplicate qubit " + std::to_string(q));
    }
    mask |= bit;
  }
  return mask;
}

std::vector<double> StateVector::z_expectations(
    std::span<const int> qubits) const {
  qubit_mask(qubits);  // validates bounds and uniqueness
  std::vector<double> expectations(qubits.size(), 0.0);
  const std::size_t n = amps_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double p = std::norm(amps_[i]);
    if (p == 0.0) continue;
    for (std::size_t k = 0; k < qubits.size(); ++k) {
      expectations[k] += (i >> qubits[k]) & 1 ? -p : p;
    }
  }
  return expectations;
}

double StateVector::zero_projection_prob(std::span<const int> qubits) const {
  const std::size_t mask = qubit_mask(qubits);
  double prob = 0.0;
  const std::size_t n = amps_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if ((i & mask) == 0) prob += std::norm(amps_[i]);
  }
  return prob;
}

double StateVector::project_zero(std::span<const int> qubits) {
  const std::size_t mask = qubit_mask(qubits);
  double prob = 0.0;
  const std::size_t n = amps_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if ((i & mask) == 0) {
      prob += std::norm(amps_[i]);
    } else {
      amps_[i] = cdouble{0.0, 0.0};
    }
  }
  if (prob > 0.0) {
    const double inv = 1.0 / std::sqrt(prob);
    for (std::size_t i = 0; i < n; ++i) {
      if ((i & mask) == 0) amps_[i] *= inv;
    }
  }
  return prob;
}

StateVector zero_state(int n_qubits) { return StateVector(n_qubits); }

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw shape_error("fidelity: qubit counts differ (" +
                      std::to_string(a.n_qubits()) + " vs " +
                      std::to_string(b.n_qubits()) + ")");
  }
  cdouble overlap{0.0, 0.0};
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i) {
    overlap += std::conj(a.amp(i)) * b.amp(i);
  }
  return std::norm(overlap);
}

}  // namespace qsmiles
