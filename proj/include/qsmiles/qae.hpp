// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "qsmiles/layers.hpp"
#include "qsmiles/qsim.hpp"
#include "qsmiles/tape.hpp"

namespace qsmiles {

// Qubit split for the quantum autoencoder. Latent qubits are the low
// indices, trash qubits the high ones.
struct QaeConfig {
  int n_total = 8;
  int n_latent = 5;
  int n_trash = 3;
  int n_layers = 5;

  void validate() const;
  std::vector<int> latent_qubits() const;
  std::vector<int> trash_qubits() const;

  // RY + RZ per qubit per layer.
  int ansatz_param_count() const { return n_layers * n_total * 2; }
  // Ansatz parameters plus the data-loading RY angles.
  int rotation_param_count() const { return ansatz_param_count() + n_total; }
};

// Angle layout: theta[layer][qubit][0] drives RY, [1] drives RZ, flattened
// row-major. The entangling CRZ ring uses a fixed pi/2 angle and carries no
// parameters.
inline constexpr double kEntangleAngle = 1.5707963267948966;

// theta uniform in [-0.1, 0.1].
int make_circuit_params(ParamStore& store, const QaeConfig& cfg, Rng& rng);

// Data-loading layer: RY(angles[q]) on every qubit.
void apply_data_layer(StateVector& state, std::span<const double> angles,
                      bool adjoint = false);

// Per layer: RY and RZ on every qubit, then a CRZ ring q -> (q+1) mod n.
// The adjoint applies exact inverses in reverse order.
void apply_ansatz(StateVector& state, std::span<const double> theta,
                  const QaeConfig& cfg, bool adjoint = false);

// One compression/reconstruction pass.
struct QaeForward {
  StateVector psi_in;          // reference state, before the encoding ansatz
  StateVector psi_out;         // after reset + adjoint ansatz
  double fidelity = 0.0;       // |<psi_in|psi_out>|^2 (0 on degenerate reset)
  double trash_zero_prob = 0.0;
  std::vector<double> latent;  // <Z> on latent qubits of the encoded state
  bool degenerate_reset = false;
};

// Protocol on an arbitrary prepared input state: encode with the ansatz,
// read trash probability and latent expectations, project the trash qubits
// to |0>, decode with the adjoint ansatz, compare against the input.
QaeForward qae_forward_state(const StateVector& psi_in,
                             std::span<const double> theta,
                             const QaeConfig& cfg);

// Full pipeline from data-loading angles: psi_in = RY-layer(angles)|0...0>.
QaeForward qae_forward(std::span<const double> angles,
                       std::span<const double> theta, const QaeConfig& cfg);

inline double fidelity_loss(const QaeForward& f) { return 1.0 - f.fidelity; }
inline double trash_loss(const QaeForward& f) { return 1.0 - f.trash_zero_prob; }

// Observable vector consumed by the classical tape:
// [fidelity, trash_zero_prob, latent...], length 2 + n_latent.
std::vector<double> qae_observables(std::span<const double> angles,
                                    std::span<const double> theta,
                                    const QaeConfig& cfg);
std::vector<double> qae_observables_state(const StateVector& psi_in,
                                          std::span<const double> theta,
                                          const QaeConfig& cfg);

// Parameter-shift gradients. Each observable is an expectation whose
// rotation parameters enter once, so d(obs)/d(param) =
// (obs(param + pi/2) - obs(param - pi/2)) / 2 exactly; `upstream` carries
// d(loss)/d(obs) and the results are chained into theta_grad/angle_grad.
void param_shift_backward(std::span<const double> angles,
                          std::span<const double> theta, const QaeConfig& cfg,
                          std::span<const double> upstream,
                          std::span<double> angle_grad,
                          std::span<double> theta_grad);

// Variant for a fixed input state: only theta gradients exist.
void param_shift_backward_state(const StateVector& psi_in,
                                std::span<const double> theta,
                                const QaeConfig& cfg,
                                std::span<const double> upstream,
                                std::span<double> theta_grad);

// Trainable map from the pooled embedding to data-loading angles:
// pi * tanh(W z + b), always inside [-pi, pi].
DenseParams make_angle_encoder(ParamStore& store, int d_model, int n_total,
                               Rng& rng);
Tensor encode_angles(Tape& tape, const DenseParams& p, Tensor z);

// Binds the quantum pipeline to a tape: forward evaluates qae_observables,
// backward runs the parameter-shift rule and accumulates theta gradients
// into the store parameter `theta_param`.
Tensor quantum_pipeline(Tape& tape, ParamStore& store, int theta_param,
                        const QaeConfig& cfg, Tensor angles);

}  // namespace qsmiles
