// SPDX-License-Identifier: Apache-2.0
#include "qsmiles/qae.hpp"

#include <cmath>
#include <string>

#include "qsmiles/errors.hpp"

namespace qsmiles {

namespace {
// Reset probabilities below this are treated as a degenerate reset.
constexpr double kDegenerateProb = 1e-12;
constexpr double kPi = 3.14159265358979323846;
}  // namespace

void QaeConfig::validate() const {
  if (n_total < 1 || n_total > 14) {
    throw config_error("qae: n_total " + std::to_string(n_total) +
                       " outside [1, 14]");
  }
  if (n_latent < 1 || n_trash < 0 || n_latent + n_trash != n_total) {
    throw config_error("qae: n_latent (" + std::to_string(n_latent) +
                       ") + n_trash (" + std::to_string(n_trash) +
                       ") != n_total (" + std::to_string(n_total) + ")");
  }
  if (n_layers < 1) {
    throw config_error("qae: n_layers must be >= 1, got " +
                       std::to_string(n_layers));
  }
}

std::vector<int> QaeConfig::latent_qubits() const {
  std::vector<int> q;
  for (int i = 0; i < n_latent; ++i) q.push_back(i);
  return q;
}

std::vector<int> QaeConfig::trash_qubits() const {
  std::vector<int> q;
  for (int i = n_latent; i < n_total; ++i) q.push_back(i);
  return q;
}

int make_circuit_params(ParamStore& store, const QaeConfig& cfg, Rng& rng) {
  cfg.validate();
  return store.add_uniform("qae.theta", cfg.n_layers * cfg.n_total, 2, rng,
                           -0.1, 0.1);
}

void apply_data_layer(StateVector& state, std::span<const double> angles,
                      bool adjoint) {
  if (static_cast<int>(angles.size()) != state.n_qubits()) {
    throw shape_error("data layer: " + std::to_string(angles.size()) +
                      " angles for " + std::to_string(state.n_qubits()) +
                      " qubits");
  }
  for (int q = 0; q < state.n_qubits(); ++q) {
    state.apply_ry(q, adjoint ? -angles[static_cast<std::size_t>(q)]
                              : angles[static_cast<std::size_t>(q)]);
  }
}

void apply_ansatz(StateVector& state, std::span<const double> theta,
                  const QaeConfig& cfg, bool adjoint) {
  cfg.validate();
  if (state.n_qubits() != cfg.n_total) {
    throw shape_error("ansatz: state has " + std::to_string(state.n_qubits()) +
                      " qubits, config wants " + std::to_string(cfg.n_total));
  }
  if (static_cast<int>(theta.size()) != cfg.ansatz_param_count()) {
    throw shape_error("ansatz: " + std::to_string(theta.size()) +
                      " parameters, expected " +
                      std::to_string(cfg.ansatz_param_count()));
  }
  const int n = cfg.n_total;
  auto angle = [&](int layer, int qubit, int which) {
    return theta[static_cast<std::size_t>((layer * n + qubit) * 2 + which)];
  };
  if (!adjoint) {
    for (int layer = 0; layer < cfg.n_layers; ++layer) {
      for (int q = 0; q < n; ++q) {
        state.apply_ry(q, angle(layer, q, 0));
        state.apply_rz(q, angle(layer, q, 1));
      }
      if (n > 1) {
        for (int q = 0; q < n; ++q) {
          state.apply_crz(q, (q + 1) % n, kEntangleAngle);
        }
      }
    }
  } else {
    for (int layer = cfg.n_layers - 1; layer >= 0; --layer) {
      if (n > 1) {
        for (int q = n - 1; q >= 0; --q) {
          state.apply_crz(q, (q + 1) % n, -kEntangleAngle);
        }
      }
      for (int q = n - 1; q >= 0; --q) {
        state.apply_rz(q, -angle(layer, q, 1));
        state.apply_ry(q, -angle(layer, q, 0));
      }
    }
  }
}

QaeForward qae_forward_state(const StateVector& psi_in,
                             std::span<const double> theta,
                             const QaeConfig& cfg) {
  QaeForward out{psi_in, psi_in, 0.0, 0.0, {}, false};
  StateVector& work = out.psi_out;
  apply_ansatz(work, theta, cfg);

  const auto latent = cfg.latent_qubits();
  const auto trash = cfg.trash_qubits();
  out.latent = work.z_expectations(latent);
  out.trash_zero_prob =
      trash.empty() ? 1.0 : work.zero_projection_prob(trash);

  const double p = trash.empty() ? 1.0 : work.project_zero(trash);
  if (p < kDegenerateProb) {
    out.degenerate_reset = true;
    out.fidelity = 0.0;
    return out;
  }
  apply_ansatz(work, theta, cfg, /*adjoint=*/true);
  out.fidelity = fidelity(out.psi_in, work);
  return out;
}

QaeForward qae_forward(std::span<const double> angles,
                       std::span<const double> theta, const QaeConfig& cfg) {
  StateVector psi_in(cfg.n_total);
  apply_data_layer(psi_in, angles);
  return qae_forward_state(psi_in, theta, cfg);
}

namespace {

std::vector<double> pack_observables(const QaeForward& f) {
  std::vector<double> obs;
  obs.reserve(2 + f.latent.size());
  obs.push_back(f.fidelity);
  obs.push_back(f.trash_zero_prob);
  obs.insert(obs.end(), f.latent.begin(), f.latent.end());
  return obs;
}

}  // namespace

std::vector<double> qae_observables(std::span<const double> angles,
                                    std::span<const double> theta,
                                    const QaeConfig& cfg) {
  return pack_observables(qae_forward(angles, theta, cfg));
}

std::vector<double> qae_observables_state(const StateVector& psi_in,
                                          std::span<const double> theta,
                                          const QaeConfig& cfg) {
  return pack_observables(qae_forward_state(psi_in, theta, cfg));
}

namespace {

double chain(std::span<const double> upstream, const std::vector<double>& plus,
             const std::vector<double>& minus) {
  double g = 0.0;
  for (std::size_t i = 0; i < upstream.size(); ++i) {
    if (upstream[i] != 0.0) g += upstream[i] * 0.5 * (plus[i] - minus[i]);
  }
  return g;
}

}  // namespace

void param_shift_backward(std::span<const double> angles,
                          std::span<const double> theta, const QaeConfig& cfg,
                          std::span<const double> upstream,
                          std::span<double> angle_grad,
                          std::span<double> theta_grad) {
  bool upstream_all_zero = true;
  for (double u : upstream) {
    if (u != 0.0) {
      upstream_all_zero = false;
      break;
    }
  }
  if (upstream_all_zero) return;

  std::vector<double> shifted(theta.begin(), theta.end());
  for (std::size_t k = 0; k < shifted.size(); ++k) {
    shifted[k] = theta[k] + kPi / 2.0;
    const auto plus = qae_observables(angles, shifted, cfg);
    shifted[k] = theta[k] - kPi / 2.0;
    const auto minus = qae_observables(angles, shifted, cfg);
    shifted[k] = theta[k];
    theta_grad[k] += chain(upstream, plus, minus);
  }
  std::vector<double> shifted_angles(angles.begin(), angles.end());
  for (std::size_t q = 0; q < shifted_angles.size(); ++q) {
    shifted_angles[q] = angles[q] + kPi / 2.0;
    const auto plus = qae_observables(shifted_angles, theta, cfg);
    shifted_angles[q] = angles[q] - kPi / 2.0;
    const auto minus = qae_observables(shifted_angles, theta, cfg);
    shifted_angles[q] = angles[q];
    angle_grad[q] += chain(upstream, plus, minus);
  }
}

void param_shift_backward_state(const StateVector& psi_in,
                                std::span<const double> theta,
                                const QaeConfig& cfg,
                                std::span<const double> upstream,
                                std::span<double> theta_grad) {
  std::vector<double> shifted(theta.begin(), theta.end());
  for (std::size_t k = 0; k < shifted.size(); ++k) {
    shifted[k] = theta[k] + kPi / 2.0;
    const auto plus = qae_observables_state(psi_in, shifted, cfg);
    shifted[k] = theta[k] - kPi / 2.0;
    const auto minus = qae_observables_state(psi_in, shifted, cfg);
    shifted[k] = theta[k];
    theta_grad[k] += chain(upstream, plus, minus);
  }
}

DenseParams make_angle_encoder(ParamStore& store, int d_model, int n_total,
                               Rng& rng) {
  return make_dense(store, "qae.angle_encoder", d_model, n_total, rng);
}

Tensor encode_angles(Tape& tape, const DenseParams& p, Tensor z) {
  return tape.affine(tape.tanh(dense(tape, p, z)), kPi, 0.0);
}

Tensor quantum_pipeline(Tape& tape, ParamStore& store, int theta_param,
                        const QaeConfig& cfg, Tensor angles) {
  cfg.validate();
  Param* theta = &store.at(theta_param);
  tape.bind_quantum(
      [theta, cfg](std::span<const double> a) {
        return qae_observables(a, theta->value, cfg);
      },
      [theta, cfg](std::span<const double> a, std::span<const double> up,
                   std::span<double> angle_grad) {
        param_shift_backward(a, theta->value, cfg, up, angle_grad,
                             theta->grad);
      });
  return tape.quantum(angles);
}

}  // namespace qsmiles
