// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "qsmiles/objective.hpp"
#include "qsmiles/qae.hpp"

namespace qsmiles {

// Every knob of a training run. Field names double as config-file keys
// (flat key=value lines, '#' comments); unknown keys are rejected.
struct TrainConfig {
  // run
  int epochs = 50;
  int batch_size = 1024;
  double lr = 1e-6;
  double lr_min = 0.0;
  std::uint64_t seed = 1;
  std::size_t max_len = 64;
  // tensor-train embedding
  int order = 4;
  int d_site = 4;
  int d_model = 252;
  // quantum autoencoder
  QaeConfig qae;  // n_total=8, n_latent=5, n_trash=3, n_layers=5
  // decoder
  int decoder_layers = 4;
  int d_hidden = 256;
  int n_heads = 8;
  int d_token = 64;
  // composite loss and teacher-forcing schedule
  LossWeights weights;
  double alpha_min = 0.5;
  double t_anneal = 25.0;
  // outputs
  std::string checkpoint_path = "checkpoint.bin";
  std::string metrics_path = "metrics.csv";

  void validate() const;

  // One key=value line per field, in a fixed order (also the run header).
  std::string describe() const;

  // Sets a single field by key. Throws config_error on unknown keys or
  // unparseable values.
  void set(const std::string& key, const std::string& value);

  // Applies key=value lines from a file over the current values.
  void apply_file(const std::string& path);

  // Parses key=value lines from text (used by checkpoints).
  void apply_text(const std::string& text);

  // "paper" (the full-scale defaults above), "toy" (smoke-test scale) or
  // "overfit" (32-molecule memorization scale).
  static TrainConfig preset(const std::string& name);
};

// Teacher-forcing probability at a 0-based epoch index:
// max(alpha_min, 1 - epoch / t_anneal).
double teacher_forcing_alpha(const TrainConfig& cfg, int epoch);

}  // namespace qsmiles
