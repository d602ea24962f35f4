// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsmiles/config.hpp"
#include "qsmiles/params.hpp"

namespace qsmiles {

// Binary snapshot of a run: configuration, vocabulary, progress counters,
// the RNG stream, and every parameter with its Adam moments. Little-endian
// doubles are written raw, so save -> load -> save is byte-identical.
struct Checkpoint {
  static constexpr std::uint32_t kVersion = 1;

  TrainConfig config;
  std::vector<std::string> vocab_tokens;  // regular tokens, id order
  std::uint64_t epoch = 0;                // completed epochs
  std::uint64_t global_step = 0;
  std::uint64_t adam_steps = 0;
  std::string rng_state;

  struct SavedParam {
    std::string name;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::vector<double> value;
    std::vector<double> m;
    std::vector<double> v;
  };
  std::vector<SavedParam> params;

  // Copies a live store into this snapshot / back into one. apply_to
  // requires that every saved parameter exists with the same shape.
  void capture_params(const ParamStore& store);
  void apply_to(ParamStore& store) const;
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);

// Throws load_error on corrupt/truncated files or version mismatches.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace qsmiles
