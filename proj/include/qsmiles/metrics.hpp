// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qsmiles {

// One row of the training log. loss_* are training-time batch means; the
// fidelity/similarity/trash_zero_prob columns come from a full greedy
// inference pass at the end of the epoch (the same computation `eval` runs).
struct EpochMetrics {
  int epoch = 0;            // 1-based
  std::uint64_t step = 0;   // global optimizer steps completed
  double lr = 0.0;
  double loss_total = 0.0;
  double loss_fidelity = 0.0;
  double loss_ce = 0.0;
  double loss_smiles = 0.0;
  double loss_trash = 0.0;
  double fidelity = 0.0;
  double similarity = 0.0;
  double trash_zero_prob = 0.0;
};

// Column order is fixed; doubles are written with 17 significant digits so
// identical runs produce identical bytes.
std::string metrics_csv_header();
std::string metrics_csv_row(const EpochMetrics& m);

std::vector<EpochMetrics> read_metrics_csv(const std::string& path);

}  // namespace qsmiles
