// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qsmiles/checkpoint.hpp"
#include "qsmiles/metrics.hpp"
#include "qsmiles/model.hpp"

namespace qsmiles {

struct EvalMolecule {
  std::string smiles;
  std::string reconstruction;
  double fidelity = 0.0;
  double similarity = 0.0;
  double trash_zero_prob = 0.0;
};

struct EvalSummary {
  double fidelity = 0.0;
  double similarity = 0.0;
  double trash_zero_prob = 0.0;
  std::vector<EvalMolecule> molecules;
};

// Drives the full hybrid loop: shuffled mini-batches, teacher-forced
// decoding with the scheduled-sampling rate alpha(epoch), the four-term
// weighted loss, parameter-shift + tape backprop, Adam with per-epoch
// cosine-annealed learning rate, a metrics row and a checkpoint per epoch.
class Trainer {
 public:
  // Fresh run. Model parameters are drawn from cfg.seed.
  Trainer(const TrainConfig& cfg, const Vocabulary& vocab);

  // Continues a saved run; cfg/vocab/RNG come from the checkpoint.
  static Trainer from_checkpoint(const std::string& path);

  // Runs until cfg.epochs, appending one metrics row per epoch to
  // cfg.metrics_path and rewriting cfg.checkpoint_path. Returns every row
  // it produced. Aborts with train_error if a batch loss goes non-finite.
  std::vector<EpochMetrics> train(const Corpus& corpus);

  // Greedy inference over a corpus.
  EvalSummary evaluate(const Corpus& corpus);
  EvalMolecule reconstruct(const std::string& smiles);

  // Optional per-epoch observer (progress printing).
  using EpochObserver = std::function<void(const EpochMetrics&)>;
  void set_observer(EpochObserver obs) { observer_ = std::move(obs); }

  const Model& model() const { return model_; }
  Model& model() { return model_; }
  const Vocabulary& vocab() const { return vocab_; }
  std::uint64_t completed_epochs() const { return epoch_; }

 private:
  TrainConfig cfg_;
  Vocabulary vocab_;
  Rng rng_;
  Model model_;
  AdamOptimizer adam_;
  std::uint64_t epoch_ = 0;
  std::uint64_t global_step_ = 0;
  EpochObserver observer_;

  Trainer(const Checkpoint& ckpt);
  void save(const std::string& path) const;
  void check_corpus(const Corpus& corpus) const;
};

}  // namespace qsmiles
