// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>

#include "qsmiles/corpus.hpp"
#include "qsmiles/tape.hpp"

namespace qsmiles {

// Minimum number of single-character insertions/deletions/substitutions
// turning a into b. Two-row dynamic program.
std::size_t levenshtein_distance(const std::string& a, const std::string& b);

// 1 - d(a, b) / max(|a|, |b|); two empty strings count as identical.
double levenshtein_similarity(const std::string& a, const std::string& b);

// Weights of the composite training objective.
struct LossWeights {
  double fidelity = 1.0;
  double ce = 1.0;
  double smiles = 0.5;
  double trash = 0.5;

  void validate() const;
};

// Mean cross-entropy over the target tokens (positions after SOS), with PAD
// excluded from both numerator and denominator. step_logits[s] must score
// target[s + 1]. Throws degenerate_input_error when no non-PAD target
// remains.
Tensor sequence_ce(Tape& tape, std::span<const Tensor> step_logits,
                   const TokenSequence& target);

// Weighted sum of the loss terms. The SMILES similarity term is a plain
// number (greedy argmax decoding is not differentiable), so it shifts the
// reported total without contributing any gradient; the fidelity, CE and
// trash terms carry gradients.
Tensor total_loss(Tape& tape, Tensor fidelity_loss, Tensor ce,
                  double smiles_loss, Tensor trash_loss,
                  const LossWeights& weights);

}  // namespace qsmiles
