// SPDX-License-Identifier: Apache-2.0
#include "qsmiles/objective.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "qsmiles/errors.hpp"

namespace qsmiles {

std::size_t levenshtein_distance(const std::string& a, const std::string& b) {
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  if (m == 0) return n;
  if (n == 0) return m;
  std::vector<std::size_t> row(n + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= m; ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= n; ++j) {
      const std::size_t up = row[j];
      const std::size_t subst = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, subst});
      diag = up;
    }
  }
  return row[n];
}

double levenshtein_similarity(const std::string& a, const std::string& b) {
  if (a.empty() && b.empty()) return 1.0;
  const auto longest = std::max(a.size(), b.size());
  return 1.0 - static_cast<double>(levenshtein_distance(a, b)) /
                   static_cast<double>(longest);
}

void LossWeights::validate() const {
  if (fidelity < 0 || ce < 0 || smiles < 0 || trash < 0) {
    throw config_error("loss weights must be non-negative");
  }
  if (fidelity == 0 && ce == 0 && smiles == 0 && trash == 0) {
    throw config_error("at least one loss weight must be positive");
  }
}

Tensor sequence_ce(Tape& tape, std::span<const Tensor> step_logits,
                   const TokenSequence& target) {
  if (target.size() < 2) {
    throw degenerate_input_error("sequence_ce: target has no positions");
  }
  if (step_logits.size() < target.size() - 1) {
    throw shape_error("sequence_ce: " + std::to_string(step_logits.size()) +
                      " logit steps for " + std::to_string(target.size() - 1) +
                      " target positions");
  }
  std::vector<Tensor> terms;
  for (std::size_t s = 0; s + 1 < target.size(); ++s) {
    const TokenId t = target[s + 1];
    if (t == kPadId) continue;
    terms.push_back(tape.cross_entropy(step_logits[s], t));
  }
  if (terms.empty()) {
    throw degenerate_input_error("sequence_ce: every target position is PAD");
  }
  return tape.affine(tape.add_n(terms),
                     1.0 / static_cast<double>(terms.size()), 0.0);
}

Tensor total_loss(Tape& tape, Tensor fidelity_loss, Tensor ce,
                  double smiles_loss, Tensor trash_loss,
                  const LossWeights& weights) {
  weights.validate();
  const Tensor terms[4] = {
      tape.affine(fidelity_loss, weights.fidelity, 0.0),
      tape.affine(ce, weights.ce, 0.0),
      tape.scalar(weights.smiles * smiles_loss),
      tape.affine(trash_loss, weights.trash, 0.0),
  };
  return tape.add_n(terms);
}

}  // namespace qsmiles
