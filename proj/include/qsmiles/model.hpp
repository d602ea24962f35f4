// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "qsmiles/config.hpp"
#include "qsmiles/corpus.hpp"
#include "qsmiles/decoder.hpp"
#include "qsmiles/tt_embedding.hpp"

namespace qsmiles {

// Every trainable piece of the pipeline, bound to one parameter store:
// tensor-train token factors, embedding projection, angle encoder, circuit
// parameters, and the decoder stack.
struct Model {
  TrainConfig cfg;
  int vocab = 0;
  ParamStore store;
  TtEmbeddingParams embedding;
  DenseParams angle_encoder;
  int theta = -1;
  DecoderParams decoder;
};

// Parameters are created in a fixed order and initialized from `rng`, so a
// given (config, vocab, seed) always produces the same model.
Model build_model(const TrainConfig& cfg, int vocab, Rng& rng);

// One molecule through embedding -> quantum compression -> decoding.
struct SampleRun {
  Tensor loss;                   // weighted total (SMILES term is constant)
  double fidelity = 0.0;
  double trash_zero_prob = 0.0;
  double ce = 0.0;
  double similarity = 0.0;
  std::string reconstruction;
  bool degenerate_reset = false;
};

// Teacher-forced pass (training): CE against the target plus a greedy decode
// for the similarity term. alpha is the teacher-forcing probability.
SampleRun run_training_sample(Tape& tape, Model& model,
                              const TokenSequence& seq,
                              const std::string& smiles,
                              const Vocabulary& vocab, double alpha, Rng& rng);

// Inference-only metrics for one molecule (greedy decode, no CE).
struct InferenceRun {
  double fidelity = 0.0;
  double trash_zero_prob = 0.0;
  double similarity = 0.0;
  std::string reconstruction;
};

InferenceRun run_inference_sample(Model& model, const TokenSequence& seq,
                                  const std::string& smiles,
                                  const Vocabulary& vocab);

}  // namespace qsmiles
