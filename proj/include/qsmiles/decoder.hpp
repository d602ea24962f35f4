// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "qsmiles/corpus.hpp"
#include "qsmiles/layers.hpp"
#include "qsmiles/tape.hpp"

namespace qsmiles {

struct DecoderConfig {
  int n_layers = 4;
  int d_hidden = 256;
  int d_token = 64;
  int n_heads = 8;
  int n_latent = 5;
  int d_model = 252;
  int vocab = 0;

  void validate() const;
};

// Stacked LSTM with attention over the encoder memory. The decoder keeps
// its own token table, separate from the tensor-train encoder factors.
struct DecoderParams {
  DecoderConfig cfg;
  int token_table = -1;       // vocab x d_token
  DenseParams latent_init;    // n_latent -> 2 * d_hidden (h0 and c0, layer 0)
  std::vector<LstmParams> layers;
  AttentionParams attention;
  DenseParams output;         // [h ; a] -> vocab
};

DecoderParams make_decoder(ParamStore& store, const DecoderConfig& cfg,
                           Rng& rng);

struct DecoderState {
  std::vector<Tensor> h;
  std::vector<Tensor> c;
  int t = 0;
};

// Layer 0's (h, c) come from a linear map of the latent vector; upper
// layers start at zero.
DecoderState init_state(Tape& tape, const DecoderParams& p, Tensor latent);

struct StepOut {
  Tensor logits;  // over the vocabulary
  DecoderState state;
};

// One step: [token embedding ; latent] through the LSTM stack, attention
// from the top hidden state, logits from [h ; a].
StepOut decode_step(Tape& tape, const DecoderParams& p,
                    const DecoderState& state, TokenId prev_token,
                    Tensor latent, const AttentionMemory& memory);

struct DecodeConfig {
  std::size_t max_len = 64;      // hard cap on emitted tokens
  double teacher_forcing = 0.0;  // probability of feeding the ground truth

  void validate() const;
};

struct DecodeResult {
  TokenSequence tokens;         // emitted tokens (greedy argmax per step)
  std::vector<Tensor> logits;   // one per step
  std::size_t teacher_feeds = 0;    // steps that fed the ground truth
  std::size_t scheduled_steps = 0;  // steps where the coin was tossed
};

// With a target: runs one step per target position (after SOS); each input
// after the first feeds the ground-truth previous token with probability
// `teacher_forcing`, otherwise the model's own previous argmax. Without a
// target: pure greedy inference until EOS or max_len. teacher_forcing > 0
// requires a target.
DecodeResult decode_sequence(Tape& tape, const DecoderParams& p, Tensor latent,
                             const AttentionMemory& memory,
                             const TokenSequence* target,
                             const DecodeConfig& cfg, Rng* rng);

}  // namespace qsmiles
