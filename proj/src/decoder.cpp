// SPDX-License-Identifier: Apache-2.0
#include "qsmiles/decoder.hpp"

#include <algorithm>

#include "qsmiles/errors.hpp"

namespace qsmiles {

void DecoderConfig::validate() const {
  if (n_layers < 1) throw config_error("decoder: n_layers must be >= 1");
  if (d_hidden < 1 || d_token < 1 || d_model < 1 || n_latent < 1) {
    throw config_error("decoder: non-positive dimension");
  }
  if (n_heads < 1 || d_hidden % n_heads != 0) {
    throw config_error("decoder: hidden dimension " +
                       std::to_string(d_hidden) + " not divisible by " +
                       std::to_string(n_heads) + " attention heads");
  }
  if (vocab < kFirstRegularId) {
    throw config_error("decoder: vocabulary too small (" +
                       std::to_string(vocab) + ")");
  }
}

void DecodeConfig::validate() const {
  if (max_len < 2) throw config_error("decode: max_len must be >= 2");
  if (teacher_forcing < 0.0 || teacher_forcing > 1.0) {
    throw config_error("decode: teacher forcing probability outside [0, 1]");
  }
}

DecoderParams make_decoder(ParamStore& store, const DecoderConfig& cfg,
                           Rng& rng) {
  cfg.validate();
  DecoderParams p;
  p.cfg = cfg;
  p.token_table = store.add_uniform("decoder.tokens", cfg.vocab, cfg.d_token,
                                    rng, -0.1, 0.1);
  p.latent_init = make_dense(store, "decoder.latent_init", cfg.n_latent,
                             2 * cfg.d_hidden, rng);
  for (int l = 0; l < cfg.n_layers; ++l) {
    const int d_in = (l == 0) ? cfg.d_token + cfg.n_latent : cfg.d_hidden;
    p.layers.push_back(make_lstm(store, "decoder.lstm" + std::to_string(l),
                                 d_in, cfg.d_hidden, rng));
  }
  p.attention = make_attention(store, "decoder.attention", cfg.d_hidden,
                               cfg.d_model, cfg.d_hidden, cfg.n_heads, rng);
  p.output = make_dense(store, "decoder.output", 2 * cfg.d_hidden, cfg.vocab,
                        rng);
  return p;
}

DecoderState init_state(Tape& tape, const DecoderParams& p, Tensor latent) {
  DecoderState state;
  Tensor hc = dense(tape, p.latent_init, latent);
  state.h.push_back(tape.slice(hc, 0, p.cfg.d_hidden));
  state.c.push_back(tape.slice(hc, p.cfg.d_hidden, p.cfg.d_hidden));
  const std::vector<double> zeros(static_cast<std::size_t>(p.cfg.d_hidden),
                                  0.0);
  for (int l = 1; l < p.cfg.n_layers; ++l) {
    state.h.push_back(tape.constant(zeros, p.cfg.d_hidden));
    state.c.push_back(tape.constant(zeros, p.cfg.d_hidden));
  }
  return state;
}

StepOut decode_step(Tape& tape, const DecoderParams& p,
                    const DecoderState& state, TokenId prev_token,
                    Tensor latent, const AttentionMemory& memory) {
  if (prev_token < 0 || prev_token >= p.cfg.vocab) {
    throw index_error("decode_step: token " + std::to_string(prev_token) +
                      " outside vocabulary");
  }
  StepOut out;
  out.state.t = state.t + 1;
  Tensor x = tape.concat(tape.param_row(p.token_table, prev_token), latent);
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const LstmOut lo = lstm_cell(tape, p.layers[l], x, state.h[l], state.c[l]);
    out.state.h.push_back(lo.h);
    out.state.c.push_back(lo.c);
    x = lo.h;
  }
  Tensor attended = multi_head_attention(tape, p.attention, x, memory);
  out.logits = dense(tape, p.output, tape.concat(x, attended));
  return out;
}

namespace {

TokenId argmax_token(std::span<const double> logits) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < logits.size(); ++i) {
    if (logits[i] > logits[best]) best = i;
  }
  return static_cast<TokenId>(best);
}

}  // namespace

DecodeResult decode_sequence(Tape& tape, const DecoderParams& p, Tensor latent,
                             const AttentionMemory& memory,
                             const TokenSequence* target,
                             const DecodeConfig& cfg, Rng* rng) {
  cfg.validate();
  if (cfg.teacher_forcing > 0.0 && target == nullptr) {
    throw contract_error(
        "decode_sequence: teacher forcing requires a target sequence");
  }
  if (cfg.teacher_forcing > 0.0 && rng == nullptr) {
    throw contract_error(
        "decode_sequence: teacher forcing requires a random source");
  }
  if (target != nullptr && target->size() < 2) {
    throw degenerate_input_error("decode_sequence: target too short");
  }

  DecodeResult res;
  DecoderState state = init_state(tape, p, latent);
  TokenId input = target ? (*target)[0] : kSosId;
  const std::size_t steps =
      target ? std::min(target->size() - 1, cfg.max_len) : cfg.max_len;

  for (std::size_t s = 0; s < steps; ++s) {
    StepOut step = decode_step(tape, p, state, input, latent, memory);
    state = std::move(step.state);
    const TokenId predicted = argmax_token(tape.value(step.logits));
    res.logits.push_back(step.logits);
    res.tokens.push_back(predicted);
    if (target == nullptr) {
      if (predicted == kEosId) break;
      input = predicted;
    } else if (s + 1 < steps) {
      ++res.scheduled_steps;
      const bool feed_truth =
          cfg.teacher_forcing >= 1.0 ||
          (cfg.teacher_forcing > 0.0 && rng->uniform() < cfg.teacher_forcing);
      if (feed_truth) {
        ++res.teacher_feeds;
        input = (*target)[s + 1];
      } else {
        input = predicted;
      }
    }
  }
  return res;
}

}  // namespace qsmiles
