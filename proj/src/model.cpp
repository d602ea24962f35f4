// SPDX-License-Identifier: Apache-2.0
#include "qsmiles/model.hpp"

#include "qsmiles/errors.hpp"
#include "qsmiles/objective.hpp"

namespace qsmiles {

Model build_model(const TrainConfig& cfg, int vocab, Rng& rng) {
  cfg.validate();
  Model m;
  m.cfg = cfg;
  m.vocab = vocab;
  m.embedding = make_tt_embedding(m.store, vocab, cfg.order, cfg.d_site,
                                  cfg.d_model, rng);
  m.angle_encoder = make_angle_encoder(m.store, cfg.d_model, cfg.qae.n_total,
                                       rng);
  m.theta = make_circuit_params(m.store, cfg.qae, rng);
  DecoderConfig dc;
  dc.n_layers = cfg.decoder_layers;
  dc.d_hidden = cfg.d_hidden;
  dc.d_token = cfg.d_token;
  dc.n_heads = cfg.n_heads;
  dc.n_latent = cfg.qae.n_latent;
  dc.d_model = cfg.d_model;
  dc.vocab = vocab;
  m.decoder = make_decoder(m.store, dc, rng);
  return m;
}

namespace {

struct QuantumStage {
  Tensor fidelity;
  Tensor trash_prob;
  Tensor latent;
  SequenceEmbedding emb;
};

QuantumStage forward_quantum(Tape& tape, Model& model,
                             const TokenSequence& seq) {
  QuantumStage q;
  q.emb = embed_sequence(tape, model.embedding, seq);
  Tensor angles = encode_angles(tape, model.angle_encoder, q.emb.pooled);
  Tensor obs =
      quantum_pipeline(tape, model.store, model.theta, model.cfg.qae, angles);
  q.fidelity = tape.slice(obs, 0, 1);
  q.trash_prob = tape.slice(obs, 1, 1);
  q.latent = tape.slice(obs, 2, model.cfg.qae.n_latent);
  return q;
}

}  // namespace

SampleRun run_training_sample(Tape& tape, Model& model,
                              const TokenSequence& seq,
                              const std::string& smiles,
                              const Vocabulary& vocab, double alpha,
                              Rng& rng) {
  QuantumStage q = forward_quantum(tape, model, seq);
  AttentionMemory mem =
      project_memory(tape, model.decoder.attention, q.emb.memory, q.emb.mask);

  DecodeConfig teacher_cfg;
  teacher_cfg.max_len = model.cfg.max_len;
  teacher_cfg.teacher_forcing = alpha;
  DecodeResult teacher =
      decode_sequence(tape, model.decoder, q.latent, mem, &seq, teacher_cfg, &rng);
  Tensor ce = sequence_ce(tape, teacher.logits, seq);

  DecodeConfig greedy_cfg;
  greedy_cfg.max_len = model.cfg.max_len;
  DecodeResult greedy =
      decode_sequence(tape, model.decoder, q.latent, mem, nullptr, greedy_cfg,
                      nullptr);

  SampleRun out;
  out.fidelity = tape.scalar_value(q.fidelity);
  out.trash_zero_prob = tape.scalar_value(q.trash_prob);
  out.degenerate_reset = out.fidelity == 0.0;
  out.ce = tape.scalar_value(ce);
  out.reconstruction = detokenize(greedy.tokens, vocab);
  out.similarity = levenshtein_similarity(smiles, out.reconstruction);
  Tensor fid_loss = tape.affine(q.fidelity, -1.0, 1.0);
  Tensor trash_l = tape.affine(q.trash_prob, -1.0, 1.0);
  out.loss = total_loss(tape, fid_loss, ce, 1.0 - out.similarity, trash_l,
                        model.cfg.weights);
  return out;
}

InferenceRun run_inference_sample(Model& model, const TokenSequence& seq,
                                  const std::string& smiles,
                                  const Vocabulary& vocab) {
  Tape tape(&model.store);
  QuantumStage q = forward_quantum(tape, model, seq);
  AttentionMemory mem =
      project_memory(tape, model.decoder.attention, q.emb.memory, q.emb.mask);
  DecodeConfig greedy_cfg;
  greedy_cfg.max_len = model.cfg.max_len;
  DecodeResult greedy = decode_sequence(tape, model.decoder, q.latent, mem,
                                        nullptr, greedy_cfg, nullptr);
  InferenceRun out;
  out.fidelity = tape.scalar_value(q.fidelity);
  out.trash_zero_prob = tape.scalar_value(q.trash_prob);
  out.reconstruction = detokenize(greedy.tokens, vocab);
  out.similarity = levenshtein_similarity(smiles, out.reconstruction);
  return out;
}

}  // namespace qsmiles
