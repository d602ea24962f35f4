// SPDX-License-Identifier: Apache-2.0
#include "qsmiles/tt_embedding.hpp"

#include <cmath>

#include "qsmiles/errors.hpp"

namespace qsmiles {

TtEmbeddingParams make_tt_embedding(ParamStore& store, int vocab, int order,
                                    int d_site, int d_model, Rng& rng) {
  if (vocab < kFirstRegularId || order < 1 || d_site < 1) {
    throw config_error("tt-embedding: bad dimensions (vocab " +
                       std::to_string(vocab) + ", order " +
                       std::to_string(order) + ", d_site " +
                       std::to_string(d_site) + ")");
  }
  TtEmbeddingParams p;
  p.vocab = vocab;
  p.order = order;
  p.d_site = d_site;
  p.d_model = d_model;
  const double s = 1.0 / std::sqrt(static_cast<double>(d_site));
  p.factors = store.add_uniform("embedding.factors", vocab * order, d_site,
                                rng, -s, s);
  p.projection = make_dense(store, "embedding.projection", p.d_effective(),
                            d_model, rng);
  return p;
}

Tensor embed_token(Tape& tape, const TtEmbeddingParams& p, TokenId token) {
  if (token < 0 || token >= p.vocab) {
    throw index_error("embed_token: token " + std::to_string(token) +
                      " outside vocabulary of " + std::to_string(p.vocab));
  }
  Tensor e = tape.param_row(p.factors, token * p.order);
  for (int site = 1; site < p.order; ++site) {
    e = tape.kron(e, tape.param_row(p.factors, token * p.order + site));
  }
  return e;
}

SequenceEmbedding embed_sequence(Tape& tape, const TtEmbeddingParams& p,
                                 const TokenSequence& seq) {
  if (seq.empty()) throw degenerate_input_error("embed_sequence: empty input");
  SequenceEmbedding out;
  std::vector<Tensor> rows;
  std::vector<Tensor> pooled_rows;
  rows.reserve(seq.size());
  for (TokenId t : seq) {
    Tensor row = dense(tape, p.projection, embed_token(tape, p, t));
    rows.push_back(row);
    const bool pad = (t == kPadId);
    out.mask.push_back(!pad);
    if (!pad) pooled_rows.push_back(row);
  }
  if (pooled_rows.empty()) {
    throw degenerate_input_error("embed_sequence: all positions are PAD");
  }
  out.memory = tape.stack_rows(rows);
  out.pooled = tape.affine(tape.add_n(pooled_rows),
                           1.0 / static_cast<double>(pooled_rows.size()), 0.0);
  return out;
}

}  // namespace qsmiles
