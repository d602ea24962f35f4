// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "qsmiles/corpus.hpp"
#include "qsmiles/layers.hpp"
#include "qsmiles/tape.hpp"

namespace qsmiles {

// Tensor-product token embeddings: each token owns `order` factor vectors of
// dimension d_site, and its embedding is their Kronecker product. Effective
// dimension d_site^order at a parameter cost of order * d_site per token.
struct TtEmbeddingParams {
  int factors = -1;  // (vocab * order) x d_site; row = token * order + site
  DenseParams projection;  // d_site^order -> d_model
  int vocab = 0;
  int order = 0;
  int d_site = 0;
  int d_model = 0;

  int d_effective() const {
    int d = 1;
    for (int i = 0; i < order; ++i) d *= d_site;
    return d;
  }
};

// Factors start uniform in [-1/sqrt(d_site), 1/sqrt(d_site)] so token
// embeddings begin at unit scale under the product.
TtEmbeddingParams make_tt_embedding(ParamStore& store, int vocab, int order,
                                    int d_site, int d_model, Rng& rng);

// Kronecker product of the token's site factors, dimension d_site^order.
Tensor embed_token(Tape& tape, const TtEmbeddingParams& p, TokenId token);

struct SequenceEmbedding {
  Tensor pooled;             // d_model, masked mean over non-PAD positions
  Tensor memory;             // L x d_model, one projected row per position
  std::vector<char> mask;    // true where position is not PAD
};

// Projects every token embedding to d_model; pooled = mean over non-PAD
// rows. Throws degenerate_input_error when every position is PAD.
SequenceEmbedding embed_sequence(Tape& tape, const TtEmbeddingParams& p,
                                 const TokenSequence& seq);

}  // namespace qsmiles
