// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "qsmiles/tape.hpp"

namespace qsmiles {

// y = W x + b
struct DenseParams {
  int w = -1;
  int b = -1;
  int d_in = 0;
  int d_out = 0;
};

DenseParams make_dense(ParamStore& store, const std::string& prefix, int d_in,
                       int d_out, Rng& rng);
Tensor dense(Tape& tape, const DenseParams& p, Tensor x);

// Standard LSTM cell with sigmoid gates and tanh candidate. Weights are
// uniform in [-1/sqrt(d_h), 1/sqrt(d_h)]; the forget-gate bias starts at +1.
struct LstmParams {
  // gate order: input, forget, cell, output
  int w[4] = {-1, -1, -1, -1};  // input weights, d_h x d_in
  int u[4] = {-1, -1, -1, -1};  // recurrent weights, d_h x d_h
  int b[4] = {-1, -1, -1, -1};  // biases, d_h
  int d_in = 0;
  int d_h = 0;
};

LstmParams make_lstm(ParamStore& store, const std::string& prefix, int d_in,
                     int d_h, Rng& rng);

struct LstmOut {
  Tensor h;
  Tensor c;
};

LstmOut lstm_cell(Tape& tape, const LstmParams& p, Tensor x, Tensor h_prev,
                  Tensor c_prev);

// Scaled dot-product attention with per-head projections. Keys and values
// come from the memory (d_model columns), queries from the decoder state
// (d_query). d_out must be divisible by n_heads.
struct AttentionParams {
  std::vector<int> wq;  // per head, d_head x d_query
  std::vector<int> wk;  // per head, d_head x d_model
  std::vector<int> wv;  // per head, d_head x d_model
  int wo = -1;          // d_out x (n_heads * d_head)
  int bo = -1;          // d_out
  int n_heads = 0;
  int d_head = 0;
  int d_query = 0;
  int d_model = 0;
  int d_out = 0;
};

AttentionParams make_attention(ParamStore& store, const std::string& prefix,
                               int d_query, int d_model, int d_out,
                               int n_heads, Rng& rng);

// Memory keys/values are constant across decode steps, so they are
// projected once per sequence and reused.
struct AttentionMemory {
  std::vector<Tensor> keys;    // per head, L x d_head
  std::vector<Tensor> values;  // per head, L x d_head
  std::vector<int> keep;       // non-masked memory positions
  int length = 0;
};

// mask[i] true = position attendable. Fully masked memory is degenerate.
AttentionMemory project_memory(Tape& tape, const AttentionParams& p,
                               Tensor memory, const std::vector<char>& mask);

Tensor multi_head_attention(Tape& tape, const AttentionParams& p,
                            Tensor query, const AttentionMemory& mem);

}  // namespace qsmiles
