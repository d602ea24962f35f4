// SPDX-License-Identifier: Apache-2.0
#include "qsmiles/layers.hpp"

#include <cmath>

#include "qsmiles/errors.hpp"

namespace qsmiles {

DenseParams make_dense(ParamStore& store, const std::string& prefix, int d_in,
                       int d_out, Rng& rng) {
  DenseParams p;
  p.d_in = d_in;
  p.d_out = d_out;
  const double s = 1.0 / std::sqrt(static_cast<double>(d_in));
  p.w = store.add_uniform(prefix + ".w", d_out, d_in, rng, -s, s);
  p.b = store.add(prefix + ".b", d_out);
  return p;
}

Tensor dense(Tape& tape, const DenseParams& p, Tensor x) {
  return tape.add(tape.matvec(tape.param(p.w), x), tape.param(p.b));
}

LstmParams make_lstm(ParamStore& store, const std::string& prefix, int d_in,
                     int d_h, Rng& rng) {
  static const char* kGate[4] = {"i", "f", "g", "o"};
  LstmParams p;
  p.d_in = d_in;
  p.d_h = d_h;
  const double s = 1.0 / std::sqrt(static_cast<double>(d_h));
  for (int g = 0; g < 4; ++g) {
    p.w[g] = store.add_uniform(prefix + ".w" + kGate[g], d_h, d_in, rng, -s, s);
    p.u[g] = store.add_uniform(prefix + ".u" + kGate[g], d_h, d_h, rng, -s, s);
    p.b[g] = store.add(prefix + ".b" + kGate[g], d_h);
  }
  // forget gate starts open
  auto& fb = store.at(p.b[1]).value;
  std::fill(fb.begin(), fb.end(), 1.0);
  return p;
}

LstmOut lstm_cell(Tape& tape, const LstmParams& p, Tensor x, Tensor h_prev,
                  Tensor c_prev) {
  auto gate_pre = [&](int g) {
    Tensor wx = tape.matvec(tape.param(p.w[g]), x);
    Tensor uh = tape.matvec(tape.param(p.u[g]), h_prev);
    return tape.add(tape.add(wx, uh), tape.param(p.b[g]));
  };
  Tensor i = tape.sigmoid(gate_pre(0));
  Tensor f = tape.sigmoid(gate_pre(1));
  Tensor g = tape.tanh(gate_pre(2));
  Tensor o = tape.sigmoid(gate_pre(3));
  Tensor c = tape.add(tape.mul(f, c_prev), tape.mul(i, g));
  Tensor h = tape.mul(o, tape.tanh(c));
  return {h, c};
}

AttentionParams make_attention(ParamStore& store, const std::string& prefix,
                               int d_query, int d_model, int d_out,
                               int n_heads, Rng& rng) {
  if (n_heads <= 0 || d_out % n_heads != 0) {
    throw config_error("attention: output dimension " + std::to_string(d_out) +
                       " not divisible by " + std::to_string(n_heads) +
                       " heads");
  }
  AttentionParams p;
  p.n_heads = n_heads;
  p.d_head = d_out / n_heads;
  p.d_query = d_query;
  p.d_model = d_model;
  p.d_out = d_out;
  const double sq = 1.0 / std::sqrt(static_cast<double>(d_query));
  const double sm = 1.0 / std::sqrt(static_cast<double>(d_model));
  for (int h = 0; h < n_heads; ++h) {
    const std::string hp = prefix + ".h" + std::to_string(h);
    p.wq.push_back(store.add_uniform(hp + ".wq", p.d_head, d_query, rng, -sq, sq));
    p.wk.push_back(store.add_uniform(hp + ".wk", p.d_head, d_model, rng, -sm, sm));
    p.wv.push_back(store.add_uniform(hp + ".wv", p.d_head, d_model, rng, -sm, sm));
  }
  const double so = 1.0 / std::sqrt(static_cast<double>(d_out));
  p.wo = store.add_uniform(prefix + ".wo", d_out, n_heads * p.d_head, rng, -so, so);
  p.bo = store.add(prefix + ".bo", d_out);
  return p;
}

AttentionMemory project_memory(Tape& tape, const AttentionParams& p,
                               Tensor memory, const std::vector<char>& mask) {
  const int length = tape.rows(memory);
  if (tape.cols(memory) != p.d_model) {
    throw shape_error("attention memory: " + std::to_string(tape.rows(memory)) +
                      "x" + std::to_string(tape.cols(memory)) + " vs d_model " +
                      std::to_string(p.d_model));
  }
  if (mask.size() != static_cast<std::size_t>(length)) {
    throw shape_error("attention mask: " + std::to_string(mask.size()) +
                      " entries for " + std::to_string(length) + " positions");
  }
  AttentionMemory mem;
  mem.length = length;
  for (int i = 0; i < length; ++i) {
    if (mask[static_cast<std::size_t>(i)]) mem.keep.push_back(i);
  }
  if (mem.keep.empty()) {
    throw degenerate_input_error("attention: fully masked memory");
  }
  for (int h = 0; h < p.n_heads; ++h) {
    mem.keys.push_back(tape.matmul_bt(memory, tape.param(p.wk[h])));
    mem.values.push_back(tape.matmul_bt(memory, tape.param(p.wv[h])));
  }
  return mem;
}

Tensor multi_head_attention(Tape& tape, const AttentionParams& p,
                            Tensor query, const AttentionMemory& mem) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(p.d_head));
  Tensor heads;
  for (int h = 0; h < p.n_heads; ++h) {
    Tensor q = tape.matvec(tape.param(p.wq[h]), query);
    Tensor scores = tape.affine(tape.matvec(mem.keys[static_cast<std::size_t>(h)], q), scale, 0.0);
    Tensor weights = tape.softmax(scores, mem.keep);
    Tensor ctx = tape.tmatvec(mem.values[static_cast<std::size_t>(h)], weights);
    heads = (h == 0) ? ctx : tape.concat(heads, ctx);
  }
  return tape.add(tape.matvec(tape.param(p.wo), heads), tape.param(p.bo));
}

}  // namespace qsmiles
