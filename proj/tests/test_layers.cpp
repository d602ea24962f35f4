// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qsmiles/errors.hpp"
#include "qsmiles/layers.hpp"

using namespace qsmiles;

TEST_CASE("lstm cell: zero parameters give zero state") {
  ParamStore store;
  Rng rng(1);
  LstmParams p = make_lstm(store, "lstm", 3, 4, rng);
  for (auto& param : store.all()) {
    std::fill(param.value.begin(), param.value.end(), 0.0);
  }
  Tape tape(&store);
  const double xs[3] = {0.4, -0.2, 0.9};
  const double hs[4] = {0.1, 0.2, 0.3, 0.4};
  Tensor x = tape.constant(xs, 3);
  Tensor h = tape.constant(hs, 4);
  Tensor c = tape.constant(hs, 4);
  // zero c_prev as well
  const double zeros[4] = {0, 0, 0, 0};
  c = tape.constant(zeros, 4);
  LstmOut out = lstm_cell(tape, p, x, h, c);
  for (double v : tape.value(out.c)) CHECK(v == 0.0);
  for (double v : tape.value(out.h)) CHECK(v == 0.0);
}

TEST_CASE("lstm cell: cell growth is bounded by gate ranges") {
  ParamStore store;
  Rng rng(2);
  LstmParams p = make_lstm(store, "lstm", 4, 6, rng);
  Rng data(3);
  std::vector<double> c_prev(6);
  for (double& v : c_prev) v = data.uniform(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    Tape tape(&store);
    std::vector<double> xs(4), hs(6);
    for (double& v : xs) v = data.uniform(-3.0, 3.0);
    for (double& v : hs) v = data.uniform(-1.0, 1.0);
    LstmOut out = lstm_cell(tape, p, tape.constant(xs, 4),
                            tape.constant(hs, 6), tape.constant(c_prev, 6));
    const auto cv = tape.value(out.c);
    for (std::size_t i = 0; i < cv.size(); ++i) {
      CHECK(std::abs(cv[i]) <= std::abs(c_prev[i]) + 1.0 + 1e-12);
    }
  }
}

TEST_CASE("lstm cell gradient vs finite differences") {
  ParamStore store;
  Rng rng(5);
  LstmParams p = make_lstm(store, "lstm", 3, 4, rng);
  const int x = store.add_uniform("x", 3, 1, rng, -1.0, 1.0);
  const int h0 = store.add_uniform("h0", 4, 1, rng, -1.0, 1.0);
  const int c0 = store.add_uniform("c0", 4, 1, rng, -1.0, 1.0);

  auto build = [&](Tape& tape) {
    LstmOut out = lstm_cell(tape, p, tape.param(x), tape.param(h0),
                            tape.param(c0));
    // run a second step so recurrent weights see reuse
    LstmOut out2 = lstm_cell(tape, p, tape.param(x), out.h, out.c);
    return tape.mean(tape.mul(out2.h, out2.c));
  };
  auto loss_value = [&]() {
    Tape tape(&store);
    return tape.scalar_value(build(tape));
  };
  store.zero_grad();
  {
    Tape tape(&store);
    tape.backward(build(tape));
  }
  for (std::size_t pi = 0; pi < store.count(); ++pi) {
    const auto& param = store.at(static_cast<int>(pi));
    for (std::size_t i = 0; i < param.size(); i += 3) {  // sampled entries
      const double numeric = oracles::finite_difference(
          store, static_cast<int>(pi), i, loss_value);
      CAPTURE(param.name);
      CAPTURE(i);
      CHECK(oracles::grad_close(param.grad[i], numeric));
    }
  }
}

TEST_CASE("attention: single memory row gets weight one") {
  ParamStore store;
  Rng rng(7);
  AttentionParams p = make_attention(store, "attn", 6, 5, 8, 2, rng);
  Tape tape(&store);
  std::vector<double> mrow(5, 0.3);
  const Tensor rows[1] = {tape.constant(mrow, 5)};
  Tensor memory = tape.stack_rows(rows);
  AttentionMemory mem = project_memory(tape, p, memory, {1});
  std::vector<double> qv(6, 0.2);
  Tensor out = multi_head_attention(tape, p, tape.constant(qv, 6), mem);
  CHECK(tape.rows(out) == 8);
  // the attended value must equal the output projection of the single value
  // row: recompute by hand
  Tape t2(&store);
  Tensor m2 = t2.stack_rows(std::vector<Tensor>{t2.constant(mrow, 5)});
  Tensor head0 = t2.tmatvec(t2.matmul_bt(m2, t2.param(p.wv[0])),
                            t2.constant(std::vector<double>{1.0}, 1));
  Tensor head1 = t2.tmatvec(t2.matmul_bt(m2, t2.param(p.wv[1])),
                            t2.constant(std::vector<double>{1.0}, 1));
  Tensor manual = t2.add(
      t2.matvec(t2.param(p.wo), t2.concat(head0, head1)), t2.param(p.bo));
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(tape.value(out)[i] ==
          doctest::Approx(t2.value(manual)[i]).epsilon(1e-12));
  }
}

TEST_CASE("attention: masked positions get exactly zero weight") {
  ParamStore store;
  Rng rng(8);
  AttentionParams p = make_attention(store, "attn", 4, 3, 4, 1, rng);
  Tape tape(&store);
  Rng data(9);
  std::vector<Tensor> rows;
  for (int i = 0; i < 5; ++i) {
    std::vector<double> r(3);
    for (double& v : r) v = data.uniform(-1.0, 1.0);
    rows.push_back(tape.constant(r, 3));
  }
  Tensor memory = tape.stack_rows(rows);
  AttentionMemory mem = project_memory(tape, p, memory, {1, 0, 1, 1, 0});
  CHECK(mem.keep == std::vector<int>{0, 2, 3});
  std::vector<double> qv(4, 0.5);
  Tensor q = tape.matvec(tape.param(p.wq[0]), tape.constant(qv, 4));
  Tensor scores = tape.affine(tape.matvec(mem.keys[0], q), 0.5, 0.0);
  Tensor weights = tape.softmax(scores, mem.keep);
  CHECK(tape.value(weights)[1] == 0.0);
  CHECK(tape.value(weights)[4] == 0.0);
  double sum = 0.0;
  for (double wv : tape.value(weights)) sum += wv;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS(project_memory(tape, p, memory, {0, 0, 0, 0, 0}),
                  degenerate_input_error);
}

TEST_CASE("attention per-head weights sum to one for random inputs") {
  ParamStore store;
  Rng rng(10);
  AttentionParams p = make_attention(store, "attn", 8, 6, 8, 4, rng);
  Rng data(11);
  for (int trial = 0; trial < 10; ++trial) {
    Tape tape(&store);
    std::vector<Tensor> rows;
    const int L = 1 + static_cast<int>(data.uniform_index(7));
    for (int i = 0; i < L; ++i) {
      std::vector<double> r(6);
      for (double& v : r) v = data.uniform(-2.0, 2.0);
      rows.push_back(tape.constant(r, 6));
    }
    Tensor memory = tape.stack_rows(rows);
    AttentionMemory mem = project_memory(
        tape, p, memory, std::vector<char>(static_cast<std::size_t>(L), 1));
    std::vector<double> qv(8);
    for (double& v : qv) v = data.uniform(-2.0, 2.0);
    Tensor q = tape.constant(qv, 8);
    for (int h = 0; h < 4; ++h) {
      Tensor qh = tape.matvec(tape.param(p.wq[static_cast<std::size_t>(h)]), q);
      Tensor scores = tape.affine(
          tape.matvec(mem.keys[static_cast<std::size_t>(h)], qh),
          1.0 / std::sqrt(2.0), 0.0);
      Tensor weights = tape.softmax(scores, mem.keep);
      double sum = 0.0;
      for (double wv : tape.value(weights)) sum += wv;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("attention gradient vs finite differences") {
  ParamStore store;
  Rng rng(12);
  AttentionParams p = make_attention(store, "attn", 4, 3, 4, 2, rng);
  const int mrows = store.add_uniform("mem", 3, 3, rng, -1.0, 1.0);
  const int qv = store.add_uniform("q", 4, 1, rng, -1.0, 1.0);

  auto build = [&](Tape& tape) {
    std::vector<Tensor> rows;
    for (int i = 0; i < 3; ++i) rows.push_back(tape.param_row(mrows, i));
    Tensor memory = tape.stack_rows(rows);
    AttentionMemory mem = project_memory(tape, p, memory, {1, 1, 1});
    Tensor out = multi_head_attention(tape, p, tape.param(qv), mem);
    return tape.mean(tape.mul(out, out));
  };
  auto loss_value = [&]() {
    Tape tape(&store);
    return tape.scalar_value(build(tape));
  };
  store.zero_grad();
  {
    Tape tape(&store);
    tape.backward(build(tape));
  }
  for (std::size_t pi = 0; pi < store.count(); ++pi) {
    const auto& param = store.at(static_cast<int>(pi));
    for (std::size_t i = 0; i < param.size(); i += 2) {
      const double numeric = oracles::finite_difference(
          store, static_cast<int>(pi), i, loss_value);
      CAPTURE(param.name);
      CAPTURE(i);
      CHECK(oracles::grad_close(param.grad[i], numeric));
    }
  }
}

TEST_CASE("attention rejects an indivisible head split") {
  ParamStore store;
  Rng rng(13);
  CHECK_THROWS_WITH_AS(make_attention(store, "attn", 6, 5, 6, 4, rng),
                       doctest::Contains("not divisible"), config_error);
}
