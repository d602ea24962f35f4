// SPDX-License-Identifier: Apache-2.0
#include "qsmiles/tape.hpp"

#include <algorithm>
#include <cmath>

#include "qsmiles/errors.hpp"

namespace qsmiles {

namespace {

double stable_sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Tape::Node& Tape::node(Tensor t) {
  return nodes_[static_cast<std::size_t>(t.id)];
}

const Tape::Node& Tape::node(Tensor t) const {
  return nodes_[static_cast<std::size_t>(t.id)];
}

int Tape::push(Node&& n) {
  n.grad.assign(n.val.size(), 0.0);
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

std::string Tape::shape_str(const Node& n) {
  return std::to_string(n.rows) + "x" + std::to_string(n.cols);
}

void Tape::require_vector(Tensor t, const char* who) const {
  if (node(t).cols != 1) {
    throw shape_error(std::string(who) + ": expected a vector, got " +
                      shape_str(node(t)));
  }
}

void Tape::require_same_shape(Tensor a, Tensor b, const char* who) const {
  const Node& na = node(a);
  const Node& nb = node(b);
  if (na.rows != nb.rows || na.cols != nb.cols) {
    throw shape_error(std::string(who) + ": shape mismatch " + shape_str(na) +
                      " vs " + shape_str(nb));
  }
}

Tensor Tape::constant(std::span<const double> values, int rows, int cols) {
  if (static_cast<std::size_t>(rows) * cols != values.size()) {
    throw shape_error("constant: " + std::to_string(values.size()) +
                      " values vs shape " + std::to_string(rows) + "x" +
                      std::to_string(cols));
  }
  Node n;
  n.op = Op::kConst;
  n.rows = rows;
  n.cols = cols;
  n.val.assign(values.begin(), values.end());
  return {push(std::move(n))};
}

Tensor Tape::scalar(double value) {
  return constant(std::span<const double>(&value, 1), 1, 1);
}

Tensor Tape::param(int param_index) {
  if (params_ == nullptr) throw contract_error("tape: no parameter store bound");
  const Param& p = params_->at(param_index);
  Node n;
  n.op = Op::kParam;
  n.i0 = param_index;
  n.rows = p.rows;
  n.cols = p.cols;
  n.val = p.value;
  return {push(std::move(n))};
}

Tensor Tape::param_row(int param_index, int row) {
  if (params_ == nullptr) throw contract_error("tape: no parameter store bound");
  const Param& p = params_->at(param_index);
  if (row < 0 || row >= p.rows) {
    throw index_error("param_row: row " + std::to_string(row) +
                      " out of range for " + p.name);
  }
  Node n;
  n.op = Op::kParamRow;
  n.i0 = param_index;
  n.b = row;
  n.rows = p.cols;  // a row becomes a column vector
  n.cols = 1;
  const std::size_t off = static_cast<std::size_t>(row) * p.cols;
  n.val.assign(p.value.begin() + off, p.value.begin() + off + p.cols);
  return {push(std::move(n))};
}

Tensor Tape::add(Tensor a, Tensor b) {
  require_same_shape(a, b, "add");
  Node n;
  n.op = Op::kAdd;
  n.a = a.id;
  n.b = b.id;
  n.rows = node(a).rows;
  n.cols = node(a).cols;
  n.val.resize(node(a).val.size());
  for (std::size_t i = 0; i < n.val.size(); ++i) {
    n.val[i] = node(a).val[i] + node(b).val[i];
  }
  return {push(std::move(n))};
}

Tensor Tape::add_n(std::span<const Tensor> terms) {
  if (terms.empty()) throw degenerate_input_error("add_n: no terms");
  Node n;
  n.op = Op::kAddN;
  n.rows = node(terms[0]).rows;
  n.cols = node(terms[0]).cols;
  n.val.assign(node(terms[0]).val.size(), 0.0);
  for (Tensor t : terms) {
    require_same_shape(terms[0], t, "add_n");
    n.list.push_back(t.id);
    for (std::size_t i = 0; i < n.val.size(); ++i) n.val[i] += node(t).val[i];
  }
  return {push(std::move(n))};
}

Tensor Tape::mul(Tensor a, Tensor b) {
  require_same_shape(a, b, "mul");
  Node n;
  n.op = Op::kMul;
  n.a = a.id;
  n.b = b.id;
  n.rows = node(a).rows;
  n.cols = node(a).cols;
  n.val.resize(node(a).val.size());
  for (std::size_t i = 0; i < n.val.size(); ++i) {
    n.val[i] = node(a).val[i] * node(b).val[i];
  }
  return {push(std::move(n))};
}

Tensor Tape::affine(Tensor x, double scale, double shift) {
  Node n;
  n.op = Op::kAffine;
  n.a = x.id;
  n.x0 = scale;
  n.x1 = shift;
  n.rows = node(x).rows;
  n.cols = node(x).cols;
  n.val.resize(node(x).val.size());
  for (std::size_t i = 0; i < n.val.size(); ++i) {
    n.val[i] = scale * node(x).val[i] + shift;
  }
  return {push(std::move(n))};
}

Tensor Tape::tanh(Tensor x) {
  Node n;
  n.op = Op::kTanh;
  n.a = x.id;
  n.rows = node(x).rows;
  n.cols = node(x).cols;
  n.val.resize(node(x).val.size());
  for (std::size_t i = 0; i < n.val.size(); ++i) {
    n.val[i] = std::tanh(node(x).val[i]);
  }
  return {push(std::move(n))};
}

Tensor Tape::sigmoid(Tensor x) {
  Node n;
  n.op = Op::kSigmoid;
  n.a = x.id;
  n.rows = node(x).rows;
  n.cols = node(x).cols;
  n.val.resize(node(x).val.size());
  for (std::size_t i = 0; i < n.val.size(); ++i) {
    n.val[i] = stable_sigmoid(node(x).val[i]);
  }
  return {push(std::move(n))};
}

Tensor Tape::softmax(Tensor x, std::span<const int> keep) {
  require_vector(x, "softmax");
  const Node& nx = node(x);
  std::vector<int> kept(keep.begin(), keep.end());
  if (kept.empty()) {
    kept.resize(nx.val.size());
    for (std::size_t i = 0; i < kept.size(); ++i) kept[i] = static_cast<int>(i);
  }
  for (int k : kept) {
    if (k < 0 || k >= nx.rows) {
      throw index_error("softmax: keep index " + std::to_string(k) +
                        " out of range");
    }
  }
  Node n;
  n.op = Op::kSoftmax;
  n.a = x.id;
  n.rows = nx.rows;
  n.cols = 1;
  n.list = std::move(kept);
  n.val.assign(nx.val.size(), 0.0);
  double mx = -1e300;
  for (int k : n.list) mx = std::max(mx, nx.val[static_cast<std::size_t>(k)]);
  double z = 0.0;
  for (int k : n.list) {
    const double e = std::exp(nx.val[static_cast<std::size_t>(k)] - mx);
    n.val[static_cast<std::size_t>(k)] = e;
    z += e;
  }
  for (int k : n.list) n.val[static_cast<std::size_t>(k)] /= z;
  return {push(std::move(n))};
}

Tensor Tape::concat(Tensor a, Tensor b) {
  require_vector(a, "concat");
  require_vector(b, "concat");
  Node n;
  n.op = Op::kConcat;
  n.a = a.id;
  n.b = b.id;
  n.rows = node(a).rows + node(b).rows;
  n.cols = 1;
  n.val = node(a).val;
  n.val.insert(n.val.end(), node(b).val.begin(), node(b).val.end());
  return {push(std::move(n))};
}

Tensor Tape::slice(Tensor x, int offset, int length) {
  require_vector(x, "slice");
  if (offset < 0 || length <= 0 || offset + length > node(x).rows) {
    throw shape_error("slice: [" + std::to_string(offset) + ", " +
                      std::to_string(offset + length) + ") out of " +
                      std::to_string(node(x).rows));
  }
  Node n;
  n.op = Op::kSlice;
  n.a = x.id;
  n.i0 = offset;
  n.rows = length;
  n.cols = 1;
  n.val.assign(node(x).val.begin() + offset,
               node(x).val.begin() + offset + length);
  return {push(std::move(n))};
}

Tensor Tape::kron(Tensor a, Tensor b) {
  require_vector(a, "kron");
  require_vector(b, "kron");
  const Node& na = node(a);
  const Node& nb = node(b);
  Node n;
  n.op = Op::kKron;
  n.a = a.id;
  n.b = b.id;
  n.rows = na.rows * nb.rows;
  n.cols = 1;
  n.val.resize(static_cast<std::size_t>(n.rows));
  for (int i = 0; i < na.rows; ++i) {
    for (int j = 0; j < nb.rows; ++j) {
      n.val[static_cast<std::size_t>(i) * nb.rows + j] =
          na.val[static_cast<std::size_t>(i)] * nb.val[static_cast<std::size_t>(j)];
    }
  }
  return {push(std::move(n))};
}

Tensor Tape::dot(Tensor a, Tensor b) {
  require_vector(a, "dot");
  require_same_shape(a, b, "dot");
  Node n;
  n.op = Op::kDot;
  n.a = a.id;
  n.b = b.id;
  n.rows = 1;
  n.cols = 1;
  double s = 0.0;
  for (std::size_t i = 0; i < node(a).val.size(); ++i) {
    s += node(a).val[i] * node(b).val[i];
  }
  n.val.assign(1, s);
  return {push(std::move(n))};
}

Tensor Tape::mean(Tensor x) {
  require_vector(x, "mean");
  Node n;
  n.op = Op::kMean;
  n.a = x.id;
  n.rows = 1;
  n.cols = 1;
  double s = 0.0;
  for (double v : node(x).val) s += v;
  n.val.assign(1, s / static_cast<double>(node(x).val.size()));
  return {push(std::move(n))};
}

Tensor Tape::stack_rows(std::span<const Tensor> rows) {
  if (rows.empty()) throw degenerate_input_error("stack_rows: no rows");
  const int d = node(rows[0]).rows;
  Node n;
  n.op = Op::kStackRows;
  n.rows = static_cast<int>(rows.size());
  n.cols = d;
  n.val.reserve(static_cast<std::size_t>(n.rows) * d);
  for (Tensor r : rows) {
    require_vector(r, "stack_rows");
    require_same_shape(rows[0], r, "stack_rows");
    n.list.push_back(r.id);
    n.val.insert(n.val.end(), node(r).val.begin(), node(r).val.end());
  }
  return {push(std::move(n))};
}

Tensor Tape::matvec(Tensor m, Tensor x) {
  require_vector(x, "matvec");
  const Node& nm = node(m);
  const Node& nx = node(x);
  if (nm.cols != nx.rows) {
    throw shape_error("matvec: " + shape_str(nm) + " vs " + shape_str(nx));
  }
  Node n;
  n.op = Op::kMatVec;
  n.a = m.id;
  n.b = x.id;
  n.rows = nm.rows;
  n.cols = 1;
  n.val.assign(static_cast<std::size_t>(nm.rows), 0.0);
  for (int r = 0; r < nm.rows; ++r) {
    const double* row = nm.val.data() + static_cast<std::size_t>(r) * nm.cols;
    double s = 0.0;
    for (int c = 0; c < nm.cols; ++c) s += row[c] * nx.val[static_cast<std::size_t>(c)];
    n.val[static_cast<std::size_t>(r)] = s;
  }
  return {push(std::move(n))};
}

Tensor Tape::tmatvec(Tensor m, Tensor x) {
  require_vector(x, "tmatvec");
  const Node& nm = node(m);
  const Node& nx = node(x);
  if (nm.rows != nx.rows) {
    throw shape_error("tmatvec: " + shape_str(nm) + " vs " + shape_str(nx));
  }
  Node n;
  n.op = Op::kTMatVec;
  n.a = m.id;
  n.b = x.id;
  n.rows = nm.cols;
  n.cols = 1;
  n.val.assign(static_cast<std::size_t>(nm.cols), 0.0);
  for (int r = 0; r < nm.rows; ++r) {
    const double* row = nm.val.data() + static_cast<std::size_t>(r) * nm.cols;
    const double xv = nx.val[static_cast<std::size_t>(r)];
    for (int c = 0; c < nm.cols; ++c) n.val[static_cast<std::size_t>(c)] += row[c] * xv;
  }
  return {push(std::move(n))};
}

Tensor Tape::matmul_bt(Tensor a, Tensor b) {
  const Node& na = node(a);
  const Node& nb = node(b);
  if (na.cols != nb.cols) {
    throw shape_error("matmul_bt: " + shape_str(na) + " vs " + shape_str(nb) +
                      " (shared inner dimension required)");
  }
  Node n;
  n.op = Op::kMatMulBT;
  n.a = a.id;
  n.b = b.id;
  n.rows = na.rows;
  n.cols = nb.rows;
  n.val.assign(static_cast<std::size_t>(n.rows) * n.cols, 0.0);
  for (int i = 0; i < na.rows; ++i) {
    const double* arow = na.val.data() + static_cast<std::size_t>(i) * na.cols;
    for (int j = 0; j < nb.rows; ++j) {
      const double* brow = nb.val.data() + static_cast<std::size_t>(j) * nb.cols;
      double s = 0.0;
      for (int k = 0; k < na.cols; ++k) s += arow[k] * brow[k];
      n.val[static_cast<std::size_t>(i) * n.cols + j] = s;
    }
  }
  return {push(std::move(n))};
}

Tensor Tape::cross_entropy(Tensor logits, int target) {
  require_vector(logits, "cross_entropy");
  const Node& nl = node(logits);
  if (target < 0 || target >= nl.rows) {
    throw index_error("cross_entropy: target " + std::to_string(target) +
                      " out of range for " + std::to_string(nl.rows) +
                      " classes");
  }
  if (target == 0) {
    throw contract_error(
        "cross_entropy: PAD target must be masked out by the caller");
  }
  Node n;
  n.op = Op::kCrossEntropy;
  n.a = logits.id;
  n.i0 = target;
  n.rows = 1;
  n.cols = 1;
  double mx = nl.val[0];
  for (double v : nl.val) mx = std::max(mx, v);
  double z = 0.0;
  for (double v : nl.val) z += std::exp(v - mx);
  const double lse = mx + std::log(z);
  n.val.assign(1, lse - nl.val[static_cast<std::size_t>(target)]);
  return {push(std::move(n))};
}

void Tape::bind_quantum(QuantumForward fwd, QuantumBackward bwd) {
  quantum_fwd_ = std::move(fwd);
  quantum_bwd_ = std::move(bwd);
}

Tensor Tape::quantum(Tensor angles) {
  require_vector(angles, "quantum");
  if (!quantum_fwd_ || !quantum_bwd_) {
    throw contract_error("quantum: no circuit bound to this tape");
  }
  Node n;
  n.op = Op::kQuantum;
  n.a = angles.id;
  n.val = quantum_fwd_(node(angles).val);
  n.rows = static_cast<int>(n.val.size());
  n.cols = 1;
  return {push(std::move(n))};
}

std::span<const double> Tape::value(Tensor t) const { return node(t).val; }
std::span<const double> Tape::gradient(Tensor t) const { return node(t).grad; }

double Tape::scalar_value(Tensor t) const {
  const Node& n = node(t);
  if (n.val.size() != 1) {
    throw shape_error("scalar_value: node is " + shape_str(n));
  }
  return n.val[0];
}

int Tape::rows(Tensor t) const { return node(t).rows; }
int Tape::cols(Tensor t) const { return node(t).cols; }

void Tape::backward(Tensor loss, double seed) {
  Node& ln = node(loss);
  if (ln.val.size() != 1) {
    throw shape_error("backward: loss must be scalar, got " + shape_str(ln));
  }
  ln.grad[0] += seed;
  for (int id = loss.id; id >= 0; --id) backward_node(id);
}

void Tape::backward_node(int id) {
  Node& n = nodes_[static_cast<std::size_t>(id)];
  bool any = false;
  for (double g : n.grad) {
    if (g != 0.0) {
      any = true;
      break;
    }
  }
  if (!any) return;

  switch (n.op) {
    case Op::kConst:
      break;
    case Op::kParam: {
      Param& p = params_->at(n.i0);
      for (std::size_t i = 0; i < n.grad.size(); ++i) p.grad[i] += n.grad[i];
      break;
    }
    case Op::kParamRow: {
      Param& p = params_->at(n.i0);
      const std::size_t off = static_cast<std::size_t>(n.b) * p.cols;
      for (std::size_t i = 0; i < n.grad.size(); ++i) {
        p.grad[off + i] += n.grad[i];
      }
      break;
    }
    case Op::kAdd: {
      Node& na = nodes_[static_cast<std::size_t>(n.a)];
      Node& nb = nodes_[static_cast<std::size_t>(n.b)];
      for (std::size_t i = 0; i < n.grad.size(); ++i) {
        na.grad[i] += n.grad[i];
        nb.grad[i] += n.grad[i];
      }
      break;
    }
    case Op::kAddN: {
      for (int tid : n.list) {
        Node& nt = nodes_[static_cast<std::size_t>(tid)];
        for (std::size_t i = 0; i < n.grad.size(); ++i) nt.grad[i] += n.grad[i];
      }
      break;
    }
    case Op::kMul: {
      Node& na = nodes_[static_cast<std::size_t>(n.a)];
      Node& nb = nodes_[static_cast<std::size_t>(n.b)];
      for (std::size_t i = 0; i < n.grad.size(); ++i) {
        na.grad[i] += n.grad[i] * nb.val[i];
        nb.grad[i] += n.grad[i] * na.val[i];
      }
      break;
    }
    case Op::kAffine: {
      Node& na = nodes_[static_cast<std::size_t>(n.a)];
      for (std::size_t i = 0; i < n.grad.size(); ++i) {
        na.grad[i] += n.grad[i] * n.x0;
      }
      break;
    }
    case Op::kTanh: {
      Node& na = nodes_[static_cast<std::size_t>(n.a)];
      for (std::size_t i = 0; i < n.grad.size(); ++i) {
        na.grad[i] += n.grad[i] * (1.0 - n.val[i] * n.val[i]);
      }
      break;
    }
    case Op::kSigmoid: {
      Node& na = nodes_[static_cast<std::size_t>(n.a)];
      for (std::size_t i = 0; i < n.grad.size(); ++i) {
        na.grad[i] += n.grad[i] * n.val[i] * (1.0 - n.val[i]);
      }
      break;
    }
    case Op::kSoftmax: {
      Node& na = nodes_[static_cast<std::size_t>(n.a)];
      double gy = 0.0;
      for (int k : n.list) {
        const auto i = static_cast<std::size_t>(k);
        gy += n.grad[i] * n.val[i];
      }
      for (int k : n.list) {
        const auto i = static_cast<std::size_t>(k);
        na.grad[i] += n.val[i] * (n.grad[i] - gy);
      }
      break;
    }
    case Op::kConcat: {
      Node& na = nodes_[static_cast<std::size_t>(n.a)];
      Node& nb = nodes_[static_cast<std::size_t>(n.b)];
      for (std::size_t i = 0; i < na.grad.size(); ++i) na.grad[i] += n.grad[i];
      for (std::size_t i = 0; i < nb.grad.size(); ++i) {
        nb.grad[i] += n.grad[na.grad.size() + i];
      }
      break;
    }
    case Op::kSlice: {
      Node& na = nodes_[static_cast<std::size_t>(n.a)];
      for (std::size_t i = 0; i < n.grad.size(); ++i) {
        na.grad[static_cast<std::size_t>(n.i0) + i] += n.grad[i];
      }
      break;
    }
    case Op::kKron: {
      Node& na = nodes_[static_cast<std::size_t>(n.a)];
      Node& nb = nodes_[static_cast<std::size_t>(n.b)];
      const int bn = nb.rows;
      for (int i = 0; i < na.rows; ++i) {
        for (int j = 0; j < bn; ++j) {
          const double g = n.grad[static_cast<std::size_t>(i) * bn + j];
          na.grad[static_cast<std::size_t>(i)] += g * nb.val[static_cast<std::size_t>(j)];
          nb.grad[static_cast<std::size_t>(j)] += g * na.val[static_cast<std::size_t>(i)];
        }
      }
      break;
    }
    case Op::kDot: {
      Node& na = nodes_[static_cast<std::size_t>(n.a)];
      Node& nb = nodes_[static_cast<std::size_t>(n.b)];
      const double g = n.grad[0];
      for (std::size_t i = 0; i < na.val.size(); ++i) {
        na.grad[i] += g * nb.val[i];
        nb.grad[i] += g * na.val[i];
      }
      break;
    }
    case Op::kMean: {
      Node& na = nodes_[static_cast<std::size_t>(n.a)];
      const double g = n.grad[0] / static_cast<double>(na.val.size());
      for (std::size_t i = 0; i < na.val.size(); ++i) na.grad[i] += g;
      break;
    }
    case Op::kStackRows: {
      const std::size_t d = static_cast<std::size_t>(n.cols);
      for (std::size_t r = 0; r < n.list.size(); ++r) {
        Node& nr = nodes_[static_cast<std::size_t>(n.list[r])];
        for (std::size_t i = 0; i < d; ++i) nr.grad[i] += n.grad[r * d + i];
      }
      break;
    }
    case Op::kMatVec: {
      Node& nm = nodes_[static_cast<std::size_t>(n.a)];
      Node& nx = nodes_[static_cast<std::size_t>(n.b)];
      for (int r = 0; r < nm.rows; ++r) {
        const double g = n.grad[static_cast<std::size_t>(r)];
        if (g == 0.0) continue;
        const std::size_t off = static_cast<std::size_t>(r) * nm.cols;
        for (int c = 0; c < nm.cols; ++c) {
          nm.grad[off + c] += g * nx.val[static_cast<std::size_t>(c)];
          nx.grad[static_cast<std::size_t>(c)] += g * nm.val[off + c];
        }
      }
      break;
    }
    case Op::kTMatVec: {
      Node& nm = nodes_[static_cast<std::size_t>(n.a)];
      Node& nx = nodes_[static_cast<std::size_t>(n.b)];
      for (int r = 0; r < nm.rows; ++r) {
        const double xv = nx.val[static_cast<std::size_t>(r)];
        const std::size_t off = static_cast<std::size_t>(r) * nm.cols;
        double acc = 0.0;
        for (int c = 0; c < nm.cols; ++c) {
          const double g = n.grad[static_cast<std::size_t>(c)];
          nm.grad[off + c] += g * xv;
          acc += g * nm.val[off + c];
        }
        nx.grad[static_cast<std::size_t>(r)] += acc;
      }
      break;
    }
    case Op::kMatMulBT: {
      Node& na = nodes_[static_cast<std::size_t>(n.a)];
      Node& nb = nodes_[static_cast<std::size_t>(n.b)];
      const int k = na.cols;
      for (int i = 0; i < n.rows; ++i) {
        for (int j = 0; j < n.cols; ++j) {
          const double g = n.grad[static_cast<std::size_t>(i) * n.cols + j];
          if (g == 0.0) continue;
          const std::size_t aoff = static_cast<std::size_t>(i) * k;
          const std::size_t boff = static_cast<std::size_t>(j) * k;
          for (int c = 0; c < k; ++c) {
            na.grad[aoff + c] += g * nb.val[boff + c];
            nb.grad[boff + c] += g * na.val[aoff + c];
          }
        }
      }
      break;
    }
    case Op::kCrossEntropy: {
      Node& nl = nodes_[static_cast<std::size_t>(n.a)];
      const double g = n.grad[0];
      double mx = nl.val[0];
      for (double v : nl.val) mx = std::max(mx, v);
      double z = 0.0;
      for (double v : nl.val) z += std::exp(v - mx);
      for (std::size_t i = 0; i < nl.val.size(); ++i) {
        double p = std::exp(nl.val[i] - mx) / z;
        if (static_cast<int>(i) == n.i0) p -= 1.0;
        nl.grad[i] += g * p;
      }
      break;
    }
    case Op::kQuantum: {
      Node& na = nodes_[static_cast<std::size_t>(n.a)];
      std::vector<double> angle_grad(na.val.size(), 0.0);
      quantum_bwd_(na.val, n.grad, angle_grad);
      for (std::size_t i = 0; i < angle_grad.size(); ++i) {
        na.grad[i] += angle_grad[i];
      }
      break;
    }
  }
}

}  // namespace qsmiles
