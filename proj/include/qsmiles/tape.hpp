// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qsmiles/params.hpp"

namespace qsmiles {

// Handle into a Tape node. Valid only for the tape that produced it.
struct Tensor {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Reverse-mode automatic differentiation over a define-by-run tape.
//
// Nodes are created in topological order, so the backward pass is a single
// reverse sweep. Tensors are column vectors (cols == 1) or row-major
// matrices. Parameter leaves accumulate their gradients into the bound
// ParamStore so several tapes (one per batch sample) can share parameters.
class Tape {
 public:
  explicit Tape(ParamStore* params = nullptr) : params_(params) {}

  // --- leaves ------------------------------------------------------------
  Tensor constant(std::span<const double> values, int rows, int cols = 1);
  Tensor scalar(double value);
  Tensor param(int param_index);           // whole parameter
  Tensor param_row(int param_index, int row);  // one row of a matrix parameter

  // --- elementwise / vector ops -------------------------------------------
  Tensor add(Tensor a, Tensor b);
  Tensor add_n(std::span<const Tensor> terms);
  Tensor mul(Tensor a, Tensor b);
  Tensor affine(Tensor x, double scale, double shift);  // scale*x + shift
  Tensor tanh(Tensor x);
  Tensor sigmoid(Tensor x);
  // Softmax over kept indices; dropped positions get exactly zero.
  // keep must list at least one index.
  Tensor softmax(Tensor x, std::span<const int> keep = {});
  Tensor concat(Tensor a, Tensor b);
  Tensor slice(Tensor x, int offset, int length);
  Tensor kron(Tensor a, Tensor b);
  Tensor dot(Tensor a, Tensor b);
  Tensor mean(Tensor x);

  // --- matrix ops ----------------------------------------------------------
  Tensor stack_rows(std::span<const Tensor> rows);      // L vectors -> L x d
  Tensor matvec(Tensor m, Tensor x);                    // (r x c)(c) -> r
  Tensor tmatvec(Tensor m, Tensor x);                   // m^T x
  Tensor matmul_bt(Tensor a, Tensor b);                 // A B^T

  // --- losses ---------------------------------------------------------------
  // -log softmax(logits)[target]; target must not be PAD (id 0).
  Tensor cross_entropy(Tensor logits, int target);

  // --- quantum bridge --------------------------------------------------------
  // Forward maps an angle vector to an observable vector; backward receives
  // (angles, upstream observable grads) and must fill the angle gradient,
  // accumulating any internal parameter gradients itself.
  using QuantumForward =
      std::function<std::vector<double>(std::span<const double>)>;
  using QuantumBackward = std::function<void(
      std::span<const double>, std::span<const double>, std::span<double>)>;
  void bind_quantum(QuantumForward fwd, QuantumBackward bwd);
  Tensor quantum(Tensor angles);

  // --- access ---------------------------------------------------------------
  std::span<const double> value(Tensor t) const;
  std::span<const double> gradient(Tensor t) const;
  double scalar_value(Tensor t) const;
  int rows(Tensor t) const;
  int cols(Tensor t) const;

  // Reverse sweep seeding d(loss)/d(loss) = seed. Parameter leaf gradients
  // are accumulated (not overwritten) in the bound ParamStore.
  void backward(Tensor loss, double seed = 1.0);

  std::size_t node_count() const { return nodes_.size(); }

 private:
  enum class Op : unsigned char {
    kConst,
    kParam,
    kParamRow,
    kAdd,
    kAddN,
    kMul,
    kAffine,
    kTanh,
    kSigmoid,
    kSoftmax,
    kConcat,
    kSlice,
    kKron,
    kDot,
    kMean,
    kStackRows,
    kMatVec,
    kTMatVec,
    kMatMulBT,
    kCrossEntropy,
    kQuantum,
  };

  struct Node {
    Op op;
    int a = -1;
    int b = -1;
    int i0 = 0;
    double x0 = 0.0;
    double x1 = 0.0;
    int rows = 0;
    int cols = 1;
    std::vector<double> val;
    std::vector<double> grad;
    std::vector<int> list;  // extra inputs or softmax keep-list
  };

  std::vector<Node> nodes_;
  ParamStore* params_;
  QuantumForward quantum_fwd_;
  QuantumBackward quantum_bwd_;

  Node& node(Tensor t);
  const Node& node(Tensor t) const;
  int push(Node&& n);
  void require_vector(Tensor t, const char* who) const;
  void require_same_shape(Tensor a, Tensor b, const char* who) const;
  void backward_node(int id);
  static std::string shape_str(const Node& n);
};

}  // namespace qsmiles
