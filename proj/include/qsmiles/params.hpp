// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qsmiles/rng.hpp"

namespace qsmiles {

// One named trainable array (matrix or vector) with its gradient
// accumulator and Adam moment buffers.
struct Param {
  std::string name;
  int rows = 0;
  int cols = 1;
  std::vector<double> value;
  std::vector<double> grad;
  std::vector<double> m;  // first moment
  std::vector<double> v;  // second moment

  std::size_t size() const { return value.size(); }
};

class ParamStore {
 public:
  // Zero-initialized parameter; returns its index.
  int add(const std::string& name, int rows, int cols = 1);

  // Uniform init in [lo, hi).
  int add_uniform(const std::string& name, int rows, int cols, Rng& rng,
                  double lo, double hi);

  Param& at(int index) { return params_[static_cast<std::size_t>(index)]; }
  const Param& at(int index) const {
    return params_[static_cast<std::size_t>(index)];
  }
  int find(const std::string& name) const;  // -1 when absent

  std::size_t count() const { return params_.size(); }
  std::vector<Param>& all() { return params_; }
  const std::vector<Param>& all() const { return params_; }

  std::size_t total_values() const;
  void zero_grad();

 private:
  std::vector<Param> params_;
};

// Bias-corrected Adam over every parameter in a store. The learning rate is
// supplied per step so schedules can drive it.
class AdamOptimizer {
 public:
  AdamOptimizer(double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(ParamStore& store, double lr);

  int steps_taken() const { return t_; }
  void set_steps_taken(int t) { t_ = t; }
  double beta1() const { return beta1_; }
  double beta2() const { return beta2_; }
  double eps() const { return eps_; }

 private:
  double beta1_, beta2_, eps_;
  int t_ = 0;
};

// Cosine annealing from lr_max at step 0 to lr_min at total_steps.
double cosine_lr(std::size_t step, std::size_t total_steps, double lr_max,
                 double lr_min);

}  // namespace qsmiles
