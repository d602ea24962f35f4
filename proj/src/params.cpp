// SPDX-License-Identifier: Apache-2.0
#include "qsmiles/params.hpp"

#include <cmath>

#include "qsmiles/errors.hpp"

namespace qsmiles {

int ParamStore::add(const std::string& name, int rows, int cols) {
  if (rows <= 0 || cols <= 0) {
    throw config_error("param " + name + ": non-positive shape " +
                       std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (find(name) >= 0) {
    throw config_error("param " + name + ": duplicate name");
  }
  Param p;
  p.name = name;
  p.rows = rows;
  p.cols = cols;
  const std::size_t n = static_cast<std::size_t>(rows) * cols;
  p.value.assign(n, 0.0);
  p.grad.assign(n, 0.0);
  p.m.assign(n, 0.0);
  p.v.assign(n, 0.0);
  params_.push_back(std::move(p));
  return static_cast<int>(params_.size()) - 1;
}

int ParamStore::add_uniform(const std::string& name, int rows, int cols,
                            Rng& rng, double lo, double hi) {
  const int idx = add(name, rows, cols);
  for (double& x : params_.back().value) x = rng.uniform(lo, hi);
  return idx;
}

int ParamStore::find(const std::string& name) const {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (params_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::size_t ParamStore::total_values() const {
  std::size_t total = 0;
  for (const auto& p : params_) total += p.size();
  return total;
}

void ParamStore::zero_grad() {
  for (auto& p : params_) {
    std::fill(p.grad.begin(), p.grad.end(), 0.0);
  }
}

void AdamOptimizer::step(ParamStore& store, double lr) {
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, t_);
  const double bc2 = 1.0 - std::pow(beta2_, t_);
  for (auto& p : store.all()) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double g = p.grad[i];
      p.m[i] = beta1_ * p.m[i] + (1.0 - beta1_) * g;
      p.v[i] = beta2_ * p.v[i] + (1.0 - beta2_) * g * g;
      const double mhat = p.m[i] / bc1;
      const double vhat = p.v[i] / bc2;
      p.value[i] -= lr * mhat / (std::sqrt(vhat) + eps_);
    }
  }
}

double cosine_lr(std::size_t step, std::size_t total_steps, double lr_max,
                 double lr_min) {
  if (total_steps == 0) {
    throw config_error("cosine_lr: total_steps must be positive");
  }
  const double pi = 3.14159265358979323846;
  const double frac = static_cast<double>(step) / static_cast<double>(total_steps);
  return lr_min + 0.5 * (lr_max - lr_min) * (1.0 + std::cos(pi * frac));
}

}  // namespace qsmiles
