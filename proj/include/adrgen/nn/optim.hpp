//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "adrgen/errors.hpp"
#include "adrgen/nn/rng.hpp"
#include "adrgen/nn/tensor.hpp"

namespace adrgen::nn {

// Named trainable tensors; std::map keeps iteration order deterministic.
template <class T> class ParameterStore {
public:
  Tensor<T> add(const std::string &name, Tensor<T> t) {
    t.data().requires_grad = true;
    t.grad(); // allocate now so untouched parameters read as zero grad
    params_.emplace(name, t);
    return t;
  }

  Tensor<T> glorot(const std::string &name, std::size_t fan_in,
                   std::size_t fan_out, Rng &rng) {
    double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::vector<T> v(fan_in * fan_out);
    for (T &x : v)
      x = static_cast<T>(rng.uniform(-limit, limit));
    return add(name, Tensor<T>::from({fan_in, fan_out}, std::move(v)));
  }

  Tensor<T> normal(const std::string &name, std::size_t rows,
                   std::size_t cols, double stdev, Rng &rng) {
    std::vector<T> v(rows * cols);
    for (T &x : v)
      x = static_cast<T>(rng.normal(0.0, stdev));
    return add(name, Tensor<T>::from({rows, cols}, std::move(v)));
  }

  Tensor<T> zeros(const std::string &name, std::vector<std::size_t> shape) {
    return add(name, Tensor<T>::zeros(std::move(shape)));
  }

  Tensor<T> ones(const std::string &name, std::vector<std::size_t> shape) {
    Tensor<T> t = Tensor<T>::zeros(std::move(shape));
    for (T &x : t.values())
      x = T(1);
    return add(name, t);
  }

  Tensor<T> get(const std::string &name) const {
    auto it = params_.find(name);
    if (it == params_.end())
      throw Error(errc::format_error, "unknown parameter " + name);
    return it->second;
  }

  bool contains(const std::string &name) const {
    return params_.count(name) > 0;
  }

  void zero_grad() {
    for (auto &[name, t] : params_) {
      (void)name;
      std::fill(t.grad().begin(), t.grad().end(), T(0));
    }
  }

  const std::map<std::string, Tensor<T>> &all() const { return params_; }
  std::map<std::string, Tensor<T>> &all() { return params_; }

  // deep copy of the current values (for best-checkpoint snapshots)
  std::map<std::string, std::vector<T>> snapshot_values() const {
    std::map<std::string, std::vector<T>> out;
    for (const auto &[name, t] : params_)
      out[name] = t.values();
    return out;
  }

  void restore_values(const std::map<std::string, std::vector<T>> &snap) {
    for (auto &[name, t] : params_) {
      auto it = snap.find(name);
      if (it == snap.end() || it->second.size() != t.size())
        throw Error(errc::shape_mismatch, "snapshot mismatch for " + name);
      t.values() = it->second;
    }
  }

private:
  std::map<std::string, Tensor<T>> params_;
};

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Standard bias-corrected Adam over a parameter store.
template <class T> class Adam {
public:
  explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

  void step(ParameterStore<T> &params, double lr) {
    ++t_;
    double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (auto &[name, p] : params.all()) {
      std::vector<double> &m = m_[name];
      std::vector<double> &v = v_[name];
      if (m.size() != p.size()) {
        m.assign(p.size(), 0.0);
        v.assign(p.size(), 0.0);
      }
      auto &val = p.values();
      auto &grad = p.grad();
      for (std::size_t i = 0; i < val.size(); ++i) {
        double g = static_cast<double>(grad[i]);
        m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g;
        v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g * g;
        double mhat = m[i] / bc1;
        double vhat = v[i] / bc2;
        val[i] -= static_cast<T>(lr * mhat / (std::sqrt(vhat) + cfg_.eps));
      }
    }
  }

  long step_count() const { return t_; }

private:
  AdamConfig cfg_;
  long t_ = 0;
  std::map<std::string, std::vector<double>> m_, v_;
};

struct CosineSchedule {
  double lr_max = 1e-3;
  double lr_min = 1e-5;
  long total_steps = 1;
};

inline double cosine_lr(long step, const CosineSchedule &s) {
  if (step < 0 || step > s.total_steps)
    throw Error(errc::step_out_of_range,
                "step " + std::to_string(step) + " outside [0, " +
                    std::to_string(s.total_steps) + "]");
  double phase = 3.14159265358979323846 * static_cast<double>(step) /
                 static_cast<double>(s.total_steps);
  return s.lr_min + 0.5 * (s.lr_max - s.lr_min) * (1.0 + std::cos(phase));
}

} // namespace adrgen::nn
