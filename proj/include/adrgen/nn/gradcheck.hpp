//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "adrgen/nn/tensor.hpp"

namespace adrgen::nn {

// Central finite differences against reverse-mode gradients. f must build
// a fresh tape, run the forward pass from x's current values, call
// backward, and return the scalar loss value. Returns the max relative
// error over all coordinates of x.
inline double grad_check(
    const std::function<double(Tensor<double>, bool)> &f, Tensor<double> x,
    double eps = 1e-5) {
  // analytic pass
  std::fill(x.grad().begin(), x.grad().end(), 0.0);
  f(x, true);
  std::vector<double> analytic = x.grad();
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double keep = x.values()[i];
    x.values()[i] = keep + eps;
    double up = f(x, false);
    x.values()[i] = keep - eps;
    double down = f(x, false);
    x.values()[i] = keep;
    double numeric = (up - down) / (2.0 * eps);
    double denom = std::max(1e-8, std::abs(analytic[i]) + std::abs(numeric));
    worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
  }
  return worst;
}

} // namespace adrgen::nn
