//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <random>

namespace adrgen::test {

// Thin deterministic wrapper; tests freeze seeds so expected values stay
// stable across runs.
class TestRng {
public:
  explicit TestRng(std::uint64_t seed) : eng_(seed) {}

  int uniform_int(int lo, int hi) { // inclusive
    std::uniform_int_distribution<int> d(lo, hi);
    return d(eng_);
  }
  double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(eng_);
  }
  bool chance(double p) { return uniform(0.0, 1.0) < p; }
  std::mt19937_64 &engine() { return eng_; }

private:
  std::mt19937_64 eng_;
};

} // namespace adrgen::test
