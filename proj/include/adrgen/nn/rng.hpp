//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace adrgen::nn {

// Deterministic RNG with hand-rolled transforms. mt19937_64 is bit-exact
// across standard libraries; the distributions in <random> are not, so the
// mappings are done here to keep seeded runs reproducible everywhere.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + uniform01() * (hi - lo);
  }

  // [0, n)
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0)
      return 0;
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = next_u64();
    while (x >= limit)
      x = next_u64();
    return x % n;
  }

  double normal(double mean = 0.0, double stdev = 1.0) {
    if (have_spare_) {
      have_spare_ = false;
      return mean + stdev * spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 1e-300) // avoid log(0)
      u1 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return mean + stdev * r * std::cos(theta);
  }

  template <class Vec> void shuffle(Vec &v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

} // namespace adrgen::nn
