//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "adrgen/errors.hpp"

namespace adrgen::pipeline {

struct MetricsReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long tp = 0;
  long fp = 0;
  long fn = 0;
};

// Order-independent set matching: a predicted label is a true positive
// iff it is in the truth set. Counts are accumulated globally over all
// drugs; zero-denominator ratios are reported as 0.
template <class Id>
MetricsReport evaluate(const std::vector<std::set<Id>> &predictions,
                       const std::vector<std::set<Id>> &truths) {
  if (predictions.size() != truths.size())
    throw Error(errc::length_mismatch,
                "prediction and truth lists differ in length");
  MetricsReport r;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    for (const Id &p : predictions[i]) {
      if (truths[i].count(p))
        ++r.tp;
      else
        ++r.fp;
    }
    for (const Id &t : truths[i])
      if (!predictions[i].count(t))
        ++r.fn;
  }
  r.precision = r.tp + r.fp > 0
                    ? static_cast<double>(r.tp) /
                          static_cast<double>(r.tp + r.fp)
                    : 0.0;
  r.recall = r.tp + r.fn > 0 ? static_cast<double>(r.tp) /
                                   static_cast<double>(r.tp + r.fn)
                             : 0.0;
  r.f1 = r.precision + r.recall > 0.0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

struct AggregateMetrics {
  double precision_mean = 0, precision_std = 0;
  double recall_mean = 0, recall_std = 0;
  double f1_mean = 0, f1_std = 0;
  bool single_seed_warning = false;
  std::vector<MetricsReport> per_seed;
};

// Mean and sample standard deviation over per-seed reports.
inline AggregateMetrics aggregate(const std::vector<MetricsReport> &reports) {
  if (reports.empty())
    throw Error(errc::length_mismatch, "no reports to aggregate");
  AggregateMetrics a;
  a.per_seed = reports;
  auto stats = [&](auto pick, double &mean, double &stdev) {
    double acc = 0;
    for (const MetricsReport &r : reports)
      acc += pick(r);
    mean = acc / static_cast<double>(reports.size());
    if (reports.size() < 2) {
      stdev = 0.0;
      return;
    }
    double sq = 0;
    for (const MetricsReport &r : reports) {
      double d = pick(r) - mean;
      sq += d * d;
    }
    stdev = std::sqrt(sq / static_cast<double>(reports.size() - 1));
  };
  stats([](const MetricsReport &r) { return r.precision; }, a.precision_mean,
        a.precision_std);
  stats([](const MetricsReport &r) { return r.recall; }, a.recall_mean,
        a.recall_std);
  stats([](const MetricsReport &r) { return r.f1; }, a.f1_mean, a.f1_std);
  a.single_seed_warning = reports.size() == 1;
  return a;
}

// "m ± s" presentation with four decimals.
inline std::string format_pm(double mean, double stdev) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f±%.4f", mean, stdev);
  return buf;
}

} // namespace adrgen::pipeline
