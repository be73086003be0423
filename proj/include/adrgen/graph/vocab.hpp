//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "adrgen/errors.hpp"

namespace adrgen::graph {

// tf * ln(n / (1 + df)); negative for ubiquitous motifs by construction.
inline double tfidf_weight(long tf, long df, long n) {
  if (tf < 1 || df < 1 || n < 1)
    throw Error(errc::domain_error,
                "tfidf_weight requires tf >= 1, df >= 1, n >= 1");
  return static_cast<double>(tf) *
         std::log(static_cast<double>(n) / (1.0 + static_cast<double>(df)));
}

// Pointwise mutual information over molecule-level co-occurrence counts,
// clamped at zero. c_ij = 0 short-circuits to 0.
inline double pmi_weight(long c_ij, long c_i, long c_j, long n) {
  if (c_i < 1 || c_j < 1 || n < 1 || c_ij < 0 ||
      c_ij > std::min(c_i, c_j) || std::max(c_i, c_j) > n)
    throw Error(errc::domain_error, "pmi_weight preconditions violated");
  if (c_ij == 0)
    return 0.0;
  double raw = std::log((static_cast<double>(c_ij) * static_cast<double>(n)) /
                        (static_cast<double>(c_i) * static_cast<double>(c_j)));
  return raw > 0.0 ? raw : 0.0;
}

struct VocabEntry {
  std::string canonical;
  int index = 0;
  long df = 0;
  double avg_tfidf = 0.0;
};

struct MotifVocabulary {
  std::vector<VocabEntry> entries; // ordered by index
  long n_molecules = 0;

  int size() const { return static_cast<int>(entries.size()); }

  int index_of(const std::string &canonical) const {
    auto it = lookup_.find(canonical);
    return it == lookup_.end() ? -1 : it->second;
  }

  void rebuild_lookup() {
    lookup_.clear();
    for (const VocabEntry &e : entries)
      lookup_[e.canonical] = e.index;
  }

private:
  std::map<std::string, int> lookup_;
};

// corpus: one (drug id, motif multiset) per training molecule. Indices are
// assigned by descending document frequency, ties by canonical string.
inline MotifVocabulary build_vocabulary(
    const std::vector<std::pair<std::string, std::vector<std::string>>>
        &corpus) {
  if (corpus.empty())
    throw Error(errc::empty_corpus, "no molecules to build a vocabulary from");
  long n = static_cast<long>(corpus.size());
  std::map<std::string, long> df;
  std::map<std::string, std::vector<long>> tfs; // per containing molecule
  for (const auto &[drug_id, motifs] : corpus) {
    (void)drug_id;
    std::map<std::string, long> local;
    for (const std::string &m : motifs)
      local[m]++;
    for (const auto &[canon, tf] : local) {
      df[canon]++;
      tfs[canon].push_back(tf);
    }
  }
  std::vector<VocabEntry> entries;
  for (const auto &[canon, d] : df) {
    VocabEntry e;
    e.canonical = canon;
    e.df = d;
    double acc = 0.0;
    for (long tf : tfs[canon])
      acc += tfidf_weight(tf, d, n);
    e.avg_tfidf = acc / static_cast<double>(tfs[canon].size());
    entries.push_back(std::move(e));
  }
  std::sort(entries.begin(), entries.end(),
            [](const VocabEntry &a, const VocabEntry &b) {
              if (a.df != b.df)
                return a.df > b.df;
              return a.canonical < b.canonical;
            });
  MotifVocabulary v;
  v.n_molecules = n;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    entries[i].index = static_cast<int>(i);
    v.entries.push_back(entries[i]);
  }
  v.rebuild_lookup();
  return v;
}

} // namespace adrgen::graph
