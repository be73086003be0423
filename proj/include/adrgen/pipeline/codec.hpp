//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "adrgen/errors.hpp"
#include "adrgen/model/decoder.hpp"
#include "adrgen/nn/rng.hpp"

namespace adrgen::pipeline {

inline constexpr int kPad = 0;
inline constexpr int kBos = 1;
inline constexpr int kEos = 2;
inline constexpr int kUnk = 3;
inline constexpr int kFirstLabelId = 4;

// Label <-> token id bijection. Ids are dense: specials 0..3, then labels
// ordered by descending training frequency (ties by label string), capped
// at `cap` labels; rarer labels fall to UNK.
class LabelCodec {
public:
  LabelCodec() = default;

  // label_lists: per training record, the deduplicated label list.
  static LabelCodec build(const std::vector<std::vector<std::string>> &label_lists,
                          std::size_t cap) {
    std::map<std::string, long> freq;
    for (const auto &labels : label_lists)
      for (const std::string &l : labels)
        freq[l]++;
    std::vector<std::pair<std::string, long>> order(freq.begin(), freq.end());
    std::sort(order.begin(), order.end(), [](const auto &a, const auto &b) {
      if (a.second != b.second)
        return a.second > b.second;
      return a.first < b.first;
    });
    if (order.size() > cap)
      order.resize(cap);
    LabelCodec c;
    for (const auto &[label, n] : order) {
      (void)n;
      c.id_of_[label] = static_cast<int>(c.labels_.size()) + kFirstLabelId;
      c.labels_.push_back(label);
    }
    return c;
  }

  // Rebuild from a persisted label list (order defines the ids).
  static LabelCodec from_labels(const std::vector<std::string> &labels) {
    LabelCodec c;
    for (const std::string &l : labels) {
      c.id_of_[l] = static_cast<int>(c.labels_.size()) + kFirstLabelId;
      c.labels_.push_back(l);
    }
    return c;
  }

  int size() const { return static_cast<int>(labels_.size()) + 4; }
  int n_labels() const { return static_cast<int>(labels_.size()); }

  int id_of(const std::string &label) const {
    auto it = id_of_.find(label);
    return it == id_of_.end() ? kUnk : it->second;
  }

  const std::string &label_of(int id) const {
    if (id < kFirstLabelId || id >= size())
      throw Error(errc::format_error, "token id " + std::to_string(id) +
                                          " is not a label");
    return labels_[static_cast<std::size_t>(id - kFirstLabelId)];
  }

  bool is_label(int id) const { return id >= kFirstLabelId && id < size(); }

  const std::vector<std::string> &labels() const { return labels_; }

  model::SpecialTokens specials() const {
    return model::SpecialTokens{kPad, kBos, kEos, kUnk};
  }

private:
  std::map<std::string, int> id_of_;
  std::vector<std::string> labels_;
};

// Teacher-forcing target order. The autoregressive factorization needs a
// fixed arrangement even though the label set itself is unordered.
enum class LabelOrder {
  frequency, // ascending id = descending training-corpus frequency
  dataset,   // record order as loaded
  random,    // reshuffled per call (per epoch during training)
};

// Canonical target sequence: BOS + first max_len label ids + EOS, padded
// with PAD to max_len+2. Under frequency order, known labels sort
// ascending by id and unknown labels trail as UNK.
inline std::vector<int> encode_targets(const std::vector<std::string> &labels,
                                       const LabelCodec &codec, int max_len,
                                       LabelOrder order = LabelOrder::frequency,
                                       nn::Rng *rng = nullptr) {
  std::vector<int> ids;
  if (order == LabelOrder::frequency) {
    std::vector<int> known;
    int unknown = 0;
    for (const std::string &l : labels) {
      int id = codec.id_of(l);
      if (id == kUnk)
        ++unknown;
      else
        known.push_back(id);
    }
    std::sort(known.begin(), known.end());
    for (int i = 0; i < unknown; ++i)
      known.push_back(kUnk);
    ids = std::move(known);
  } else {
    for (const std::string &l : labels)
      ids.push_back(codec.id_of(l));
    if (order == LabelOrder::random) {
      if (!rng)
        throw Error(errc::format_error,
                    "random label order needs a seeded rng");
      rng->shuffle(ids);
    }
  }
  if (static_cast<int>(ids.size()) > max_len)
    ids.resize(static_cast<std::size_t>(max_len));
  std::vector<int> seq;
  seq.reserve(static_cast<std::size_t>(max_len) + 2);
  seq.push_back(kBos);
  seq.insert(seq.end(), ids.begin(), ids.end());
  seq.push_back(kEos);
  while (seq.size() < static_cast<std::size_t>(max_len) + 2)
    seq.push_back(kPad);
  return seq;
}

// Cut at the first EOS, drop specials, return the label id set.
inline std::set<int> clean_sequence(const std::vector<int> &tokens,
                                    const LabelCodec &codec) {
  std::set<int> out;
  for (int t : tokens) {
    if (t == kEos)
      break;
    if (codec.is_label(t))
      out.insert(t);
  }
  return out;
}

} // namespace adrgen::pipeline
