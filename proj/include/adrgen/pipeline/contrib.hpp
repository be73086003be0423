//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "adrgen/graph/assoc.hpp"
#include "adrgen/model/network.hpp"
#include "adrgen/pipeline/codec.hpp"
#include "adrgen/pipeline/train.hpp"

namespace adrgen::pipeline {

struct ContributionMatrix {
  std::vector<int> motif_indices; // motifs present in the drug, ascending
  std::vector<int> label_ids;     // labels scored, target order
  std::vector<double> scores;     // |motifs| x |labels| row-major

  double score_of(int motif_index, int label_id) const {
    std::size_t mi = 0;
    for (; mi < motif_indices.size(); ++mi)
      if (motif_indices[mi] == motif_index)
        break;
    if (mi == motif_indices.size())
      return 0.0; // motif absent from the drug: exactly-zero row
    for (std::size_t li = 0; li < label_ids.size(); ++li)
      if (label_ids[li] == label_id)
        return scores[mi * label_ids.size() + li];
    return 0.0;
  }
};

namespace detail {

// Attach allowing an all-masked bag of words: the probe needs molecule
// nodes whose every motif has been zeroed out.
template <class T>
int attach_with_mask(graph::AssociationGraph &sub,
                     const graph::MotifVocabulary &vocab,
                     const std::vector<std::string> &motifs,
                     const std::set<int> &masked,
                     const std::string &drug_id) {
  std::map<int, long> tf;
  for (const std::string &m : motifs) {
    int idx = vocab.index_of(m);
    if (idx >= 0 && !masked.count(idx))
      tf[idx]++;
  }
  graph::AssocNode node;
  node.kind = graph::AssocNode::Kind::molecule;
  node.drug_id = drug_id;
  int node_id = static_cast<int>(sub.nodes.size());
  sub.nodes.push_back(node);
  std::map<int, double> bow;
  for (const auto &[idx, count] : tf)
    bow[idx] = static_cast<double>(count);
  sub.node_init.push_back(bow);
  for (const auto &[idx, count] : tf) {
    int motif_node = -1;
    for (std::size_t i = 0; i < sub.nodes.size(); ++i)
      if (sub.nodes[i].kind == graph::AssocNode::Kind::motif &&
          sub.nodes[i].motif_index == idx) {
        motif_node = static_cast<int>(i);
        break;
      }
    if (motif_node < 0)
      continue;
    graph::AssocEdge e;
    e.u = node_id;
    e.v = motif_node;
    e.kind = graph::AssocEdge::Kind::mol_motif;
    e.weight = graph::tfidf_weight(
        count, vocab.entries[static_cast<std::size_t>(idx)].df,
        vocab.n_molecules);
    sub.edges.push_back(e);
  }
  return node_id;
}

template <class T>
std::vector<double>
forced_probs_with_mask(model::Network<T> &net, const Artifacts &art,
                       const PreparedDrug &drug,
                       const graph::MolecularGraphTensors &tensors,
                       const std::set<int> &all_indices,
                       const std::set<int> &masked,
                       const std::vector<int> &targets) {
  graph::AssociationGraph sub =
      graph::motif_subgraph(art.train_graph, all_indices);
  int node = attach_with_mask<T>(sub, art.vocab, drug.motifs.motifs, masked,
                                 drug.drug_id);
  nn::Tape<T> tape(false);
  auto assoc_in = net.assoc_input(sub);
  nn::Tensor<T> assoc_emb = net.assoc_embeddings(tape, assoc_in);
  model::Memory<T> mem = make_memory(net, tape, tensors, assoc_emb, node);
  return model::forced_step_probabilities(targets, mem, net.decoder(),
                                          art.codec.specials());
}

} // namespace detail

// Difference between the teacher-forced per-label probability under full
// features and after masking one motif (bag-of-words entry zeroed, edge
// dropped). When the record has no labels, the model's own generated
// sequence is probed instead.
template <class T>
ContributionMatrix
contribution_analysis(model::Network<T> &net, const Artifacts &art,
                      const PreparedDrug &drug,
                      const graph::MolecularGraphTensors &tensors,
                      bool allow_duplicates = false) {
  ContributionMatrix out;
  std::set<int> indices;
  for (const std::string &m : drug.motifs.motifs) {
    int idx = art.vocab.index_of(m);
    if (idx >= 0)
      indices.insert(idx);
  }
  if (indices.empty())
    throw Error(errc::no_known_motif,
                "no motif of " + drug.drug_id + " is in the vocabulary");
  out.motif_indices.assign(indices.begin(), indices.end());

  std::vector<int> targets;
  if (!drug.labels.empty()) {
    std::vector<int> padded =
        encode_targets(drug.labels, art.codec, net.dims().max_len);
    for (int t : padded)
      if (art.codec.is_label(t))
        targets.push_back(t);
  } else {
    std::set<int> predicted = predict_label_set(
        net, art, drug, tensors, allow_duplicates);
    targets.assign(predicted.begin(), predicted.end());
  }
  if (targets.empty())
    throw Error(errc::unknown_drug,
                "no scorable labels for " + drug.drug_id);
  out.label_ids = targets;

  std::vector<double> baseline = detail::forced_probs_with_mask(
      net, art, drug, tensors, indices, {}, targets);
  out.scores.assign(out.motif_indices.size() * targets.size(), 0.0);
  for (std::size_t mi = 0; mi < out.motif_indices.size(); ++mi) {
    std::vector<double> masked = detail::forced_probs_with_mask(
        net, art, drug, tensors, indices, {out.motif_indices[mi]}, targets);
    for (std::size_t li = 0; li < targets.size(); ++li)
      out.scores[mi * targets.size() + li] = baseline[li] - masked[li];
  }
  return out;
}

// Joint masking of several motifs at once, for the non-additivity probe.
template <class T>
std::vector<double>
joint_masked_drop(model::Network<T> &net, const Artifacts &art,
                  const PreparedDrug &drug,
                  const graph::MolecularGraphTensors &tensors,
                  const std::set<int> &mask, const std::vector<int> &targets) {
  std::set<int> indices;
  for (const std::string &m : drug.motifs.motifs) {
    int idx = art.vocab.index_of(m);
    if (idx >= 0)
      indices.insert(idx);
  }
  std::vector<double> baseline = detail::forced_probs_with_mask(
      net, art, drug, tensors, indices, {}, targets);
  std::vector<double> masked = detail::forced_probs_with_mask(
      net, art, drug, tensors, indices, mask, targets);
  std::vector<double> drop(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i)
    drop[i] = baseline[i] - masked[i];
  return drop;
}

inline std::string contribution_csv(const ContributionMatrix &m,
                                    const graph::MotifVocabulary &vocab,
                                    const LabelCodec &codec) {
  std::ostringstream out;
  out << "motif_index,motif_canonical,label_id,label_name,score\n";
  char buf[64];
  for (std::size_t mi = 0; mi < m.motif_indices.size(); ++mi)
    for (std::size_t li = 0; li < m.label_ids.size(); ++li) {
      int motif = m.motif_indices[mi];
      int label = m.label_ids[li];
      std::snprintf(buf, sizeof buf, "%.9g",
                    m.scores[mi * m.label_ids.size() + li]);
      std::string canon =
          vocab.entries[static_cast<std::size_t>(motif)].canonical;
      // canonical strings never contain commas or quotes; plain cells
      out << motif << "," << canon << "," << label << ","
          << codec.label_of(label) << "," << buf << "\n";
    }
  return out.str();
}

} // namespace adrgen::pipeline
