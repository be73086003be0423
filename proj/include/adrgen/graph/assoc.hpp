//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "adrgen/errors.hpp"
#include "adrgen/graph/features.hpp"
#include "adrgen/graph/vocab.hpp"

namespace adrgen::graph {

// Per-molecule fragmentation summary: the motif multiset plus which motif
// pairs were joined by a severed bond inside this molecule.
struct MoleculeMotifInfo {
  std::string drug_id;
  std::vector<std::string> motifs; // one canonical per fragment
  std::vector<std::pair<int, int>> adjacent_fragments;
};

struct AssocNode {
  enum class Kind { motif, molecule };
  Kind kind = Kind::motif;
  int motif_index = -1;  // valid for motif nodes
  std::string drug_id;   // valid for molecule nodes
};

struct AssocEdge {
  enum class Kind { mol_motif, motif_motif };
  int u = 0;
  int v = 0;
  Kind kind = Kind::mol_motif;
  double weight = 0.0;
};

struct AssociationGraph {
  std::vector<AssocNode> nodes;
  std::vector<AssocEdge> edges;
  int vocab_size = 0;
  // Sparse init vectors over the vocabulary dimension: one-hot for motif
  // nodes, bag-of-words counts for molecule nodes.
  std::vector<std::map<int, double>> node_init;
  FeatureStats feature_stats; // standardization block carried by the file
  int dropped_motif_warnings = 0;

  int find_molecule_node(const std::string &drug_id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].kind == AssocNode::Kind::molecule &&
          nodes[i].drug_id == drug_id)
        return static_cast<int>(i);
    return -1;
  }
};

// Builds the training association graph: one node per vocabulary motif,
// one per corpus molecule; molecule-motif edges weighted by TF-IDF and
// motif-motif edges (pairs severed-bond-adjacent in some molecule)
// weighted by clamped PMI over molecule-level co-occurrence. Zero-weight
// motif-motif edges are dropped.
inline AssociationGraph
build_association_graph(const std::vector<MoleculeMotifInfo> &corpus,
                        const MotifVocabulary &vocab) {
  AssociationGraph g;
  g.vocab_size = vocab.size();
  for (const VocabEntry &e : vocab.entries) {
    AssocNode node;
    node.kind = AssocNode::Kind::motif;
    node.motif_index = e.index;
    g.nodes.push_back(node);
    g.node_init.push_back({{e.index, 1.0}});
  }
  long n = vocab.n_molecules;
  // molecule-level co-occurrence sets for PMI
  std::vector<std::set<int>> contains(corpus.size());
  std::set<std::pair<int, int>> adjacent_pairs;
  for (std::size_t mi = 0; mi < corpus.size(); ++mi) {
    const MoleculeMotifInfo &info = corpus[mi];
    for (const std::string &canon : info.motifs) {
      int idx = vocab.index_of(canon);
      if (idx < 0)
        throw Error(errc::unknown_motif,
                    "motif not in vocabulary: " + canon);
      contains[mi].insert(idx);
    }
    for (auto [fa, fb] : info.adjacent_fragments) {
      int ia = vocab.index_of(info.motifs[static_cast<std::size_t>(fa)]);
      int ib = vocab.index_of(info.motifs[static_cast<std::size_t>(fb)]);
      if (ia != ib)
        adjacent_pairs.insert({std::min(ia, ib), std::max(ia, ib)});
    }
  }
  for (std::size_t mi = 0; mi < corpus.size(); ++mi) {
    const MoleculeMotifInfo &info = corpus[mi];
    AssocNode node;
    node.kind = AssocNode::Kind::molecule;
    node.drug_id = info.drug_id;
    int node_id = static_cast<int>(g.nodes.size());
    g.nodes.push_back(node);
    std::map<int, double> bow;
    std::map<int, long> tf;
    for (const std::string &canon : info.motifs) {
      int idx = vocab.index_of(canon);
      bow[idx] += 1.0;
      tf[idx] += 1;
    }
    g.node_init.push_back(bow);
    for (const auto &[idx, count] : tf) {
      AssocEdge e;
      e.u = node_id;
      e.v = idx; // motif node id == vocabulary index
      e.kind = AssocEdge::Kind::mol_motif;
      e.weight = tfidf_weight(
          count, vocab.entries[static_cast<std::size_t>(idx)].df, n);
      g.edges.push_back(e);
    }
  }
  // PMI over co-occurrence counts for adjacency-backed pairs
  for (auto [ia, ib] : adjacent_pairs) {
    long c_ij = 0;
    for (const auto &s : contains)
      if (s.count(ia) && s.count(ib))
        ++c_ij;
    double w = pmi_weight(c_ij, vocab.entries[static_cast<std::size_t>(ia)].df,
                          vocab.entries[static_cast<std::size_t>(ib)].df, n);
    if (w > 0.0) {
      AssocEdge e;
      e.u = ia;
      e.v = ib;
      e.kind = AssocEdge::Kind::motif_motif;
      e.weight = w;
      g.edges.push_back(e);
    }
  }
  return g;
}

struct AttachResult {
  int node_id = -1;
  int dropped = 0; // motifs absent from the vocabulary
};

// Adds a query molecule node with training-time TF-IDF weights. The
// vocabulary is never mutated; out-of-vocabulary motifs are dropped with a
// warning count.
inline AttachResult attach_query_molecule(AssociationGraph &g,
                                          const MotifVocabulary &vocab,
                                          const std::vector<std::string> &motifs,
                                          const std::string &drug_id) {
  std::map<int, long> tf;
  int dropped = 0;
  for (const std::string &canon : motifs) {
    int idx = vocab.index_of(canon);
    if (idx < 0) {
      ++dropped;
      continue;
    }
    tf[idx]++;
  }
  if (tf.empty())
    throw Error(errc::no_known_motif,
                "no motif of the query is in the vocabulary");
  AssocNode node;
  node.kind = AssocNode::Kind::molecule;
  node.drug_id = drug_id;
  int node_id = static_cast<int>(g.nodes.size());
  g.nodes.push_back(node);
  std::map<int, double> bow;
  for (const auto &[idx, count] : tf)
    bow[idx] = static_cast<double>(count);
  g.node_init.push_back(bow);
  for (const auto &[idx, count] : tf) {
    // motif node ids may differ from vocabulary indices in subgraphs
    int motif_node = -1;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
      if (g.nodes[i].kind == AssocNode::Kind::motif &&
          g.nodes[i].motif_index == idx) {
        motif_node = static_cast<int>(i);
        break;
      }
    if (motif_node < 0)
      continue; // motif absent from this subgraph
    AssocEdge e;
    e.u = node_id;
    e.v = motif_node;
    e.kind = AssocEdge::Kind::mol_motif;
    e.weight = tfidf_weight(count,
                            vocab.entries[static_cast<std::size_t>(idx)].df,
                            vocab.n_molecules);
    g.edges.push_back(e);
  }
  g.dropped_motif_warnings += dropped;
  AttachResult r;
  r.node_id = node_id;
  r.dropped = dropped;
  return r;
}

// Subgraph containing only the given motifs (by vocabulary index) and the
// motif-motif edges among them; the skeleton evaluation subgraphs are
// grown from. One-hot init vectors keep their full-vocabulary indices.
inline AssociationGraph
motif_subgraph(const AssociationGraph &train_graph,
               const std::set<int> &motif_indices) {
  AssociationGraph g;
  g.vocab_size = train_graph.vocab_size;
  g.feature_stats = train_graph.feature_stats;
  std::map<int, int> node_map; // train node id -> new node id
  for (std::size_t i = 0; i < train_graph.nodes.size(); ++i) {
    const AssocNode &node = train_graph.nodes[i];
    if (node.kind != AssocNode::Kind::motif ||
        !motif_indices.count(node.motif_index))
      continue;
    node_map[static_cast<int>(i)] = static_cast<int>(g.nodes.size());
    g.nodes.push_back(node);
    g.node_init.push_back(train_graph.node_init[i]);
  }
  for (const AssocEdge &e : train_graph.edges) {
    if (e.kind != AssocEdge::Kind::motif_motif)
      continue;
    auto iu = node_map.find(e.u);
    auto iv = node_map.find(e.v);
    if (iu == node_map.end() || iv == node_map.end())
      continue;
    AssocEdge ne = e;
    ne.u = iu->second;
    ne.v = iv->second;
    g.edges.push_back(ne);
  }
  return g;
}

} // namespace adrgen::graph
