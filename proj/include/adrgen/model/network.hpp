//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "adrgen/errors.hpp"
#include "adrgen/graph/assoc.hpp"
#include "adrgen/graph/features.hpp"
#include "adrgen/model/decoder.hpp"
#include "adrgen/model/gat.hpp"
#include "adrgen/nn/optim.hpp"
#include "adrgen/nn/tensor.hpp"

namespace adrgen::model {

struct NetworkDims {
  int d_model = 128;
  int gat_heads = 2;
  int gat_layers = 2;
  int decoder_heads = 4;
  int decoder_layers = 3;
  int max_len = 200;
  int max_atoms = 128;
  int n_tokens = 0;     // label vocabulary + 4 specials
  int assoc_dim = 0;    // motif vocabulary size (one-hot width)
  double dropout = 0.1;
  bool sinusoidal_pos = false;
};

// The assembled network: molecular-graph GAT, association-graph GAT,
// fusion MLP and transformer decoder over one parameter store.
template <class T> class Network {
public:
  Network(const NetworkDims &dims, nn::Rng &rng) : dims_(dims) {
    if (dims.d_model % dims.decoder_heads != 0)
      throw Error(errc::shape_mismatch,
                  "d_model must be divisible by decoder head count");
    if (dims.n_tokens <= 4 || dims.assoc_dim <= 0)
      throw Error(errc::shape_mismatch, "network dims incomplete");
    mol_gat_ = make_gat_stack(params_, "gat.mol", dims.gat_layers,
                              dims.gat_heads, graph::kNodeFeatureDim,
                              dims.d_model, graph::kEdgeFeatureDim, rng);
    assoc_gat_ = make_gat_stack(params_, "gat.assoc", dims.gat_layers,
                                dims.gat_heads, dims.assoc_dim, dims.d_model,
                                /*edge_dim=*/1, rng);
    std::size_t d = static_cast<std::size_t>(dims.d_model);
    fuse_W1_ = params_.glorot("fuse.l1.W", 2 * d, d, rng);
    fuse_b1_ = params_.zeros("fuse.l1.b", {1, d});
    fuse_W2_ = params_.glorot("fuse.l2.W", d, d, rng);
    fuse_b2_ = params_.zeros("fuse.l2.b", {1, d});

    std::size_t n_tokens = static_cast<std::size_t>(dims.n_tokens);
    decoder_.tok_emb = params_.normal("dec.tok_emb", n_tokens, d, 0.02, rng);
    if (dims.sinusoidal_pos) {
      decoder_.pos_emb = sinusoidal_table(
          static_cast<std::size_t>(dims.max_len + 1), d);
    } else {
      decoder_.pos_emb = params_.normal(
          "dec.pos_emb", static_cast<std::size_t>(dims.max_len + 1), d, 0.02,
          rng);
    }
    std::size_t d_k = d / static_cast<std::size_t>(dims.decoder_heads);
    for (int l = 0; l < dims.decoder_layers; ++l) {
      std::string base = "dec.layer" + std::to_string(l);
      DecoderLayerParams<T> layer;
      for (int h = 0; h < dims.decoder_heads; ++h) {
        std::string hb = base + ".self.head" + std::to_string(h);
        layer.self_attn.heads.push_back(
            {params_.glorot(hb + ".Wq", d, d_k, rng),
             params_.glorot(hb + ".Wk", d, d_k, rng),
             params_.glorot(hb + ".Wv", d, d_k, rng)});
        std::string cb = base + ".cross.head" + std::to_string(h);
        layer.cross_attn.heads.push_back(
            {params_.glorot(cb + ".Wq", d, d_k, rng),
             params_.glorot(cb + ".Wk", d, d_k, rng),
             params_.glorot(cb + ".Wv", d, d_k, rng)});
      }
      layer.self_attn.Wo = params_.glorot(base + ".self.Wo", d, d, rng);
      layer.cross_attn.Wo = params_.glorot(base + ".cross.Wo", d, d, rng);
      layer.ffn_W1 = params_.glorot(base + ".ffn.W1", d, 4 * d, rng);
      layer.ffn_b1 = params_.zeros(base + ".ffn.b1", {1, 4 * d});
      layer.ffn_W2 = params_.glorot(base + ".ffn.W2", 4 * d, d, rng);
      layer.ffn_b2 = params_.zeros(base + ".ffn.b2", {1, d});
      layer.ln1 = {params_.ones(base + ".ln1.g", {1, d}),
                   params_.zeros(base + ".ln1.b", {1, d})};
      layer.ln2 = {params_.ones(base + ".ln2.g", {1, d}),
                   params_.zeros(base + ".ln2.b", {1, d})};
      layer.ln3 = {params_.ones(base + ".ln3.g", {1, d}),
                   params_.zeros(base + ".ln3.b", {1, d})};
      decoder_.layers.push_back(layer);
    }
    // embedding-scale init keeps the untrained model's predictive
    // distribution near uniform
    decoder_.out_W = params_.normal("dec.out.W", d, n_tokens, 0.02, rng);
    decoder_.out_b = params_.zeros("dec.out.b", {1, n_tokens});
    decoder_.max_len = dims.max_len;
    decoder_.dropout = dims.dropout;
  }

  const NetworkDims &dims() const { return dims_; }
  nn::ParameterStore<T> &params() { return params_; }
  const nn::ParameterStore<T> &params() const { return params_; }
  const DecoderParams<T> &decoder() const { return decoder_; }

  // ---- molecular graph path ----

  GatGraph<T> molecular_graph(const graph::MolecularGraphTensors &t) const {
    nn::Tensor<T> edge_feat = nn::Tensor<T>::zeros(
        {t.edge_index.size(), graph::kEdgeFeatureDim});
    for (std::size_t i = 0; i < t.edge_feat.size(); ++i)
      edge_feat.values()[i] = static_cast<T>(t.edge_feat[i]);
    return GatGraph<T>::build(static_cast<std::size_t>(t.n_atoms),
                              t.edge_index, edge_feat);
  }

  nn::Tensor<T> atom_embeddings(nn::Tape<T> &tape,
                                const graph::MolecularGraphTensors &t) const {
    nn::Tensor<T> x = nn::Tensor<T>::zeros(
        {static_cast<std::size_t>(t.n_atoms), graph::kNodeFeatureDim});
    for (std::size_t i = 0; i < t.node_feat.size(); ++i)
      x.values()[i] = static_cast<T>(t.node_feat[i]);
    return mol_gat_.forward(tape, x, molecular_graph(t));
  }

  // ---- association graph path ----

  struct AssocInput {
    nn::Tensor<T> node_init; // n_nodes x assoc_dim, dense
    GatGraph<T> graph;
  };

  AssocInput assoc_input(const graph::AssociationGraph &g) const {
    std::size_t n = g.nodes.size();
    AssocInput in;
    in.node_init = nn::Tensor<T>::zeros(
        {n, static_cast<std::size_t>(dims_.assoc_dim)});
    for (std::size_t i = 0; i < n; ++i)
      for (const auto &[idx, val] : g.node_init[i])
        in.node_init.at(i, static_cast<std::size_t>(idx)) =
            static_cast<T>(val);
    std::vector<std::pair<int, int>> directed;
    std::vector<T> weights;
    for (const graph::AssocEdge &e : g.edges) {
      directed.emplace_back(e.u, e.v);
      weights.push_back(static_cast<T>(e.weight));
      directed.emplace_back(e.v, e.u);
      weights.push_back(static_cast<T>(e.weight));
    }
    std::size_t n_directed = weights.size();
    nn::Tensor<T> edge_feat =
        nn::Tensor<T>::from({n_directed, 1}, std::move(weights));
    in.graph = GatGraph<T>::build(n, directed, edge_feat);
    return in;
  }

  nn::Tensor<T> assoc_embeddings(nn::Tape<T> &tape,
                                 const AssocInput &in) const {
    return assoc_gat_.forward(tape, in.node_init, in.graph);
  }

  // ---- fusion ----

  // Position t < n_atoms holds MLP([atom_t || global]); the rest is zero
  // and invalid.
  Memory<T> serialize_and_fuse(nn::Tape<T> &tape, nn::Tensor<T> atom_emb,
                               nn::Tensor<T> global_emb) const {
    std::size_t n_atoms = atom_emb.rows();
    std::size_t max_atoms = static_cast<std::size_t>(dims_.max_atoms);
    if (n_atoms > max_atoms)
      throw Error(errc::too_many_atoms,
                  std::to_string(n_atoms) + " atoms exceed the limit of " +
                      std::to_string(max_atoms));
    nn::Tensor<T> rep = tape.repeat_rows(global_emb, n_atoms);
    nn::Tensor<T> cat = tape.concat_cols(atom_emb, rep);
    nn::Tensor<T> h = tape.relu(tape.linear(cat, fuse_W1_, fuse_b1_));
    nn::Tensor<T> fused = tape.linear(h, fuse_W2_, fuse_b2_);
    Memory<T> mem;
    mem.rows = tape.pad_rows(fused, max_atoms);
    mem.valid.assign(max_atoms, 0);
    for (std::size_t i = 0; i < n_atoms; ++i)
      mem.valid[i] = 1;
    return mem;
  }

  // Full encode of one molecule given a prepared association forward.
  Memory<T> encode_molecule(nn::Tape<T> &tape,
                            const graph::MolecularGraphTensors &t,
                            nn::Tensor<T> assoc_all, int molecule_node) const {
    if (molecule_node < 0 ||
        static_cast<std::size_t>(molecule_node) >= assoc_all.rows())
      throw Error(errc::unknown_molecule_node,
                  "molecule node " + std::to_string(molecule_node));
    nn::Tensor<T> atom_emb = atom_embeddings(tape, t);
    nn::Tensor<T> global = tape.select_rows(assoc_all, {molecule_node});
    return serialize_and_fuse(tape, atom_emb, global);
  }

  nn::Tensor<T> decode(nn::Tape<T> &tape, const std::vector<int> &tokens,
                       const Memory<T> &memory, bool training = false,
                       nn::Rng *dropout_rng = nullptr) const {
    return decoder_forward(tape, tokens, memory, decoder_, training,
                           dropout_rng);
  }

private:
  static nn::Tensor<T> sinusoidal_table(std::size_t rows, std::size_t d) {
    nn::Tensor<T> t = nn::Tensor<T>::zeros({rows, d});
    for (std::size_t pos = 0; pos < rows; ++pos)
      for (std::size_t i = 0; i < d; ++i) {
        double angle = static_cast<double>(pos) /
                       std::pow(10000.0, 2.0 * static_cast<double>(i / 2) /
                                             static_cast<double>(d));
        t.at(pos, i) =
            static_cast<T>((i % 2 == 0) ? std::sin(angle) : std::cos(angle));
      }
    return t;
  }

  NetworkDims dims_;
  nn::ParameterStore<T> params_;
  GatStack<T> mol_gat_;
  GatStack<T> assoc_gat_;
  nn::Tensor<T> fuse_W1_, fuse_b1_, fuse_W2_, fuse_b2_;
  DecoderParams<T> decoder_;
};

} // namespace adrgen::model
