//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <vector>

#include "adrgen/errors.hpp"
#include "adrgen/nn/optim.hpp"
#include "adrgen/nn/tensor.hpp"

namespace adrgen::model {

inline constexpr double kLeakyReluSlope = 0.2;

// One attention head: scores use the split attention vector over
// [h_i || h_j || E_ij]; values are projected twice (W then U).
template <class T> struct GatHeadParams {
  nn::Tensor<T> W;      // F_in x d_out
  nn::Tensor<T> a_self; // d_out x 1
  nn::Tensor<T> a_nbr;  // d_out x 1
  nn::Tensor<T> a_edge; // d_edge x 1
  nn::Tensor<T> U;      // d_out x d_out
};

template <class T> struct GatLayerParams {
  std::vector<GatHeadParams<T>> heads;
};

// Graph presented to a GAT layer: directed edge list (both directions per
// undirected edge) with per-edge features, plus an adjacency mask that
// already includes self-loops.
template <class T> struct GatGraph {
  std::size_t n_nodes = 0;
  std::vector<std::pair<int, int>> edges; // (target i, source j) pairs
  nn::Tensor<T> edge_feat;                // |edges| x d_edge, constant
  std::vector<char> attend_mask;          // n x n, row i = allowed sources

  static GatGraph build(std::size_t n,
                        const std::vector<std::pair<int, int>> &directed,
                        nn::Tensor<T> edge_feat_in) {
    GatGraph g;
    g.n_nodes = n;
    g.edges = directed;
    g.edge_feat = edge_feat_in;
    g.attend_mask.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
      g.attend_mask[i * n + i] = 1; // self-loop with zero edge feature
    for (auto [i, j] : directed)
      g.attend_mask[static_cast<std::size_t>(i) * n +
                    static_cast<std::size_t>(j)] = 1;
    return g;
  }
};

template <class T>
nn::Tensor<T> ones_tensor(std::size_t r, std::size_t c) {
  nn::Tensor<T> t = nn::Tensor<T>::zeros({r, c});
  for (T &v : t.values())
    v = T(1);
  return t;
}

// Single GAT layer, heads combined by uniform mean inside the final
// nonlinearity.
template <class T>
nn::Tensor<T> gat_forward(nn::Tape<T> &tape, nn::Tensor<T> x,
                          const GatGraph<T> &graph,
                          const GatLayerParams<T> &params) {
  if (x.rows() != graph.n_nodes)
    throw Error(errc::shape_mismatch, "gat: node count disagrees");
  std::size_t n = graph.n_nodes;
  nn::Tensor<T> ones_row = ones_tensor<T>(1, n);
  nn::Tensor<T> ones_col = ones_tensor<T>(n, 1);
  nn::Tensor<T> combined;
  for (std::size_t k = 0; k < params.heads.size(); ++k) {
    const GatHeadParams<T> &head = params.heads[k];
    nn::Tensor<T> h = tape.matmul(x, head.W); // n x d
    nn::Tensor<T> s_self = tape.matmul(h, head.a_self); // n x 1
    nn::Tensor<T> s_nbr = tape.matmul(h, head.a_nbr);   // n x 1
    // scores[i][j] = s_self[i] + s_nbr[j] + a_edge . E_ij
    nn::Tensor<T> scores =
        tape.add(tape.matmul(s_self, ones_row),
                 tape.matmul(ones_col, tape.transpose(s_nbr)));
    if (!graph.edges.empty()) {
      nn::Tensor<T> e_contrib = tape.matmul(graph.edge_feat, head.a_edge);
      scores = tape.add(scores, tape.scatter_dense(e_contrib, graph.edges,
                                                   n, n));
    }
    scores = tape.leaky_relu(scores, static_cast<T>(kLeakyReluSlope));
    nn::Tensor<T> alpha = tape.softmax_rows(scores, &graph.attend_mask);
    nn::Tensor<T> messages = tape.matmul(alpha, tape.matmul(h, head.U));
    combined = k == 0 ? messages : tape.add(combined, messages);
  }
  combined =
      tape.scale(combined, static_cast<T>(1.0 / static_cast<double>(
                                                    params.heads.size())));
  return tape.elu(combined);
}

// Two-layer stack used for both the molecular graph and the association
// graph.
template <class T> struct GatStack {
  std::vector<GatLayerParams<T>> layers;

  nn::Tensor<T> forward(nn::Tape<T> &tape, nn::Tensor<T> x,
                        const GatGraph<T> &graph) const {
    nn::Tensor<T> h = x;
    for (const GatLayerParams<T> &layer : layers)
      h = gat_forward(tape, h, graph, layer);
    return h;
  }
};

template <class T>
GatStack<T> make_gat_stack(nn::ParameterStore<T> &store,
                           const std::string &prefix, int n_layers,
                           int heads, int in_dim, int hidden_dim,
                           int edge_dim, nn::Rng &rng) {
  GatStack<T> stack;
  for (int l = 0; l < n_layers; ++l) {
    GatLayerParams<T> layer;
    int fan_in = l == 0 ? in_dim : hidden_dim;
    for (int k = 0; k < heads; ++k) {
      std::string base =
          prefix + ".layer" + std::to_string(l) + ".head" + std::to_string(k);
      GatHeadParams<T> head;
      head.W = store.glorot(base + ".W", static_cast<std::size_t>(fan_in),
                            static_cast<std::size_t>(hidden_dim), rng);
      head.a_self = store.glorot(base + ".a_i",
                                 static_cast<std::size_t>(hidden_dim), 1, rng);
      head.a_nbr = store.glorot(base + ".a_j",
                                static_cast<std::size_t>(hidden_dim), 1, rng);
      head.a_edge = store.glorot(base + ".a_e",
                                 static_cast<std::size_t>(edge_dim), 1, rng);
      head.U = store.glorot(base + ".U", static_cast<std::size_t>(hidden_dim),
                            static_cast<std::size_t>(hidden_dim), rng);
      layer.heads.push_back(head);
    }
    stack.layers.push_back(layer);
  }
  return stack;
}

} // namespace adrgen::model
