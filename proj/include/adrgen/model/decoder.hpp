//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "adrgen/errors.hpp"
#include "adrgen/nn/optim.hpp"
#include "adrgen/nn/tensor.hpp"

namespace adrgen::model {

// Serialized molecule features: valid rows carry fused atom+global
// vectors, rows past n_valid are zero and masked out of cross-attention.
template <class T> struct Memory {
  nn::Tensor<T> rows;          // max_atoms x d_model
  std::vector<char> valid;     // length max_atoms

  std::size_t n_valid() const {
    std::size_t n = 0;
    for (char c : valid)
      n += c != 0;
    return n;
  }
};

// softmax(Q K^T / sqrt(d_k)) V with masked logits forced to -inf before
// the softmax (realized as exact exclusion). Dropout, when requested,
// lands on the attention weights.
template <class T>
nn::Tensor<T> attention(nn::Tape<T> &tape, nn::Tensor<T> Q, nn::Tensor<T> K,
                        nn::Tensor<T> V, const std::vector<char> *mask,
                        double p_drop = 0.0, nn::Rng *rng = nullptr) {
  if (Q.cols() != K.cols() || K.rows() != V.rows())
    throw Error(errc::shape_mismatch, "attention shapes disagree");
  T inv_sqrt_dk = static_cast<T>(1.0 / std::sqrt(static_cast<double>(Q.cols())));
  nn::Tensor<T> scores =
      tape.scale(tape.matmul(Q, tape.transpose(K)), inv_sqrt_dk);
  nn::Tensor<T> alpha = tape.softmax_rows(scores, mask);
  alpha = tape.dropout(alpha, p_drop, rng);
  return tape.matmul(alpha, V);
}

template <class T> struct AttentionHeadParams {
  nn::Tensor<T> Wq, Wk, Wv; // d_model x d_k
};

template <class T> struct MultiHeadParams {
  std::vector<AttentionHeadParams<T>> heads;
  nn::Tensor<T> Wo; // d_model x d_model
};

template <class T>
nn::Tensor<T> multi_head(nn::Tape<T> &tape, nn::Tensor<T> Q_in,
                         nn::Tensor<T> K_in, nn::Tensor<T> V_in,
                         const MultiHeadParams<T> &params,
                         const std::vector<char> *mask, double p_drop = 0.0,
                         nn::Rng *rng = nullptr) {
  nn::Tensor<T> cat;
  for (std::size_t h = 0; h < params.heads.size(); ++h) {
    const AttentionHeadParams<T> &head = params.heads[h];
    nn::Tensor<T> out = attention(tape, tape.matmul(Q_in, head.Wq),
                                  tape.matmul(K_in, head.Wk),
                                  tape.matmul(V_in, head.Wv), mask, p_drop,
                                  rng);
    cat = h == 0 ? out : tape.concat_cols(cat, out);
  }
  return tape.matmul(cat, params.Wo);
}

template <class T> struct LayerNormParams {
  nn::Tensor<T> gain, bias;
};

template <class T> struct DecoderLayerParams {
  MultiHeadParams<T> self_attn;
  MultiHeadParams<T> cross_attn;
  nn::Tensor<T> ffn_W1, ffn_b1, ffn_W2, ffn_b2;
  LayerNormParams<T> ln1, ln2, ln3;
};

template <class T> struct DecoderParams {
  nn::Tensor<T> tok_emb;  // n_tokens x d_model
  nn::Tensor<T> pos_emb;  // (max_len + 1) x d_model
  std::vector<DecoderLayerParams<T>> layers;
  nn::Tensor<T> out_W, out_b; // d_model x n_tokens, n_tokens
  int max_len = 0;
  double dropout = 0.0;
};

// Teacher-forced / autoregressive decoder trunk. tokens includes BOS;
// logits row t scores the token at position t+1.
template <class T>
nn::Tensor<T> decoder_forward(nn::Tape<T> &tape,
                              const std::vector<int> &tokens,
                              const Memory<T> &memory,
                              const DecoderParams<T> &params,
                              bool training = false,
                              nn::Rng *dropout_rng = nullptr) {
  std::size_t seq_len = tokens.size();
  if (seq_len == 0)
    throw Error(errc::shape_mismatch, "decoder needs at least one token");
  if (seq_len > static_cast<std::size_t>(params.max_len + 1))
    throw Error(errc::sequence_too_long,
                "sequence length " + std::to_string(seq_len) + " exceeds " +
                    std::to_string(params.max_len + 1));
  // confirm the memory has at least one valid row before doing any work
  if (memory.n_valid() == 0)
    throw Error(errc::all_positions_masked, "memory mask is all invalid");
  double p_drop = training ? params.dropout : 0.0;

  std::vector<int> positions(seq_len);
  for (std::size_t i = 0; i < seq_len; ++i)
    positions[i] = static_cast<int>(i);
  nn::Tensor<T> x = tape.add(tape.embedding_lookup(params.tok_emb, tokens),
                             tape.embedding_lookup(params.pos_emb, positions));

  // causal mask: position t sees positions <= t
  std::vector<char> causal(seq_len * seq_len, 0);
  for (std::size_t i = 0; i < seq_len; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      causal[i * seq_len + j] = 1;
  // cross mask: every query row sees the valid memory rows
  std::size_t mem_rows = memory.rows.rows();
  std::vector<char> cross(seq_len * mem_rows, 0);
  for (std::size_t i = 0; i < seq_len; ++i)
    for (std::size_t j = 0; j < mem_rows; ++j)
      cross[i * mem_rows + j] = memory.valid[j];

  // dropout sits on the attention weights and inside the FFN
  for (const DecoderLayerParams<T> &layer : params.layers) {
    nn::Tensor<T> sa = multi_head(tape, x, x, x, layer.self_attn, &causal,
                                  p_drop, dropout_rng);
    x = tape.layer_norm(tape.add(x, sa), layer.ln1.gain, layer.ln1.bias);
    nn::Tensor<T> ca = multi_head(tape, x, memory.rows, memory.rows,
                                  layer.cross_attn, &cross, p_drop,
                                  dropout_rng);
    x = tape.layer_norm(tape.add(x, ca), layer.ln2.gain, layer.ln2.bias);
    nn::Tensor<T> hidden =
        tape.relu(tape.linear(x, layer.ffn_W1, layer.ffn_b1));
    hidden = tape.dropout(hidden, p_drop, dropout_rng);
    nn::Tensor<T> ff = tape.linear(hidden, layer.ffn_W2, layer.ffn_b2);
    x = tape.layer_norm(tape.add(x, ff), layer.ln3.gain, layer.ln3.bias);
  }
  return tape.linear(x, params.out_W, params.out_b);
}

struct SpecialTokens {
  int pad = 0;
  int bos = 1;
  int eos = 2;
  int unk = 3;
};

// Greedy autoregressive generation. PAD/BOS/UNK and (unless allowed)
// previously emitted labels are excluded at every step; stops on EOS or
// after max_len labels. Returns label token ids only.
template <class T>
std::vector<int> generate(const Memory<T> &memory,
                          const DecoderParams<T> &params,
                          const SpecialTokens &specials, int max_len,
                          bool allow_duplicates = false) {
  std::vector<int> seq{specials.bos};
  std::vector<int> out;
  std::vector<char> emitted(params.tok_emb.rows(), 0);
  for (int step = 0; step < max_len; ++step) {
    nn::Tape<T> tape(false);
    nn::Tensor<T> logits = decoder_forward(tape, seq, memory, params);
    std::size_t n_tokens = logits.cols();
    std::size_t last = logits.rows() - 1;
    int best = -1;
    T best_val = T(0);
    for (std::size_t tok = 0; tok < n_tokens; ++tok) {
      int t = static_cast<int>(tok);
      if (t == specials.pad || t == specials.bos || t == specials.unk)
        continue;
      if (!allow_duplicates && t != specials.eos && emitted[tok])
        continue;
      T v = logits.at(last, tok);
      if (best < 0 || v > best_val) {
        best = t;
        best_val = v;
      }
    }
    if (best < 0 || best == specials.eos)
      break;
    out.push_back(best);
    emitted[static_cast<std::size_t>(best)] = 1;
    seq.push_back(best);
  }
  return out;
}

// Per-step probability of each forced target token under the model; the
// probe the contribution analysis is built on. targets excludes BOS.
template <class T>
std::vector<double> forced_step_probabilities(const std::vector<int> &targets,
                                              const Memory<T> &memory,
                                              const DecoderParams<T> &params,
                                              const SpecialTokens &specials) {
  if (targets.empty())
    return {};
  std::vector<int> input{specials.bos};
  input.insert(input.end(), targets.begin(), targets.end());
  input.pop_back(); // last target has no successor to predict
  nn::Tape<T> tape(false);
  nn::Tensor<T> logits = decoder_forward(tape, input, memory, params);
  std::vector<double> probs;
  std::size_t n_tokens = logits.cols();
  for (std::size_t t = 0; t < targets.size(); ++t) {
    // softmax over the row, numerically stable
    T mx = logits.at(t, 0);
    for (std::size_t j = 1; j < n_tokens; ++j)
      mx = std::max(mx, logits.at(t, j));
    double denom = 0.0;
    for (std::size_t j = 0; j < n_tokens; ++j)
      denom += std::exp(static_cast<double>(logits.at(t, j) - mx));
    double p = std::exp(static_cast<double>(
                   logits.at(t, static_cast<std::size_t>(targets[t])) - mx)) /
               denom;
    probs.push_back(p);
  }
  return probs;
}

} // namespace adrgen::model
