//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "adrgen/chem/perceive.hpp"
#include "adrgen/chem/smiles.hpp"
#include "adrgen/frag/fragment.hpp"
#include "adrgen/graph/assoc.hpp"
#include "adrgen/graph/features.hpp"
#include "adrgen/model/network.hpp"
#include "adrgen/nn/gradcheck.hpp"

namespace adrgen::pipeline {

// Numeric self-verification: finite-difference checks of each op, of a
// full GAT layer and of a full decoder layer (64-bit), plus the hard
// architectural invariants. Prints one line per check; returns false on
// any failure.
inline bool selftest(std::FILE *out = stderr) {
  using Td = nn::Tensor<double>;
  bool ok = true;
  auto report = [&](const char *name, bool pass, double value) {
    std::fprintf(out, "%-44s %s (%.3g)\n", name, pass ? "ok" : "FAIL", value);
    ok = ok && pass;
  };
  nn::Rng rng(0xadc0ffee);
  auto randt = [&](std::vector<std::size_t> shape, bool rg = false) {
    std::size_t n = 1;
    for (auto s : shape)
      n *= s;
    std::vector<double> v(n);
    for (double &x : v)
      x = rng.uniform(-1.2, 1.2);
    return Td::from(shape, std::move(v), rg);
  };

  // --- elementary op gradients ---
  {
    Td x = randt({3, 4}, true);
    Td w = randt({4, 3});
    double err = nn::grad_check(
        [&](Td in, bool bw) {
          nn::Tape<double> t;
          Td loss = t.mean_all(t.elu(t.matmul(in, w)));
          if (bw)
            t.backward(loss);
          return loss.item();
        },
        x);
    report("grad: matmul+elu", err < 1e-4, err);
  }
  {
    Td x = randt({3, 5}, true);
    std::vector<char> mask(15, 1);
    mask[4] = mask[9] = 0;
    Td coef = randt({3, 5});
    double err = nn::grad_check(
        [&](Td in, bool bw) {
          nn::Tape<double> t;
          Td loss = t.mean_all(t.mul(t.softmax_rows(in, &mask), coef));
          if (bw)
            t.backward(loss);
          return loss.item();
        },
        x);
    report("grad: masked softmax", err < 1e-4, err);
  }
  {
    Td x = randt({4, 6}, true);
    Td g = randt({1, 6});
    Td b = randt({1, 6});
    Td coef = randt({4, 6});
    double err = nn::grad_check(
        [&](Td in, bool bw) {
          nn::Tape<double> t;
          Td loss = t.mean_all(t.mul(t.layer_norm(in, g, b), coef));
          if (bw)
            t.backward(loss);
          return loss.item();
        },
        x);
    report("grad: layer norm", err < 1e-4, err);
  }
  {
    Td x = randt({4, 7}, true);
    std::vector<int> targets{1, -1, 4, 6};
    double err = nn::grad_check(
        [&](Td in, bool bw) {
          nn::Tape<double> t;
          Td loss = t.cross_entropy_masked(in, targets, -1);
          if (bw)
            t.backward(loss);
          return loss.item();
        },
        x);
    report("grad: masked cross entropy", err < 1e-4, err);
  }

  // --- full GAT layer ---
  {
    nn::ParameterStore<double> ps;
    auto stack = model::make_gat_stack(ps, "st", 1, 2, 4, 3, 2, rng);
    std::vector<std::pair<int, int>> edges{{0, 1}, {1, 0}, {1, 2}, {2, 1},
                                           {2, 3}, {3, 2}, {3, 0}, {0, 3}};
    Td ef = randt({8, 2});
    auto g = model::GatGraph<double>::build(5, edges, ef);
    Td x = randt({5, 4}, true);
    double err = nn::grad_check(
        [&](Td in, bool bw) {
          nn::Tape<double> t;
          Td loss =
              t.mean_all(model::gat_forward(t, in, g, stack.layers[0]));
          if (bw)
            t.backward(loss);
          return loss.item();
        },
        x);
    report("grad: full gat layer (node features)", err < 1e-4, err);
    Td W = stack.layers[0].heads[0].W;
    double werr = nn::grad_check(
        [&](Td in, bool bw) {
          (void)in;
          nn::Tape<double> t;
          Td loss =
              t.mean_all(model::gat_forward(t, x, g, stack.layers[0]));
          if (bw) {
            ps.zero_grad();
            std::fill(x.grad().begin(), x.grad().end(), 0.0);
            t.backward(loss);
          }
          return loss.item();
        },
        W);
    report("grad: full gat layer (weights)", werr < 1e-4, werr);
  }

  // --- full decoder layer ---
  {
    model::NetworkDims dims;
    dims.d_model = 8;
    dims.gat_heads = 2;
    dims.gat_layers = 1;
    dims.decoder_heads = 2;
    dims.decoder_layers = 1;
    dims.max_len = 6;
    dims.max_atoms = 4;
    dims.n_tokens = 9;
    dims.assoc_dim = 3;
    dims.dropout = 0.0;
    model::Network<double> net(dims, rng);
    model::Memory<double> mem;
    mem.rows = randt({4, 8}, true);
    mem.valid = {1, 1, 1, 0};
    // batch 2, length 4 teacher-forced pair
    std::vector<int> tokens{1, 4, 5, 6};
    std::vector<int> targets{4, 5, 6, 2};
    double err = nn::grad_check(
        [&](Td in, bool bw) {
          (void)in;
          nn::Tape<double> t;
          Td logits = net.decode(t, tokens, mem);
          Td loss = t.cross_entropy_masked(logits, targets, 0);
          if (bw) {
            net.params().zero_grad();
            std::fill(mem.rows.grad().begin(), mem.rows.grad().end(), 0.0);
            t.backward(loss);
          }
          return loss.item();
        },
        mem.rows);
    report("grad: full decoder layer (memory)", err < 1e-4, err);
    Td Wq = net.params().get("dec.layer0.self.head0.Wq");
    double qerr = nn::grad_check(
        [&](Td in, bool bw) {
          (void)in;
          nn::Tape<double> t;
          Td logits = net.decode(t, tokens, mem);
          Td loss = t.cross_entropy_masked(logits, targets, 0);
          if (bw) {
            net.params().zero_grad();
            std::fill(mem.rows.grad().begin(), mem.rows.grad().end(), 0.0);
            t.backward(loss);
          }
          return loss.item();
        },
        Wq, 1e-4);
    report("grad: full decoder layer (weights)", qerr < 1e-4, qerr);

    // causality: perturbing a late token leaves earlier logits unchanged
    nn::Tape<double> t0(false);
    Td base = net.decode(t0, tokens, mem);
    std::vector<int> tokens2 = tokens;
    tokens2[2] = 7;
    Td moved = net.decode(t0, tokens2, mem);
    bool causal = true;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t c = 0; c < base.cols(); ++c)
        causal = causal && base.at(i, c) == moved.at(i, c);
    report("invariant: causal mask exact", causal, 0.0);

    // masked memory rows cannot influence the output
    model::Memory<double> tampered;
    tampered.rows = Td::from(mem.rows.shape(), mem.rows.values());
    tampered.valid = mem.valid;
    for (std::size_t c = 0; c < 8; ++c)
      tampered.rows.at(3, c) = 500.0;
    Td moved2 = net.decode(t0, tokens, tampered);
    bool masked_ok = true;
    for (std::size_t i = 0; i < moved2.size(); ++i)
      masked_ok = masked_ok && moved2.values()[i] == base.values()[i];
    report("invariant: memory mask respected", masked_ok, 0.0);

    // generation contract on the random model
    auto gen = model::generate(mem, net.decoder(), model::SpecialTokens{},
                               dims.max_len);
    std::set<int> uniq(gen.begin(), gen.end());
    bool gen_ok = gen.size() <= static_cast<std::size_t>(dims.max_len) &&
                  uniq.size() == gen.size();
    for (int tok : gen)
      gen_ok = gen_ok && tok >= 4;
    report("invariant: generation contract", gen_ok, 0.0);
  }

  // --- softmax row-sum invariant ---
  {
    bool rows_ok = true;
    double worst = 0.0;
    for (int iter = 0; iter < 20; ++iter) {
      std::size_t m = 1 + rng.uniform_int(4), n = 2 + rng.uniform_int(5);
      Td x = randt({m, n});
      std::vector<char> mask(m * n, 0);
      for (std::size_t i = 0; i < m; ++i) {
        mask[i * n + rng.uniform_int(n)] = 1;
        for (std::size_t j = 0; j < n; ++j)
          if (rng.uniform01() < 0.5)
            mask[i * n + j] = 1;
      }
      nn::Tape<double> t(false);
      Td sm = t.softmax_rows(x, &mask);
      for (std::size_t i = 0; i < m; ++i) {
        double sum = 0;
        for (std::size_t j = 0; j < n; ++j) {
          if (!mask[i * n + j] && sm.at(i, j) != 0.0)
            rows_ok = false;
          sum += sm.at(i, j);
        }
        worst = std::max(worst, std::abs(sum - 1.0));
      }
    }
    report("invariant: attention rows sum to 1", rows_ok && worst < 1e-6,
           worst);
  }

  return ok;
}

} // namespace adrgen::pipeline
