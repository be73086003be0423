//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <cstdio>
#include <filesystem>

#include <catch2/catch_amalgamated.hpp>

#include "adrgen/nn/checkpoint.hpp"
#include "adrgen/nn/gradcheck.hpp"
#include "adrgen/nn/optim.hpp"
#include "adrgen/nn/rng.hpp"
#include "adrgen/nn/tensor.hpp"

using namespace adrgen;
using namespace adrgen::nn;

using D = double;
using Td = Tensor<double>;

TEST_CASE("matmul with identity is a no-op") {
  Tape<D> tape;
  Td a = Td::from({2, 2}, {1, 2, 3, 4});
  Td eye = Td::from({2, 2}, {1, 0, 0, 1});
  Td out = tape.matmul(a, eye);
  CHECK(out.values() == a.values());
}

TEST_CASE("softmax on equal logits is uniform") {
  Tape<D> tape;
  Td a = Td::from({1, 4}, {0.7, 0.7, 0.7, 0.7});
  Td out = tape.softmax_rows(a, nullptr);
  for (double v : out.values())
    CHECK(v == Catch::Approx(0.25));
}

TEST_CASE("masked softmax: zeros are exact, rows sum to one") {
  Tape<D> tape;
  Td a = Td::from({2, 3}, {1.0, 2.0, 3.0, -1.0, 0.0, 1.0});
  std::vector<char> mask{1, 0, 1, 1, 1, 0};
  Td out = tape.softmax_rows(a, &mask);
  CHECK(out.values()[1] == 0.0);
  CHECK(out.values()[5] == 0.0);
  CHECK(out.values()[0] + out.values()[2] == Catch::Approx(1.0));
  CHECK(out.values()[3] + out.values()[4] == Catch::Approx(1.0));

  std::vector<char> all_masked{0, 0, 0, 1, 1, 1};
  CHECK_THROWS_MATCHES(tape.softmax_rows(a, &all_masked), Error,
                       Catch::Matchers::Predicate<Error>([](const Error &e) {
                         return e.code() == errc::all_positions_masked;
                       }));
}

TEST_CASE("cross entropy of a known probability") {
  Tape<D> tape;
  // logits chosen so softmax gives p = 0.75 for class 1 at position 0
  double l1 = std::log(3.0);
  Td logits = Td::from({1, 2}, {0.0, l1});
  Td loss = tape.cross_entropy_masked(logits, {1}, -1);
  CHECK(loss.item() == Catch::Approx(-std::log(0.75)));
}

TEST_CASE("cross entropy ignores masked positions and averages") {
  Tape<D> tape;
  Td logits = Td::from({3, 2}, {0.0, 0.0, 5.0, -5.0, 0.0, 0.0});
  long valid = 0;
  Td loss = tape.cross_entropy_masked(logits, {0, -1, 1}, -1, &valid);
  CHECK(valid == 2);
  CHECK(loss.item() == Catch::Approx(std::log(2.0)));
  CHECK_THROWS_AS(tape.cross_entropy_masked(logits, {-1, -1, -1}, -1), Error);
}

TEST_CASE("backward: d(x^2)/dx at 3 is 6") {
  Tape<D> tape;
  Td x = Td::from({1}, {3.0}, true);
  Td y = tape.mul(x, x);
  tape.backward(y);
  CHECK(x.grad()[0] == Catch::Approx(6.0));
}

TEST_CASE("backward: softmax dot onehot matches hand derivative") {
  // f(x) = softmax(x) . e1 with uniform x of width 3:
  // df/dx_1 = p1(1-p1) = 2/9, df/dx_j = -p1 pj = -1/9
  Tape<D> tape;
  Td x = Td::from({1, 3}, {0.0, 0.0, 0.0}, true);
  Td sm = tape.softmax_rows(x, nullptr);
  Td onehot = Td::from({3, 1}, {0.0, 1.0, 0.0});
  Td y = tape.matmul(sm, onehot);
  tape.backward(y);
  CHECK(x.grad()[0] == Catch::Approx(-1.0 / 9.0));
  CHECK(x.grad()[1] == Catch::Approx(2.0 / 9.0));
  CHECK(x.grad()[2] == Catch::Approx(-1.0 / 9.0));
}

TEST_CASE("disconnected parameter keeps zero grad") {
  Tape<D> tape;
  Td x = Td::from({1}, {3.0}, true);
  Td unused = Td::from({1}, {1.0}, true);
  Td y = tape.mul(x, x);
  tape.backward(y);
  CHECK(unused.grad()[0] == 0.0);
}

TEST_CASE("non-scalar loss raises") {
  Tape<D> tape;
  Td x = Td::from({2}, {1.0, 2.0}, true);
  CHECK_THROWS_MATCHES(tape.backward(x), Error,
                       Catch::Matchers::Predicate<Error>([](const Error &e) {
                         return e.code() == errc::non_scalar_loss;
                       }));
}

// grad checks for every differentiable op over random small shapes
TEST_CASE("finite-difference checks per op") {
  Rng rng(1234);
  auto randt = [&](std::vector<std::size_t> shape, bool rg = true) {
    std::size_t n = 1;
    for (auto s : shape)
      n *= s;
    std::vector<double> v(n);
    for (double &x : v)
      x = rng.uniform(-1.5, 1.5);
    return Td::from(shape, std::move(v), rg);
  };

  SECTION("matmul") {
    Td x = randt({3, 4});
    Td w = randt({4, 2}, false);
    auto f = [&](Td in, bool bw) {
      Tape<D> t;
      Td loss = t.mean_all(t.matmul(in, w));
      if (bw)
        t.backward(loss);
      return loss.item();
    };
    CHECK(grad_check(f, x) < 1e-7);
  }
  SECTION("transpose+mul+add") {
    Td x = randt({3, 4});
    Td y = randt({4, 3}, false);
    auto f = [&](Td in, bool bw) {
      Tape<D> t;
      Td loss = t.mean_all(t.mul(t.transpose(in), y));
      if (bw)
        t.backward(loss);
      return loss.item();
    };
    CHECK(grad_check(f, x) < 1e-7);
  }
  SECTION("leaky_relu") {
    Td x = randt({4, 4});
    auto f = [&](Td in, bool bw) {
      Tape<D> t;
      Td loss = t.mean_all(t.leaky_relu(in, 0.2));
      if (bw)
        t.backward(loss);
      return loss.item();
    };
    CHECK(grad_check(f, x) < 1e-6);
  }
  SECTION("elu") {
    Td x = randt({4, 4});
    auto f = [&](Td in, bool bw) {
      Tape<D> t;
      Td loss = t.mean_all(t.elu(in));
      if (bw)
        t.backward(loss);
      return loss.item();
    };
    CHECK(grad_check(f, x) < 1e-6);
  }
  SECTION("softmax_rows masked") {
    Td x = randt({3, 5});
    std::vector<char> mask(15, 1);
    mask[2] = mask[7] = mask[14] = 0;
    Td coef = randt({3, 5}, false);
    auto f = [&](Td in, bool bw) {
      Tape<D> t;
      Td loss = t.mean_all(t.mul(t.softmax_rows(in, &mask), coef));
      if (bw)
        t.backward(loss);
      return loss.item();
    };
    CHECK(grad_check(f, x) < 1e-6);
  }
  SECTION("layer_norm") {
    Td x = randt({3, 6});
    Td g = randt({1, 6}, false);
    Td b = randt({1, 6}, false);
    auto f = [&](Td in, bool bw) {
      Tape<D> t;
      Td coef = Td::from({3, 6}, std::vector<double>(18, 0.31));
      Td loss = t.mean_all(t.mul(t.layer_norm(in, g, b), coef));
      if (bw)
        t.backward(loss);
      return loss.item();
    };
    CHECK(grad_check(f, x) < 1e-5);
  }
  SECTION("layer_norm gain/bias") {
    Td g = randt({1, 6});
    Td x = randt({3, 6}, false);
    Td b = randt({1, 6}, false);
    auto f = [&](Td in, bool bw) {
      Tape<D> t;
      Td loss = t.mean_all(t.layer_norm(x, in, b));
      if (bw)
        t.backward(loss);
      return loss.item();
    };
    CHECK(grad_check(f, g) < 1e-6);
  }
  SECTION("cross_entropy_masked") {
    Td x = randt({4, 6});
    std::vector<int> targets{2, -1, 0, 5};
    auto f = [&](Td in, bool bw) {
      Tape<D> t;
      Td loss = t.cross_entropy_masked(in, targets, -1);
      if (bw)
        t.backward(loss);
      return loss.item();
    };
    CHECK(grad_check(f, x) < 1e-6);
  }
  SECTION("select_rows with repeats") {
    Td x = randt({4, 3});
    auto f = [&](Td in, bool bw) {
      Tape<D> t;
      Td loss = t.mean_all(t.select_rows(in, {0, 2, 2, 3}));
      if (bw)
        t.backward(loss);
      return loss.item();
    };
    CHECK(grad_check(f, x) < 1e-7);
  }
  SECTION("scatter_dense") {
    Td x = randt({4, 1});
    std::vector<std::pair<int, int>> coords{{0, 1}, {1, 2}, {2, 0}, {2, 1}};
    Td coef = randt({3, 3}, false);
    auto f = [&](Td in, bool bw) {
      Tape<D> t;
      Td loss = t.mean_all(t.mul(t.scatter_dense(in, coords, 3, 3), coef));
      if (bw)
        t.backward(loss);
      return loss.item();
    };
    CHECK(grad_check(f, x) < 1e-7);
  }
  SECTION("concat, repeat, pad, mean_rows") {
    Td x = randt({2, 3});
    Td y = randt({2, 2}, false);
    auto f = [&](Td in, bool bw) {
      Tape<D> t;
      Td cat = t.concat_cols(in, y);
      Td rep = t.repeat_rows(t.mean_rows(cat), 3);
      Td pad = t.pad_rows(rep, 5);
      Td loss = t.mean_all(pad);
      if (bw)
        t.backward(loss);
      return loss.item();
    };
    CHECK(grad_check(f, x) < 1e-7);
  }
  SECTION("linear") {
    Td w = randt({3, 2});
    Td x = randt({4, 3}, false);
    Td b = randt({1, 2}, false);
    auto f = [&](Td in, bool bw) {
      Tape<D> t;
      Td loss = t.mean_all(t.linear(x, in, b));
      if (bw)
        t.backward(loss);
      return loss.item();
    };
    CHECK(grad_check(f, w) < 1e-7);
  }
}

TEST_CASE("grad property suite over random shapes") {
  Rng rng(777);
  for (int iter = 0; iter < 30; ++iter) {
    std::size_t m = 1 + rng.uniform_int(16);
    std::size_t k = 1 + rng.uniform_int(16);
    std::size_t n = 1 + rng.uniform_int(16);
    auto fill = [&](std::vector<std::size_t> shape, bool rg) {
      std::size_t total = 1;
      for (auto s : shape)
        total *= s;
      std::vector<double> v(total);
      for (double &x : v)
        x = rng.uniform(-1.5, 1.5);
      return Td::from(shape, std::move(v), rg);
    };
    Td x = fill({m, k}, true);
    Td w = fill({k, n}, false);
    Td coef = fill({m, n}, false);
    Td gain = fill({1, k}, false);
    Td bias = fill({1, k}, false);
    int which = iter % 5;
    auto f = [&](Td in, bool bw) {
      Tape<D> t;
      Td loss;
      switch (which) {
      case 0: loss = t.mean_all(t.mul(t.matmul(in, w), coef)); break;
      case 1: loss = t.mean_all(t.elu(t.scale(in, 0.7))); break;
      case 2: loss = t.mean_all(t.mul(t.softmax_rows(in, nullptr),
                                      fill({m, k}, false))); break;
      case 3: loss = t.mean_all(t.mul(t.layer_norm(in, gain, bias),
                                      fill({m, k}, false))); break;
      default: loss = t.mean_all(t.leaky_relu(t.transpose(in), 0.2)); break;
      }
      if (bw)
        t.backward(loss);
      return loss.item();
    };
    INFO("iter " << iter << " shape " << m << "x" << k << " op " << which);
    // softmax/layer_norm probes rebuild their coefficient tensor per call;
    // freeze the rng so the function stays deterministic
    if (which == 2 || which == 3) {
      Td frozen = fill({m, k}, false);
      auto f2 = [&](Td in, bool bw) {
        Tape<D> t;
        Td pre = which == 2 ? t.softmax_rows(in, nullptr)
                            : t.layer_norm(in, gain, bias);
        Td loss = t.mean_all(t.mul(pre, frozen));
        if (bw)
          t.backward(loss);
        return loss.item();
      };
      CHECK(grad_check(f2, x) < 1e-4);
    } else {
      CHECK(grad_check(f, x) < 1e-4);
    }
  }
}

TEST_CASE("adam: zero grads leave parameters unchanged") {
  ParameterStore<D> store;
  Rng rng(1);
  Td p = store.glorot("w", 2, 2, rng);
  std::vector<double> before = p.values();
  Adam<D> opt;
  opt.step(store, 0.1);
  CHECK(p.values() == before);
}

TEST_CASE("adam: first step moves by about lr against the gradient") {
  ParameterStore<D> store;
  Td p = store.add("x", Td::from({1}, {0.0}));
  p.grad()[0] = 1.0; // d(x)/dx
  Adam<D> opt;
  opt.step(store, 0.1);
  // bias-corrected first step is -lr * g/(|g| + eps·corr) ~ -lr
  CHECK(p.values()[0] == Catch::Approx(-0.1).margin(1e-6));
}

TEST_CASE("adam: identical parameters get identical updates") {
  ParameterStore<D> store;
  Td a = store.add("a", Td::from({1}, {0.5}));
  Td b = store.add("b", Td::from({1}, {0.5}));
  a.grad()[0] = 0.3;
  b.grad()[0] = 0.3;
  Adam<D> opt;
  opt.step(store, 0.05);
  CHECK(a.values()[0] == b.values()[0]);
}

TEST_CASE("cosine schedule endpoints and midpoint") {
  CosineSchedule s{1e-3, 1e-5, 100};
  CHECK(cosine_lr(0, s) == Catch::Approx(1e-3));
  CHECK(cosine_lr(100, s) == Catch::Approx(1e-5));
  CHECK(cosine_lr(50, s) == Catch::Approx((1e-3 + 1e-5) / 2.0));
  CHECK_THROWS_MATCHES(cosine_lr(101, s), Error,
                       Catch::Matchers::Predicate<Error>([](const Error &e) {
                         return e.code() == errc::step_out_of_range;
                       }));
  CHECK_THROWS_AS(cosine_lr(-1, s), Error);
}

TEST_CASE("determinism: same seed, same forward and gradients") {
  auto run = [](std::uint64_t seed) {
    Rng rng(seed);
    ParameterStore<D> store;
    Td w = store.glorot("w", 4, 4, rng);
    Td x = Td::from({2, 4}, {1, 2, 3, 4, 5, 6, 7, 8});
    Tape<D> tape;
    Td loss = tape.mean_all(tape.elu(tape.matmul(x, w)));
    tape.backward(loss);
    return std::make_pair(loss.item(), w.grad());
  };
  auto [l1, g1] = run(42);
  auto [l2, g2] = run(42);
  CHECK(l1 == l2);
  CHECK(g1 == g2);
}

TEST_CASE("checkpoint round-trip preserves bytes and values") {
  Rng rng(7);
  ParameterStore<D> store;
  store.glorot("layer0.W", 3, 5, rng);
  store.zeros("layer0.b", {1, 5});
  store.normal("emb", 7, 4, 0.02, rng);

  std::string bytes = checkpoint_to_bytes(store);
  auto entries = checkpoint_from_bytes(bytes);
  CHECK(entries.size() == 3);
  CHECK(entries.at("layer0.W").shape == std::vector<std::size_t>{3, 5});

  auto path = std::filesystem::temp_directory_path() / "adrgen_ckpt_test.bin";
  save_checkpoint(store, path.string());
  ParameterStore<D> store2;
  Rng rng2(999);
  store2.glorot("layer0.W", 3, 5, rng2);
  store2.zeros("layer0.b", {1, 5});
  store2.normal("emb", 7, 4, 0.02, rng2);
  load_checkpoint(store2, path.string());
  CHECK(store2.get("layer0.W").values() == store.get("layer0.W").values());
  CHECK(store2.get("emb").values() == store.get("emb").values());
  CHECK(checkpoint_to_bytes(store2) == bytes);
  std::filesystem::remove(path);

  // corrupted magic is rejected
  std::string bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(checkpoint_from_bytes(bad), Error);
}

TEST_CASE("float32 store round-trips through the same container") {
  Rng rng(7);
  ParameterStore<float> store;
  store.glorot("w", 2, 2, rng);
  std::string bytes = checkpoint_to_bytes(store);
  auto entries = checkpoint_from_bytes(bytes);
  CHECK(entries.at("w").dtype == 1);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(static_cast<float>(entries.at("w").values[i]) ==
          store.get("w").values()[i]);
}

TEST_CASE("dropout: p=0 is identity, grads flow only through kept units") {
  Rng rng(3);
  Tape<D> tape;
  Td x = Td::from({2, 2}, {1, 2, 3, 4}, true);
  Td same = tape.dropout(x, 0.0, &rng);
  CHECK(same.values() == x.values());
  Td dropped = tape.dropout(x, 0.5, &rng);
  Td loss = tape.mean_all(dropped);
  tape.backward(loss);
  for (std::size_t i = 0; i < 4; ++i) {
    if (dropped.values()[i] == 0.0 && x.values()[i] != 0.0)
      CHECK(x.grad()[i] == 0.0);
    else
      CHECK(x.grad()[i] != 0.0);
  }
}
