//
// Project adrgen - Copyright 2026 adrgen contributors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "adrgen/errors.hpp"
#include "adrgen/nn/rng.hpp"

namespace adrgen::nn {

// Dense row-major tensor handle. All state lives behind a shared_ptr so
// tape closures can hold cheap copies.
template <class T> struct TensorData {
  std::vector<std::size_t> shape;
  std::vector<T> v;
  std::vector<T> g;
  bool requires_grad = false;

  std::size_t size() const { return v.size(); }
  void ensure_grad() {
    if (g.size() != v.size())
      g.assign(v.size(), T(0));
  }
};

template <class T> class Tensor {
public:
  Tensor() = default;
  explicit Tensor(std::shared_ptr<TensorData<T>> p) : p_(std::move(p)) {}

  static Tensor zeros(std::vector<std::size_t> shape,
                      bool requires_grad = false) {
    auto d = std::make_shared<TensorData<T>>();
    std::size_t n = 1;
    for (std::size_t s : shape)
      n *= s;
    d->shape = std::move(shape);
    d->v.assign(n, T(0));
    d->requires_grad = requires_grad;
    if (requires_grad)
      d->ensure_grad();
    return Tensor(std::move(d));
  }

  static Tensor from(std::vector<std::size_t> shape, std::vector<T> values,
                     bool requires_grad = false) {
    std::size_t n = 1;
    for (std::size_t s : shape)
      n *= s;
    if (n != values.size())
      throw Error(errc::shape_mismatch, "value count does not match shape");
    auto d = std::make_shared<TensorData<T>>();
    d->shape = std::move(shape);
    d->v = std::move(values);
    d->requires_grad = requires_grad;
    if (requires_grad)
      d->ensure_grad();
    return Tensor(std::move(d));
  }

  static Tensor scalar(T value) { return from({1}, {value}); }

  bool valid() const { return p_ != nullptr; }
  TensorData<T> &data() const { return *p_; }
  const std::vector<std::size_t> &shape() const { return p_->shape; }
  std::size_t size() const { return p_->v.size(); }
  std::size_t rows() const { return p_->shape.at(0); }
  std::size_t cols() const {
    return p_->shape.size() > 1 ? p_->shape.at(1) : 1;
  }
  std::vector<T> &values() const { return p_->v; }
  std::vector<T> &grad() const {
    p_->ensure_grad();
    return p_->g;
  }
  bool requires_grad() const { return p_->requires_grad; }

  T &at(std::size_t i, std::size_t j) const {
    return p_->v[i * cols() + j];
  }
  T item() const {
    if (size() != 1)
      throw Error(errc::shape_mismatch, "item() on non-scalar tensor");
    return p_->v[0];
  }
  std::shared_ptr<TensorData<T>> ptr() const { return p_; }

private:
  std::shared_ptr<TensorData<T>> p_;
};

namespace detail {
inline void require(bool cond, const char *msg) {
  if (!cond)
    throw Error(errc::shape_mismatch, msg);
}
} // namespace detail

// Records forward ops and replays their adjoints in reverse. A tape is
// single-owner for the duration of one forward/backward pass; recording
// can be switched off for inference.
template <class T> class Tape {
public:
  explicit Tape(bool recording = true) : recording_(recording) {}

  bool recording() const { return recording_; }

  Tensor<T> matmul(Tensor<T> a, Tensor<T> b) {
    detail::require(a.shape().size() == 2 && b.shape().size() == 2,
                    "matmul needs 2-d tensors");
    std::size_t m = a.rows(), k = a.cols(), k2 = b.rows(), n = b.cols();
    detail::require(k == k2, "matmul inner dimensions disagree");
    Tensor<T> out = Tensor<T>::zeros({m, n});
    const T *av = a.values().data();
    const T *bv = b.values().data();
    T *ov = out.values().data();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t p = 0; p < k; ++p) {
        T x = av[i * k + p];
        if (x == T(0))
          continue;
        const T *brow = bv + p * n;
        T *orow = ov + i * n;
        for (std::size_t j = 0; j < n; ++j)
          orow[j] += x * brow[j];
      }
    record([a, b, out, m, k, n]() {
      const T *og = out.data().g.data();
      T *ag = a.grad().data();
      const T *bv2 = b.values().data();
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          T go = og[i * n + j];
          if (go == T(0))
            continue;
          for (std::size_t p = 0; p < k; ++p)
            ag[i * k + p] += go * bv2[p * n + j];
        }
      T *bg = b.grad().data();
      const T *av2 = a.values().data();
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          T x = av2[i * k + p];
          if (x == T(0))
            continue;
          for (std::size_t j = 0; j < n; ++j)
            bg[p * n + j] += x * og[i * n + j];
        }
    });
    return out;
  }

  Tensor<T> transpose(Tensor<T> a) {
    detail::require(a.shape().size() == 2, "transpose needs a 2-d tensor");
    std::size_t m = a.rows(), n = a.cols();
    Tensor<T> out = Tensor<T>::zeros({n, m});
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out.values()[j * m + i] = a.values()[i * n + j];
    record([a, out, m, n]() {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
          a.grad()[i * n + j] += out.data().g[j * m + i];
    });
    return out;
  }

  Tensor<T> add(Tensor<T> a, Tensor<T> b) {
    detail::require(a.shape() == b.shape(), "add shapes disagree");
    Tensor<T> out = Tensor<T>::zeros(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i)
      out.values()[i] = a.values()[i] + b.values()[i];
    record([a, b, out]() {
      for (std::size_t i = 0; i < out.size(); ++i) {
        a.grad()[i] += out.data().g[i];
        b.grad()[i] += out.data().g[i];
      }
    });
    return out;
  }

  // a [m x n] + row [n] broadcast over rows
  Tensor<T> add_rowvec(Tensor<T> a, Tensor<T> row) {
    std::size_t m = a.rows(), n = a.cols();
    detail::require(row.size() == n, "row vector width disagrees");
    Tensor<T> out = Tensor<T>::zeros(a.shape());
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out.values()[i * n + j] = a.values()[i * n + j] + row.values()[j];
    record([a, row, out, m, n]() {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          a.grad()[i * n + j] += out.data().g[i * n + j];
          row.grad()[j] += out.data().g[i * n + j];
        }
    });
    return out;
  }

  Tensor<T> scale(Tensor<T> a, T c) {
    Tensor<T> out = Tensor<T>::zeros(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i)
      out.values()[i] = a.values()[i] * c;
    record([a, out, c]() {
      for (std::size_t i = 0; i < out.size(); ++i)
        a.grad()[i] += c * out.data().g[i];
    });
    return out;
  }

  Tensor<T> mul(Tensor<T> a, Tensor<T> b) {
    detail::require(a.shape() == b.shape(), "mul shapes disagree");
    Tensor<T> out = Tensor<T>::zeros(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i)
      out.values()[i] = a.values()[i] * b.values()[i];
    record([a, b, out]() {
      for (std::size_t i = 0; i < out.size(); ++i) {
        a.grad()[i] += b.values()[i] * out.data().g[i];
        b.grad()[i] += a.values()[i] * out.data().g[i];
      }
    });
    return out;
  }

  Tensor<T> concat_cols(Tensor<T> a, Tensor<T> b) {
    detail::require(a.rows() == b.rows(), "concat_cols row counts disagree");
    std::size_t m = a.rows(), p = a.cols(), q = b.cols();
    Tensor<T> out = Tensor<T>::zeros({m, p + q});
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < p; ++j)
        out.values()[i * (p + q) + j] = a.values()[i * p + j];
      for (std::size_t j = 0; j < q; ++j)
        out.values()[i * (p + q) + p + j] = b.values()[i * q + j];
    }
    record([a, b, out, m, p, q]() {
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < p; ++j)
          a.grad()[i * p + j] += out.data().g[i * (p + q) + j];
        for (std::size_t j = 0; j < q; ++j)
          b.grad()[i * q + j] += out.data().g[i * (p + q) + p + j];
      }
    });
    return out;
  }

  // repeat a [1 x n] row m times
  Tensor<T> repeat_rows(Tensor<T> row, std::size_t m) {
    detail::require(row.rows() == 1, "repeat_rows needs a single row");
    std::size_t n = row.cols();
    Tensor<T> out = Tensor<T>::zeros({m, n});
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out.values()[i * n + j] = row.values()[j];
    record([row, out, m, n]() {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
          row.grad()[j] += out.data().g[i * n + j];
    });
    return out;
  }

  Tensor<T> mean_all(Tensor<T> a) {
    Tensor<T> out = Tensor<T>::zeros({1});
    T acc = T(0);
    for (std::size_t i = 0; i < a.size(); ++i)
      acc += a.values()[i];
    out.values()[0] = acc / static_cast<T>(a.size());
    record([a, out]() {
      T go = out.data().g[0] / static_cast<T>(a.size());
      for (std::size_t i = 0; i < a.size(); ++i)
        a.grad()[i] += go;
    });
    return out;
  }

  Tensor<T> sum_all(Tensor<T> a) {
    Tensor<T> out = Tensor<T>::zeros({1});
    T acc = T(0);
    for (std::size_t i = 0; i < a.size(); ++i)
      acc += a.values()[i];
    out.values()[0] = acc;
    record([a, out]() {
      T go = out.data().g[0];
      for (std::size_t i = 0; i < a.size(); ++i)
        a.grad()[i] += go;
    });
    return out;
  }

  // mean over axis 0: [m x n] -> [1 x n]
  Tensor<T> mean_rows(Tensor<T> a) {
    std::size_t m = a.rows(), n = a.cols();
    Tensor<T> out = Tensor<T>::zeros({1, n});
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out.values()[j] += a.values()[i * n + j];
    for (std::size_t j = 0; j < n; ++j)
      out.values()[j] /= static_cast<T>(m);
    record([a, out, m, n]() {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
          a.grad()[i * n + j] += out.data().g[j] / static_cast<T>(m);
    });
    return out;
  }

  // gather rows; ids may repeat (adjoint scatter-adds)
  Tensor<T> select_rows(Tensor<T> a, std::vector<int> ids) {
    std::size_t n = a.cols();
    for (int id : ids)
      detail::require(id >= 0 && static_cast<std::size_t>(id) < a.rows(),
                      "select_rows index out of range");
    Tensor<T> out = Tensor<T>::zeros({ids.size(), n});
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = 0; j < n; ++j)
        out.values()[i * n + j] =
            a.values()[static_cast<std::size_t>(ids[i]) * n + j];
    record([a, out, ids, n]() {
      for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = 0; j < n; ++j)
          a.grad()[static_cast<std::size_t>(ids[i]) * n + j] +=
              out.data().g[i * n + j];
    });
    return out;
  }

  Tensor<T> embedding_lookup(Tensor<T> table, const std::vector<int> &ids) {
    return select_rows(table, ids);
  }

  Tensor<T> leaky_relu(Tensor<T> a, T slope) {
    Tensor<T> out = Tensor<T>::zeros(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i)
      out.values()[i] =
          a.values()[i] > T(0) ? a.values()[i] : slope * a.values()[i];
    record([a, out, slope]() {
      for (std::size_t i = 0; i < out.size(); ++i)
        a.grad()[i] +=
            (a.values()[i] > T(0) ? T(1) : slope) * out.data().g[i];
    });
    return out;
  }

  Tensor<T> relu(Tensor<T> a) { return leaky_relu(a, T(0)); }

  Tensor<T> elu(Tensor<T> a) {
    Tensor<T> out = Tensor<T>::zeros(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i)
      out.values()[i] = a.values()[i] > T(0)
                            ? a.values()[i]
                            : std::expm1(a.values()[i]);
    record([a, out]() {
      for (std::size_t i = 0; i < out.size(); ++i) {
        T d = a.values()[i] > T(0) ? T(1) : std::exp(a.values()[i]);
        a.grad()[i] += d * out.data().g[i];
      }
    });
    return out;
  }

  // Row-wise softmax over allowed positions. mask==nullptr allows all.
  // Masked positions are exactly zero in the output; a row with no
  // allowed position raises AllPositionsMasked.
  Tensor<T> softmax_rows(Tensor<T> a, const std::vector<char> *mask) {
    std::size_t m = a.rows(), n = a.cols();
    if (mask)
      detail::require(mask->size() == m * n, "softmax mask shape disagrees");
    Tensor<T> out = Tensor<T>::zeros(a.shape());
    for (std::size_t i = 0; i < m; ++i) {
      T mx = -std::numeric_limits<T>::infinity();
      bool any = false;
      for (std::size_t j = 0; j < n; ++j) {
        if (mask && !(*mask)[i * n + j])
          continue;
        any = true;
        mx = std::max(mx, a.values()[i * n + j]);
      }
      if (!any)
        throw Error(errc::all_positions_masked,
                    "softmax row has no allowed position");
      T denom = T(0);
      for (std::size_t j = 0; j < n; ++j) {
        if (mask && !(*mask)[i * n + j])
          continue;
        T e = std::exp(a.values()[i * n + j] - mx);
        out.values()[i * n + j] = e;
        denom += e;
      }
      for (std::size_t j = 0; j < n; ++j)
        out.values()[i * n + j] /= denom; // masked entries stay exactly 0
    }
    record([a, out, m, n]() {
      for (std::size_t i = 0; i < m; ++i) {
        T dot = T(0);
        for (std::size_t j = 0; j < n; ++j)
          dot += out.data().g[i * n + j] * out.values()[i * n + j];
        for (std::size_t j = 0; j < n; ++j)
          a.grad()[i * n + j] += out.values()[i * n + j] *
                                 (out.data().g[i * n + j] - dot);
      }
    });
    return out;
  }

  Tensor<T> layer_norm(Tensor<T> x, Tensor<T> gain, Tensor<T> bias,
                       T eps = T(1e-5)) {
    std::size_t m = x.rows(), n = x.cols();
    detail::require(gain.size() == n && bias.size() == n,
                    "layer_norm parameter width disagrees");
    Tensor<T> out = Tensor<T>::zeros(x.shape());
    auto xhat = std::make_shared<std::vector<T>>(m * n);
    auto inv_s = std::make_shared<std::vector<T>>(m);
    for (std::size_t i = 0; i < m; ++i) {
      T mu = T(0);
      for (std::size_t j = 0; j < n; ++j)
        mu += x.values()[i * n + j];
      mu /= static_cast<T>(n);
      T var = T(0);
      for (std::size_t j = 0; j < n; ++j) {
        T d = x.values()[i * n + j] - mu;
        var += d * d;
      }
      var /= static_cast<T>(n);
      T is = T(1) / std::sqrt(var + eps);
      (*inv_s)[i] = is;
      for (std::size_t j = 0; j < n; ++j) {
        T xh = (x.values()[i * n + j] - mu) * is;
        (*xhat)[i * n + j] = xh;
        out.values()[i * n + j] = gain.values()[j] * xh + bias.values()[j];
      }
    }
    record([x, gain, bias, out, xhat, inv_s, m, n]() {
      for (std::size_t i = 0; i < m; ++i) {
        T mean_dyg = T(0), mean_dyg_xhat = T(0);
        for (std::size_t j = 0; j < n; ++j) {
          T dyg = out.data().g[i * n + j] * gain.values()[j];
          mean_dyg += dyg;
          mean_dyg_xhat += dyg * (*xhat)[i * n + j];
        }
        mean_dyg /= static_cast<T>(n);
        mean_dyg_xhat /= static_cast<T>(n);
        for (std::size_t j = 0; j < n; ++j) {
          T dyg = out.data().g[i * n + j] * gain.values()[j];
          x.grad()[i * n + j] += (*inv_s)[i] * (dyg - mean_dyg -
                                                (*xhat)[i * n + j] *
                                                    mean_dyg_xhat);
          gain.grad()[j] += out.data().g[i * n + j] * (*xhat)[i * n + j];
          bias.grad()[j] += out.data().g[i * n + j];
        }
      }
    });
    return out;
  }

  Tensor<T> linear(Tensor<T> x, Tensor<T> W, Tensor<T> b) {
    return add_rowvec(matmul(x, W), b);
  }

  // Builds a dense [m x n] matrix from per-edge scalar values. The adjoint
  // is a gather.
  Tensor<T> scatter_dense(Tensor<T> values,
                          const std::vector<std::pair<int, int>> &coords,
                          std::size_t m, std::size_t n) {
    detail::require(values.size() == coords.size(),
                    "scatter value count disagrees");
    Tensor<T> out = Tensor<T>::zeros({m, n});
    for (std::size_t e = 0; e < coords.size(); ++e) {
      auto [i, j] = coords[e];
      detail::require(i >= 0 && static_cast<std::size_t>(i) < m && j >= 0 &&
                          static_cast<std::size_t>(j) < n,
                      "scatter coordinate out of range");
      out.values()[static_cast<std::size_t>(i) * n +
                   static_cast<std::size_t>(j)] += values.values()[e];
    }
    record([values, out, coords, n]() {
      for (std::size_t e = 0; e < coords.size(); ++e) {
        auto [i, j] = coords[e];
        values.grad()[e] += out.data().g[static_cast<std::size_t>(i) * n +
                                         static_cast<std::size_t>(j)];
      }
    });
    return out;
  }

  Tensor<T> pad_rows(Tensor<T> a, std::size_t total_rows) {
    std::size_t m = a.rows(), n = a.cols();
    detail::require(total_rows >= m, "pad_rows target smaller than input");
    Tensor<T> out = Tensor<T>::zeros({total_rows, n});
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out.values()[i * n + j] = a.values()[i * n + j];
    record([a, out, m, n]() {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
          a.grad()[i * n + j] += out.data().g[i * n + j];
    });
    return out;
  }

  // Inverted dropout; identity when p == 0.
  Tensor<T> dropout(Tensor<T> a, double p, Rng *rng) {
    if (p <= 0.0 || rng == nullptr)
      return a;
    auto keep = std::make_shared<std::vector<char>>(a.size());
    T scale_up = static_cast<T>(1.0 / (1.0 - p));
    Tensor<T> out = Tensor<T>::zeros(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) {
      bool k = rng->uniform01() >= p;
      (*keep)[i] = k;
      out.values()[i] = k ? a.values()[i] * scale_up : T(0);
    }
    record([a, out, keep, scale_up]() {
      for (std::size_t i = 0; i < out.size(); ++i)
        if ((*keep)[i])
          a.grad()[i] += scale_up * out.data().g[i];
    });
    return out;
  }

  // Mean token-level cross entropy over positions whose target differs
  // from ignore_id. n_valid_out, when given, receives the number of
  // contributing positions.
  Tensor<T> cross_entropy_masked(Tensor<T> logits,
                                 const std::vector<int> &targets,
                                 int ignore_id, long *n_valid_out = nullptr) {
    std::size_t m = logits.rows(), n = logits.cols();
    detail::require(targets.size() == m,
                    "cross entropy target count disagrees");
    auto probs = std::make_shared<std::vector<T>>(m * n);
    long valid = 0;
    T loss = T(0);
    for (std::size_t i = 0; i < m; ++i) {
      T mx = -std::numeric_limits<T>::infinity();
      for (std::size_t j = 0; j < n; ++j)
        mx = std::max(mx, logits.values()[i * n + j]);
      T denom = T(0);
      for (std::size_t j = 0; j < n; ++j) {
        T e = std::exp(logits.values()[i * n + j] - mx);
        (*probs)[i * n + j] = e;
        denom += e;
      }
      for (std::size_t j = 0; j < n; ++j)
        (*probs)[i * n + j] /= denom;
      if (targets[i] == ignore_id)
        continue;
      detail::require(targets[i] >= 0 &&
                          static_cast<std::size_t>(targets[i]) < n,
                      "cross entropy target out of range");
      ++valid;
      loss -= std::log(std::max((*probs)[i * n +
                                         static_cast<std::size_t>(targets[i])],
                                std::numeric_limits<T>::min()));
    }
    if (valid == 0)
      throw Error(errc::all_positions_masked,
                  "no unmasked target position in cross entropy");
    if (n_valid_out)
      *n_valid_out = valid;
    Tensor<T> out = Tensor<T>::scalar(loss / static_cast<T>(valid));
    record([logits, out, probs, targets, ignore_id, valid, m, n]() {
      T go = out.data().g[0] / static_cast<T>(valid);
      for (std::size_t i = 0; i < m; ++i) {
        if (targets[i] == ignore_id)
          continue;
        for (std::size_t j = 0; j < n; ++j) {
          T grad = (*probs)[i * n + j];
          if (j == static_cast<std::size_t>(targets[i]))
            grad -= T(1);
          logits.grad()[i * n + j] += go * grad;
        }
      }
    });
    return out;
  }

  // Populates gradients of everything reachable from a scalar loss.
  void backward(Tensor<T> loss) {
    if (loss.size() != 1)
      throw Error(errc::non_scalar_loss, "backward needs a scalar loss");
    loss.grad()[0] = T(1);
    for (auto it = back_.rbegin(); it != back_.rend(); ++it)
      (*it)();
  }

  void clear() { back_.clear(); }
  std::size_t n_ops() const { return back_.size(); }

private:
  void record(std::function<void()> fn) {
    if (recording_)
      back_.push_back(std::move(fn));
  }

  bool recording_;
  std::vector<std::function<void()>> back_;
};

} // namespace adrgen::nn
