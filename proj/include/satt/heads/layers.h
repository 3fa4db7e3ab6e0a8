// satt/heads/layers.h

// Copyright 2026  The satt Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Building blocks shared by the prediction heads.  Each layer keeps the
// activations of its last training-mode Forward() and consumes them in
// Backward(), which accumulates into the parameter gradients and returns the
// gradient with respect to the layer input.

#ifndef SATT_HEADS_LAYERS_H_
#define SATT_HEADS_LAYERS_H_

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "satt/heads/tensor.h"

namespace satt {

template <typename T>
T Sigmoid(T x) {
  return x >= 0 ? T(1) / (T(1) + std::exp(-x)) : std::exp(x) / (T(1) + std::exp(x));
}

/// Inverted-dropout mask: each entry is 0 with probability p, else 1/(1-p).
template <typename T>
Matrix<T> DropoutMask(Eigen::Index rows, Eigen::Index cols, double p, std::mt19937_64 &rng) {
  Matrix<T> mask(rows, cols);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const T keep = static_cast<T>(1.0 / (1.0 - p));
  for (Eigen::Index i = 0; i < mask.size(); ++i)
    mask.data()[i] = u(rng) < p ? T(0) : keep;
  return mask;
}

// y = x W^T + b with W of shape (out, in).
template <typename T>
class Linear {
 public:
  Linear() = default;
  Linear(ParameterSet<T> &params, const std::string &name, int in, int out, bool bias = true)
      : in_(in), out_(out) {
    w_ = params.Add(name + ".weight", {out, in});
    if (bias) b_ = params.Add(name + ".bias", {out});
  }
  void Init(std::mt19937_64 &rng) { InitFanInUniform(w_, in_, rng); }

  Matrix<T> Forward(const Matrix<T> &x, bool keep) {
    if (keep) x_ = x;
    return Apply(x);
  }
  Matrix<T> Apply(const Matrix<T> &x) const {
    Matrix<T> y = x * w_->Mat().transpose();
    if (b_) y.rowwise() += b_->Vec().transpose();
    return y;
  }
  Matrix<T> Backward(const Matrix<T> &dy) { return Backward(x_, dy); }
  Matrix<T> Backward(const Matrix<T> &x, const Matrix<T> &dy) {
    w_->GradMat().noalias() += dy.transpose() * x;
    if (b_) b_->GradVec() += dy.colwise().sum().transpose();
    return dy * w_->Mat();
  }

  int in() const { return in_; }
  int out() const { return out_; }
  Tensor<T> *weight() const { return w_; }
  Tensor<T> *bias() const { return b_; }

 private:
  int in_ = 0, out_ = 0;
  Tensor<T> *w_ = nullptr;
  Tensor<T> *b_ = nullptr;
  Matrix<T> x_;
};

struct ConvGeometry {
  int in_channels = 1, height = 1, width = 1;
  int out_channels = 1, kernel = 3, stride = 1, pad = 1;
  int out_height() const { return (height + 2 * pad - kernel) / stride + 1; }
  int out_width() const { return (width + 2 * pad - kernel) / stride + 1; }
  int in_size() const { return in_channels * height * width; }
  int out_size() const { return out_channels * out_height() * out_width(); }
};

// Bias-free 2-D convolution over a batch stored as B x (C*H*W) rows.
template <typename T>
class Conv2d {
 public:
  Conv2d() = default;
  Conv2d(ParameterSet<T> &params, const std::string &name, const ConvGeometry &g) : g_(g) {
    w_ = params.Add(name + ".weight", {g.out_channels, g.in_channels, g.kernel, g.kernel});
  }
  void Init(std::mt19937_64 &rng) {
    InitFanInUniform(w_, g_.in_channels * g_.kernel * g_.kernel, rng);
  }
  const ConvGeometry &geometry() const { return g_; }
  Tensor<T> *weight() const { return w_; }

  Matrix<T> Forward(const Matrix<T> &x, bool keep) {
    if (keep) x_ = x;
    const int batch = static_cast<int>(x.rows());
    const int spatial = g_.out_height() * g_.out_width();
    Matrix<T> y(batch, g_.out_size());
    Matrix<T> col;
    for (int b = 0; b < batch; ++b) {
      Im2Col(x.row(b).data(), col);
      MatrixMap<T>(y.row(b).data(), g_.out_channels, spatial).noalias() = w_->Mat() * col;
    }
    return y;
  }

  Matrix<T> Backward(const Matrix<T> &dy) {
    const int batch = static_cast<int>(dy.rows());
    const int spatial = g_.out_height() * g_.out_width();
    Matrix<T> dx = Matrix<T>::Zero(batch, g_.in_size());
    Matrix<T> col, dcol;
    for (int b = 0; b < batch; ++b) {
      Im2Col(x_.row(b).data(), col);
      ConstMatrixMap<T> dyb(dy.row(b).data(), g_.out_channels, spatial);
      w_->GradMat().noalias() += dyb * col.transpose();
      dcol.noalias() = w_->Mat().transpose() * dyb;
      Col2Im(dcol, dx.row(b).data());
    }
    return dx;
  }

 private:
  void Im2Col(const T *x, Matrix<T> &col) const {
    const int ho = g_.out_height(), wo = g_.out_width(), k = g_.kernel;
    col.setZero(g_.in_channels * k * k, ho * wo);
    for (int c = 0; c < g_.in_channels; ++c)
      for (int ki = 0; ki < k; ++ki)
        for (int kj = 0; kj < k; ++kj) {
          T *dst = col.row((c * k + ki) * k + kj).data();
          for (int oi = 0; oi < ho; ++oi) {
            const int ii = oi * g_.stride - g_.pad + ki;
            if (ii < 0 || ii >= g_.height) continue;
            for (int oj = 0; oj < wo; ++oj) {
              const int jj = oj * g_.stride - g_.pad + kj;
              if (jj < 0 || jj >= g_.width) continue;
              dst[oi * wo + oj] = x[(c * g_.height + ii) * g_.width + jj];
            }
          }
        }
  }

  void Col2Im(const Matrix<T> &col, T *dx) const {
    const int ho = g_.out_height(), wo = g_.out_width(), k = g_.kernel;
    for (int c = 0; c < g_.in_channels; ++c)
      for (int ki = 0; ki < k; ++ki)
        for (int kj = 0; kj < k; ++kj) {
          const T *src = col.row((c * k + ki) * k + kj).data();
          for (int oi = 0; oi < ho; ++oi) {
            const int ii = oi * g_.stride - g_.pad + ki;
            if (ii < 0 || ii >= g_.height) continue;
            for (int oj = 0; oj < wo; ++oj) {
              const int jj = oj * g_.stride - g_.pad + kj;
              if (jj < 0 || jj >= g_.width) continue;
              dx[(c * g_.height + ii) * g_.width + jj] += src[oi * wo + oj];
            }
          }
        }
  }

  ConvGeometry g_;
  Tensor<T> *w_ = nullptr;
  Matrix<T> x_;
};

// Per-channel batch normalization over (batch, spatial) for B x (C*S) rows.
// Training mode normalizes with batch statistics and updates the running
// estimates (momentum 0.1, unbiased variance); evaluation mode uses the
// running estimates.
template <typename T>
class BatchNorm2d {
 public:
  static constexpr double kEps = 1e-5;
  static constexpr double kMomentum = 0.1;

  BatchNorm2d() = default;
  BatchNorm2d(ParameterSet<T> &params, const std::string &name, int channels, int spatial)
      : channels_(channels), spatial_(spatial) {
    gamma_ = params.Add(name + ".gamma", {channels});
    beta_ = params.Add(name + ".beta", {channels});
    mean_ = params.Add(name + ".running_mean", {channels}, false);
    var_ = params.Add(name + ".running_var", {channels}, false);
  }
  void Init() {
    std::fill(gamma_->value.begin(), gamma_->value.end(), T(1));
    std::fill(beta_->value.begin(), beta_->value.end(), T(0));
    std::fill(mean_->value.begin(), mean_->value.end(), T(0));
    std::fill(var_->value.begin(), var_->value.end(), T(1));
  }
  Tensor<T> *gamma() const { return gamma_; }
  Tensor<T> *beta() const { return beta_; }

  Matrix<T> Forward(const Matrix<T> &x, bool training) {
    const Eigen::Index batch = x.rows();
    Matrix<T> y(batch, x.cols());
    if (training) {
      xhat_.resize(batch, x.cols());
      inv_std_.resize(channels_);
    }
    const double n = double(batch) * spatial_;
    for (int c = 0; c < channels_; ++c) {
      auto block = x.middleCols(Eigen::Index(c) * spatial_, spatial_);
      T mean, inv_std;
      if (training) {
        double m = 0;
        for (Eigen::Index b = 0; b < batch; ++b) m += block.row(b).sum();
        m /= n;
        double v = 0;
        for (Eigen::Index b = 0; b < batch; ++b)
          v += (block.row(b).array() - T(m)).square().sum();
        v /= n;
        mean = T(m);
        inv_std = T(1.0 / std::sqrt(v + kEps));
        inv_std_[c] = inv_std;
        const double unbiased = n > 1 ? v * n / (n - 1) : v;
        mean_->value[c] = T((1 - kMomentum) * mean_->value[c] + kMomentum * m);
        var_->value[c] = T((1 - kMomentum) * var_->value[c] + kMomentum * unbiased);
      } else {
        mean = mean_->value[c];
        inv_std = T(1.0 / std::sqrt(double(var_->value[c]) + kEps));
      }
      auto out = y.middleCols(Eigen::Index(c) * spatial_, spatial_);
      out = ((block.array() - mean) * inv_std).matrix();
      if (training) xhat_.middleCols(Eigen::Index(c) * spatial_, spatial_) = out;
      out = (out.array() * gamma_->value[c] + beta_->value[c]).matrix();
    }
    return y;
  }

  Matrix<T> Backward(const Matrix<T> &dy) {
    const Eigen::Index batch = dy.rows();
    const T n = T(double(batch) * spatial_);
    Matrix<T> dx(batch, dy.cols());
    for (int c = 0; c < channels_; ++c) {
      auto g = dy.middleCols(Eigen::Index(c) * spatial_, spatial_);
      auto xh = xhat_.middleCols(Eigen::Index(c) * spatial_, spatial_);
      const T sum_dy = g.sum();
      const T sum_dy_xh = (g.array() * xh.array()).sum();
      gamma_->grad[c] += sum_dy_xh;
      beta_->grad[c] += sum_dy;
      const T gam = gamma_->value[c];
      // dxhat = dy * gamma
      dx.middleCols(Eigen::Index(c) * spatial_, spatial_) =
          ((gam * inv_std_[c] / n) *
           (n * g.array() - sum_dy - xh.array() * sum_dy_xh))
              .matrix();
    }
    return dx;
  }

 private:
  int channels_ = 0, spatial_ = 0;
  Tensor<T> *gamma_ = nullptr, *beta_ = nullptr, *mean_ = nullptr, *var_ = nullptr;
  Matrix<T> xhat_;
  std::vector<T> inv_std_;
};

// Row-wise layer normalization with learned scale and shift.
template <typename T>
class LayerNorm {
 public:
  static constexpr double kEps = 1e-5;

  struct Cache {
    Matrix<T> xhat;
    Vector<T> inv_std;
  };

  LayerNorm() = default;
  LayerNorm(ParameterSet<T> &params, const std::string &name, int features) : n_(features) {
    gamma_ = params.Add(name + ".gamma", {features});
    beta_ = params.Add(name + ".beta", {features});
  }
  void Init() {
    std::fill(gamma_->value.begin(), gamma_->value.end(), T(1));
    std::fill(beta_->value.begin(), beta_->value.end(), T(0));
  }

  Matrix<T> Forward(const Matrix<T> &x, Cache *cache) const {
    Matrix<T> xhat(x.rows(), x.cols());
    Vector<T> inv_std(x.rows());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      const T mean = x.row(r).mean();
      const T var = (x.row(r).array() - mean).square().mean();
      inv_std[r] = T(1) / std::sqrt(var + T(kEps));
      xhat.row(r) = (x.row(r).array() - mean) * inv_std[r];
    }
    Matrix<T> y = (xhat.array().rowwise() * gamma_->Vec().transpose().array()).matrix();
    y.rowwise() += beta_->Vec().transpose();
    if (cache) {
      cache->xhat = std::move(xhat);
      cache->inv_std = std::move(inv_std);
    }
    return y;
  }

  Matrix<T> Backward(const Cache &cache, const Matrix<T> &dy) {
    gamma_->GradVec() += (dy.array() * cache.xhat.array()).colwise().sum().matrix().transpose();
    beta_->GradVec() += dy.colwise().sum().transpose();
    Matrix<T> dxhat = (dy.array().rowwise() * gamma_->Vec().transpose().array()).matrix();
    Matrix<T> dx(dy.rows(), dy.cols());
    const T n = T(n_);
    for (Eigen::Index r = 0; r < dy.rows(); ++r) {
      const T s1 = dxhat.row(r).sum();
      const T s2 = (dxhat.row(r).array() * cache.xhat.row(r).array()).sum();
      dx.row(r) = (cache.inv_std[r] / n) *
                  (n * dxhat.row(r).array() - s1 - cache.xhat.row(r).array() * s2);
    }
    return dx;
  }

 private:
  int n_ = 0;
  Tensor<T> *gamma_ = nullptr, *beta_ = nullptr;
};

// One direction of an LSTM layer.  Gate order in the stacked weights is
// input, forget, cell, output.
template <typename T>
class LstmDirection {
 public:
  struct Cache {
    Matrix<T> x;      // T x in
    Matrix<T> gates;  // T x 4H, post-activation
    Matrix<T> cell;   // T x H
    Matrix<T> hidden; // T x H
  };

  LstmDirection() = default;
  LstmDirection(ParameterSet<T> &params, const std::string &name, int in, int hidden,
                bool reverse)
      : in_(in), h_(hidden), reverse_(reverse) {
    w_ih_ = params.Add(name + ".w_ih", {4 * hidden, in});
    w_hh_ = params.Add(name + ".w_hh", {4 * hidden, hidden});
    b_ = params.Add(name + ".bias", {4 * hidden});
  }
  void Init(std::mt19937_64 &rng) {
    InitFanInUniform(w_ih_, in_, rng);
    InitFanInUniform(w_hh_, h_, rng);
  }

  /// Returns T x H hidden states indexed by time (not processing order).
  Matrix<T> Forward(const Matrix<T> &x, Cache *cache) const {
    const Eigen::Index steps = x.rows();
    const int H = h_;
    Matrix<T> zx = x * w_ih_->Mat().transpose();
    zx.rowwise() += b_->Vec().transpose();
    Matrix<T> gates(steps, 4 * H), cell(steps, H), hidden(steps, H);
    RowVector<T> h_prev = RowVector<T>::Zero(H), c_prev = RowVector<T>::Zero(H);
    RowVector<T> z(4 * H);
    for (Eigen::Index s = 0; s < steps; ++s) {
      const Eigen::Index t = reverse_ ? steps - 1 - s : s;
      z.noalias() = zx.row(t) + h_prev * w_hh_->Mat().transpose();
      for (int j = 0; j < H; ++j) {
        const T i = Sigmoid(z[j]);
        const T f = Sigmoid(z[H + j]);
        const T g = std::tanh(z[2 * H + j]);
        const T o = Sigmoid(z[3 * H + j]);
        const T c = f * c_prev[j] + i * g;
        gates(t, j) = i;
        gates(t, H + j) = f;
        gates(t, 2 * H + j) = g;
        gates(t, 3 * H + j) = o;
        cell(t, j) = c;
        hidden(t, j) = o * std::tanh(c);
      }
      h_prev = hidden.row(t);
      c_prev = cell.row(t);
    }
    if (cache) {
      cache->x = x;
      cache->gates = std::move(gates);
      cache->cell = std::move(cell);
      cache->hidden = hidden;
    }
    return hidden;
  }

  /// Backpropagation through time; returns d(loss)/dx.
  Matrix<T> Backward(const Cache &cache, const Matrix<T> &dhidden) {
    const Eigen::Index steps = cache.x.rows();
    const int H = h_;
    Matrix<T> dz(steps, 4 * H);
    Matrix<T> h_before = Matrix<T>::Zero(steps, H);
    RowVector<T> dh_next = RowVector<T>::Zero(H), dc_next = RowVector<T>::Zero(H);
    for (Eigen::Index s = steps - 1; s >= 0; --s) {
      const Eigen::Index t = reverse_ ? steps - 1 - s : s;
      const bool first = s == 0;
      const Eigen::Index prev = reverse_ ? t + 1 : t - 1;
      for (int j = 0; j < H; ++j) {
        const T i = cache.gates(t, j), f = cache.gates(t, H + j);
        const T g = cache.gates(t, 2 * H + j), o = cache.gates(t, 3 * H + j);
        const T tc = std::tanh(cache.cell(t, j));
        const T dh = dhidden(t, j) + dh_next[j];
        const T dc = dc_next[j] + dh * o * (T(1) - tc * tc);
        const T c_prev = first ? T(0) : cache.cell(prev, j);
        dz(t, j) = dc * g * i * (T(1) - i);
        dz(t, H + j) = dc * c_prev * f * (T(1) - f);
        dz(t, 2 * H + j) = dc * i * (T(1) - g * g);
        dz(t, 3 * H + j) = dh * tc * o * (T(1) - o);
        dc_next[j] = dc * f;
      }
      if (!first) h_before.row(t) = cache.hidden.row(prev);
      dh_next.noalias() = dz.row(t) * w_hh_->Mat();
    }
    w_ih_->GradMat().noalias() += dz.transpose() * cache.x;
    w_hh_->GradMat().noalias() += dz.transpose() * h_before;
    b_->GradVec() += dz.colwise().sum().transpose();
    return dz * w_ih_->Mat();
  }

 private:
  int in_ = 0, h_ = 0;
  bool reverse_ = false;
  Tensor<T> *w_ih_ = nullptr, *w_hh_ = nullptr, *b_ = nullptr;
};

// Additive attention pooling over time:
//   u_t = tanh(W h_t + b),  e_t = v . u_t,  alpha = softmax(e),  c = sum_t alpha_t h_t
template <typename T>
class AdditiveAttention {
 public:
  struct Cache {
    Matrix<T> h;      // T x F
    Matrix<T> u;      // T x A
    Vector<T> alpha;  // T
  };

  AdditiveAttention() = default;
  AdditiveAttention(ParameterSet<T> &params, const std::string &name, int features, int dim)
      : features_(features), dim_(dim) {
    w_ = params.Add(name + ".weight", {dim, features});
    b_ = params.Add(name + ".bias", {dim});
    v_ = params.Add(name + ".v", {dim});
  }
  void Init(std::mt19937_64 &rng) {
    InitFanInUniform(w_, features_, rng);
    InitFanInUniform(v_, dim_, rng);
  }

  /// Returns the 1 x F attended vector.
  RowVector<T> Forward(const Matrix<T> &h, Cache *cache, Vector<T> *weights = nullptr) const {
    Matrix<T> u = h * w_->Mat().transpose();
    u.rowwise() += b_->Vec().transpose();
    u = u.array().tanh().matrix();
    Vector<T> e = u * v_->Vec();
    const T mx = e.maxCoeff();
    Vector<T> alpha = (e.array() - mx).exp().matrix();
    alpha /= alpha.sum();
    RowVector<T> c = alpha.transpose() * h;
    if (weights) *weights = alpha;
    if (cache) {
      cache->h = h;
      cache->u = std::move(u);
      cache->alpha = std::move(alpha);
    }
    return c;
  }

  Matrix<T> Backward(const Cache &cache, const RowVector<T> &dc) {
    const Vector<T> &alpha = cache.alpha;
    Vector<T> dalpha = cache.h * dc.transpose();
    Matrix<T> dh = alpha * dc;
    Vector<T> de = (alpha.array() * (dalpha.array() - alpha.dot(dalpha))).matrix();
    v_->GradVec() += cache.u.transpose() * de;
    Matrix<T> dpre = ((de * v_->Vec().transpose()).array() *
                      (T(1) - cache.u.array().square()))
                         .matrix();
    w_->GradMat().noalias() += dpre.transpose() * cache.h;
    b_->GradVec() += dpre.colwise().sum().transpose();
    dh.noalias() += dpre * w_->Mat();
    return dh;
  }

 private:
  int features_ = 0, dim_ = 0;
  Tensor<T> *w_ = nullptr, *b_ = nullptr, *v_ = nullptr;
};

}  // namespace satt

#endif  // SATT_HEADS_LAYERS_H_
