// heads/resnet.cc

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

#include "satt/heads/resnet.h"

#include <cmath>
#include <tuple>

namespace satt {

std::pair<int, int> SquarestFactorization(int dim) {
  if (dim <= 0) throw Error("cannot factor a non-positive dimension");
  int h = static_cast<int>(std::sqrt(static_cast<double>(dim)));
  while (h > 1 && dim % h != 0) --h;
  return {h, dim / h};
}

template <typename T>
ResidualBlock<T>::ResidualBlock(ParameterSet<T> &params, const std::string &name,
                                int in_channels, int out_channels, int height, int width,
                                int stride) {
  ConvGeometry g1{in_channels, height, width, out_channels, 3, stride, 1};
  conv1_ = Conv2d<T>(params, name + ".conv1", g1);
  const int spatial = g1.out_height() * g1.out_width();
  bn1_ = BatchNorm2d<T>(params, name + ".bn1", out_channels, spatial);
  ConvGeometry g2{out_channels, g1.out_height(), g1.out_width(), out_channels, 3, 1, 1};
  conv2_ = Conv2d<T>(params, name + ".conv2", g2);
  bn2_ = BatchNorm2d<T>(params, name + ".bn2", out_channels, spatial);
  if (stride != 1 || in_channels != out_channels) {
    ConvGeometry gp{in_channels, height, width, out_channels, 1, stride, 0};
    proj_ = std::make_unique<Conv2d<T>>(params, name + ".proj", gp);
    proj_bn_ = std::make_unique<BatchNorm2d<T>>(params, name + ".proj_bn", out_channels, spatial);
  }
}

template <typename T>
void ResidualBlock<T>::Init(std::mt19937_64 &rng) {
  conv1_.Init(rng);
  bn1_.Init();
  conv2_.Init(rng);
  bn2_.Init();
  if (proj_) {
    proj_->Init(rng);
    proj_bn_->Init();
  }
}

template <typename T>
std::vector<Tensor<T> *> ResidualBlock<T>::BranchTensors() const {
  return {conv1_.weight(), bn1_.gamma(), bn1_.beta(),
          conv2_.weight(), bn2_.gamma(), bn2_.beta()};
}

template <typename T>
Matrix<T> ResidualBlock<T>::Forward(const Matrix<T> &x, bool training) {
  Matrix<T> h = bn1_.Forward(conv1_.Forward(x, training), training).cwiseMax(T(0));
  if (training) relu1_ = h;
  h = bn2_.Forward(conv2_.Forward(h, training), training);
  if (proj_) h += proj_bn_->Forward(proj_->Forward(x, training), training);
  else h += x;
  h = h.cwiseMax(T(0));
  if (training) out_ = h;
  return h;
}

template <typename T>
Matrix<T> ResidualBlock<T>::Backward(const Matrix<T> &dy) {
  Matrix<T> g = (out_.array() > T(0)).select(dy, T(0));
  Matrix<T> dx = proj_ ? proj_->Backward(proj_bn_->Backward(g)) : g;
  Matrix<T> b = conv2_.Backward(bn2_.Backward(g));
  b = (relu1_.array() > T(0)).select(b, T(0));
  dx += conv1_.Backward(bn1_.Backward(b));
  return dx;
}

template <typename T>
ResNetHead<T>::ResNetHead(int input_dim, int output_dim, int blocks_per_stage,
                          int map_height, int map_width, std::uint64_t seed)
    : input_dim_(input_dim), blocks_per_stage_(blocks_per_stage) {
  if (blocks_per_stage < 1) throw Error("ResNet needs at least one block per stage");
  if (map_height == 0 && map_width == 0) {
    std::tie(map_height, map_width) = SquarestFactorization(input_dim);
  }
  if (map_height <= 0 || map_width <= 0 || map_height * map_width != input_dim)
    throw Error("input dimension " + std::to_string(input_dim) +
                " does not factor into a " + std::to_string(map_height) + "x" +
                std::to_string(map_width) + " map");
  map_h_ = map_height;
  map_w_ = map_width;

  ParameterSet<T> &p = this->params_;
  ConvGeometry stem{1, map_h_, map_w_, kStageWidths[0], 3, 1, 1};
  stem_ = Conv2d<T>(p, "stem.conv", stem);
  stem_bn_ = BatchNorm2d<T>(p, "stem.bn", kStageWidths[0], map_h_ * map_w_);
  int channels = kStageWidths[0], h = map_h_, w = map_w_;
  for (int s = 0; s < 3; ++s) {
    for (int b = 0; b < blocks_per_stage; ++b) {
      const int stride = (s > 0 && b == 0) ? 2 : 1;
      auto block = std::make_unique<ResidualBlock<T>>(
          p, "stage" + std::to_string(s + 1) + ".block" + std::to_string(b + 1), channels,
          kStageWidths[s], h, w, stride);
      channels = kStageWidths[s];
      h = block->out_height();
      w = block->out_width();
      blocks_.push_back(std::move(block));
    }
  }
  final_spatial_ = h * w;
  out_ = Linear<T>(p, "out", kStageWidths[2], output_dim);

  std::mt19937_64 rng(seed);
  stem_.Init(rng);
  stem_bn_.Init();
  for (auto &block : blocks_) block->Init(rng);
  out_.Init(rng);
}

template <typename T>
Matrix<T> ResNetHead<T>::Forward(const HeadInput<T> &in, bool training, std::mt19937_64 *) {
  if (in.kind != InputKind::kPooled || in.pooled.cols() != input_dim_)
    throw Error("ResNet32 expects pooled inputs of width " + std::to_string(input_dim_));
  // A B x D row is already the B x (1*H*W) single-channel map.
  Matrix<T> x = stem_bn_.Forward(stem_.Forward(in.pooled, training), training).cwiseMax(T(0));
  if (training) stem_relu_ = x;
  for (auto &block : blocks_) x = block->Forward(x, training);
  const int c = kStageWidths[2];
  Matrix<T> pooled(x.rows(), c);
  for (int k = 0; k < c; ++k)
    pooled.col(k) = x.middleCols(Eigen::Index(k) * final_spatial_, final_spatial_)
                        .rowwise()
                        .mean();
  return out_.Forward(pooled, training);
}

template <typename T>
void ResNetHead<T>::Backward(const Matrix<T> &grad_out) {
  Matrix<T> dpool = out_.Backward(grad_out);
  const int c = kStageWidths[2];
  Matrix<T> g(dpool.rows(), Eigen::Index(c) * final_spatial_);
  for (int k = 0; k < c; ++k)
    for (int s = 0; s < final_spatial_; ++s)
      g.col(Eigen::Index(k) * final_spatial_ + s) = dpool.col(k) / T(final_spatial_);
  for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it) g = (*it)->Backward(g);
  g = (stem_relu_.array() > T(0)).select(g, T(0));
  stem_.Backward(stem_bn_.Backward(g));
}

template <typename T>
ArchitectureSummary ResNetHead<T>::Summary() const {
  ArchitectureSummary s;
  s.residual_blocks = static_cast<int>(blocks_.size());
  s.depth = 1 + 2 * s.residual_blocks + 1;
  s.stage_widths = {kStageWidths[0], kStageWidths[1], kStageWidths[2]};
  return s;
}

template class ResidualBlock<float>;
template class ResidualBlock<double>;
template class ResNetHead<float>;
template class ResNetHead<double>;

}  // namespace satt
