// satt/heads/resnet.h

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

#ifndef SATT_HEADS_RESNET_H_
#define SATT_HEADS_RESNET_H_

#include <memory>
#include <utility>
#include <vector>

#include "satt/heads/head.h"
#include "satt/heads/layers.h"

namespace satt {

/// Most square H x W factorization of `dim` with H <= W (768 -> 24 x 32).
std::pair<int, int> SquarestFactorization(int dim);

/// conv3x3-BN-ReLU-conv3x3-BN plus skip, then ReLU.  The skip is the identity
/// or, when the block changes shape, a strided 1x1 convolution with BN.
template <typename T>
class ResidualBlock {
 public:
  ResidualBlock(ParameterSet<T> &params, const std::string &name, int in_channels,
                int out_channels, int height, int width, int stride);
  void Init(std::mt19937_64 &rng);

  Matrix<T> Forward(const Matrix<T> &x, bool training);
  Matrix<T> Backward(const Matrix<T> &dy);

  bool has_projection() const { return proj_ != nullptr; }
  int out_height() const { return conv1_.geometry().out_height(); }
  int out_width() const { return conv1_.geometry().out_width(); }
  /// Tensors of the residual branch (both convolutions and their BNs).
  std::vector<Tensor<T> *> BranchTensors() const;

 private:
  Conv2d<T> conv1_, conv2_;
  BatchNorm2d<T> bn1_, bn2_;
  std::unique_ptr<Conv2d<T>> proj_;
  std::unique_ptr<BatchNorm2d<T>> proj_bn_;
  Matrix<T> relu1_, out_;
};

/// CIFAR-style ResNet over the pooled vector reshaped to a 1 x H x W map:
/// 3x3 stem to 16 channels, three stages of `blocks` residual blocks with
/// widths 16/32/64 (stages 2 and 3 open with stride 2), global average
/// pooling and a linear output layer.  With 5 blocks per stage the main path
/// has 1 + 30 convolutions + 1 output layer = 32 weighted layers.
template <typename T>
class ResNetHead : public Head<T> {
 public:
  static constexpr int kStageWidths[3] = {16, 32, 64};

  ResNetHead(int input_dim, int output_dim, int blocks_per_stage, int map_height,
             int map_width, std::uint64_t seed);

  Matrix<T> Forward(const HeadInput<T> &in, bool training, std::mt19937_64 *rng) override;
  void Backward(const Matrix<T> &grad_out) override;
  ArchitectureSummary Summary() const override;

  std::vector<std::unique_ptr<ResidualBlock<T>>> &blocks() { return blocks_; }
  int map_height() const { return map_h_; }
  int map_width() const { return map_w_; }

 private:
  int input_dim_, map_h_, map_w_, blocks_per_stage_;
  Conv2d<T> stem_;
  BatchNorm2d<T> stem_bn_;
  std::vector<std::unique_ptr<ResidualBlock<T>>> blocks_;
  Linear<T> out_;
  Matrix<T> stem_relu_;
  int final_spatial_ = 1;
};

}  // namespace satt

#endif  // SATT_HEADS_RESNET_H_
