// satt/heads/mlp.h

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

#ifndef SATT_HEADS_MLP_H_
#define SATT_HEADS_MLP_H_

#include "satt/heads/head.h"
#include "satt/heads/layers.h"

namespace satt {

/// D -> 128 -> 64 -> out, ReLU and dropout after each hidden layer.
template <typename T>
class MlpHead : public Head<T> {
 public:
  static constexpr int kHidden1 = 128;
  static constexpr int kHidden2 = 64;

  MlpHead(int input_dim, int output_dim, double dropout, std::uint64_t seed);

  Matrix<T> Forward(const HeadInput<T> &in, bool training, std::mt19937_64 *rng) override;
  void Backward(const Matrix<T> &grad_out) override;
  ArchitectureSummary Summary() const override { return {3, 0, {kHidden1, kHidden2}}; }

 private:
  int input_dim_;
  double dropout_;
  Linear<T> fc1_, fc2_, out_;
  Matrix<T> relu1_, relu2_, mask1_, mask2_;
};

}  // namespace satt

#endif  // SATT_HEADS_MLP_H_
