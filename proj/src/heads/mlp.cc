// heads/mlp.cc

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

#include "satt/heads/mlp.h"

namespace satt {

template <typename T>
MlpHead<T>::MlpHead(int input_dim, int output_dim, double dropout, std::uint64_t seed)
    : input_dim_(input_dim), dropout_(dropout) {
  fc1_ = Linear<T>(this->params_, "fc1", input_dim, kHidden1);
  fc2_ = Linear<T>(this->params_, "fc2", kHidden1, kHidden2);
  out_ = Linear<T>(this->params_, "out", kHidden2, output_dim);
  std::mt19937_64 rng(seed);
  fc1_.Init(rng);
  fc2_.Init(rng);
  out_.Init(rng);
}

template <typename T>
Matrix<T> MlpHead<T>::Forward(const HeadInput<T> &in, bool training, std::mt19937_64 *rng) {
  if (in.kind != InputKind::kPooled || in.pooled.cols() != input_dim_)
    throw Error("MLP expects pooled inputs of width " + std::to_string(input_dim_));
  const bool drop = training && dropout_ > 0;
  if (drop && !rng) throw Error("training-mode forward needs a random generator");
  Matrix<T> h = fc1_.Forward(in.pooled, training).cwiseMax(T(0));
  if (training) relu1_ = h;
  if (drop) {
    mask1_ = DropoutMask<T>(h.rows(), h.cols(), dropout_, *rng);
    h = h.cwiseProduct(mask1_);
  }
  h = fc2_.Forward(h, training).cwiseMax(T(0));
  if (training) relu2_ = h;
  if (drop) {
    mask2_ = DropoutMask<T>(h.rows(), h.cols(), dropout_, *rng);
    h = h.cwiseProduct(mask2_);
  }
  return out_.Forward(h, training);
}

template <typename T>
void MlpHead<T>::Backward(const Matrix<T> &grad_out) {
  const bool drop = dropout_ > 0 && mask1_.size() > 0;
  Matrix<T> g = out_.Backward(grad_out);
  if (drop) g = g.cwiseProduct(mask2_);
  g = (relu2_.array() > T(0)).select(g, T(0));
  g = fc2_.Backward(g);
  if (drop) g = g.cwiseProduct(mask1_);
  g = (relu1_.array() > T(0)).select(g, T(0));
  fc1_.Backward(g);
}

template class MlpHead<float>;
template class MlpHead<double>;

}  // namespace satt
