// satt/heads/tensor.h

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

#ifndef SATT_HEADS_TENSOR_H_
#define SATT_HEADS_TENSOR_H_

#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "satt/common.h"

namespace satt {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <typename T>
using RowVector = Eigen::Matrix<T, 1, Eigen::Dynamic>;
template <typename T>
using MatrixMap = Eigen::Map<Matrix<T>>;
template <typename T>
using ConstMatrixMap = Eigen::Map<const Matrix<T>>;

/// A named parameter (or non-trainable buffer) with its gradient.  Values are
/// stored flat, row-major; shape[0] is the row count when viewed as a matrix.
template <typename T>
struct Tensor {
  std::string name;
  std::vector<int> shape;
  std::vector<T> value;
  std::vector<T> grad;
  bool trainable = true;

  std::size_t size() const { return value.size(); }
  int rows() const { return shape.empty() ? 1 : shape[0]; }
  int cols() const { return rows() == 0 ? 0 : static_cast<int>(size() / rows()); }
  MatrixMap<T> Mat() { return MatrixMap<T>(value.data(), rows(), cols()); }
  ConstMatrixMap<T> Mat() const { return ConstMatrixMap<T>(value.data(), rows(), cols()); }
  MatrixMap<T> GradMat() { return MatrixMap<T>(grad.data(), rows(), cols()); }
  Eigen::Map<Vector<T>> Vec() { return Eigen::Map<Vector<T>>(value.data(), size()); }
  Eigen::Map<const Vector<T>> Vec() const {
    return Eigen::Map<const Vector<T>>(value.data(), size());
  }
  Eigen::Map<Vector<T>> GradVec() { return Eigen::Map<Vector<T>>(grad.data(), size()); }
};

/// Ordered collection of tensors.  Enumeration order is creation order and is
/// the order used for initialization, optimizer state and checkpoints.
/// Element addresses are stable, so layers keep raw pointers into it.
template <typename T>
class ParameterSet {
 public:
  ParameterSet() = default;
  ParameterSet(const ParameterSet &) = delete;
  ParameterSet &operator=(const ParameterSet &) = delete;

  Tensor<T> *Add(const std::string &name, std::vector<int> shape, bool trainable = true) {
    for (const Tensor<T> &t : tensors_)
      if (t.name == name) throw Error("duplicate parameter name " + name);
    std::size_t n = 1;
    for (int d : shape) n *= static_cast<std::size_t>(d);
    Tensor<T> &t = tensors_.emplace_back();
    t.name = name;
    t.shape = std::move(shape);
    t.value.assign(n, T(0));
    t.grad.assign(trainable ? n : 0, T(0));
    t.trainable = trainable;
    return &t;
  }

  std::deque<Tensor<T>> &tensors() { return tensors_; }
  const std::deque<Tensor<T>> &tensors() const { return tensors_; }

  const Tensor<T> *Find(const std::string &name) const {
    for (const Tensor<T> &t : tensors_)
      if (t.name == name) return &t;
    return nullptr;
  }
  Tensor<T> *Find(const std::string &name) {
    return const_cast<Tensor<T> *>(std::as_const(*this).Find(name));
  }

  /// Scalar count of trainable parameters.
  std::size_t NumParameters() const {
    std::size_t n = 0;
    for (const Tensor<T> &t : tensors_)
      if (t.trainable) n += t.size();
    return n;
  }

  void ZeroGrad() {
    for (Tensor<T> &t : tensors_) std::fill(t.grad.begin(), t.grad.end(), T(0));
  }

  bool AllFinite() const {
    for (const Tensor<T> &t : tensors_)
      for (T v : t.value)
        if (!std::isfinite(v)) return false;
    return true;
  }

  std::vector<std::vector<T>> Snapshot() const {
    std::vector<std::vector<T>> out;
    for (const Tensor<T> &t : tensors_) out.push_back(t.value);
    return out;
  }

  void Restore(const std::vector<std::vector<T>> &values) {
    if (values.size() != tensors_.size()) throw Error("parameter snapshot size mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i].size() != tensors_[i].size())
        throw Error("parameter snapshot shape mismatch for " + tensors_[i].name);
      tensors_[i].value = values[i];
    }
  }

 private:
  std::deque<Tensor<T>> tensors_;
};

/// U(-1/sqrt(fan_in), 1/sqrt(fan_in)) fill.
template <typename T>
void InitFanInUniform(Tensor<T> *t, int fan_in, std::mt19937_64 &rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (T &v : t->value) v = static_cast<T>(dist(rng));
}

}  // namespace satt

#endif  // SATT_HEADS_TENSOR_H_
