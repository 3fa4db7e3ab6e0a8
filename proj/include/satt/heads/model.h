// satt/heads/model.h

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

#ifndef SATT_HEADS_MODEL_H_
#define SATT_HEADS_MODEL_H_

#include <cstdint>
#include <memory>

#include "satt/heads/head.h"

namespace satt {

/// A built head together with the description needed to rebuild it.
template <typename T>
class Model {
 public:
  Model(Architecture arch, int input_dim, const TaskSpec &task, const HeadConfig &hyper,
        std::unique_ptr<Head<T>> head);

  Architecture architecture() const { return arch_; }
  int input_dim() const { return input_dim_; }
  const TaskSpec &task() const { return task_; }
  const HeadConfig &hyper() const { return hyper_; }
  Head<T> &head() { return *head_; }
  const Head<T> &head() const { return *head_; }
  ParameterSet<T> &params() { return head_->params(); }
  const ParameterSet<T> &params() const { return head_->params(); }

  /// Checks the input kind and width, then runs the head.  Evaluation mode
  /// ignores `rng`.
  Matrix<T> Forward(const HeadInput<T> &in, bool training = false,
                    std::mt19937_64 *rng = nullptr);
  void Backward(const Matrix<T> &grad_out) { head_->Backward(grad_out); }

 private:
  Architecture arch_;
  int input_dim_;
  TaskSpec task_;
  HeadConfig hyper_;
  std::unique_ptr<Head<T>> head_;
};

template <typename T>
Model<T> BuildMlp(int input_dim, const TaskSpec &task, double dropout, std::uint64_t seed);
/// `hyper.resnet_blocks` blocks per stage over a map_height x map_width map
/// (squarest factorization of input_dim when either is 0).
template <typename T>
Model<T> BuildResNet32(int input_dim, const TaskSpec &task, const HeadConfig &hyper,
                       std::uint64_t seed);
template <typename T>
Model<T> BuildBiLstm(int input_dim, const TaskSpec &task, int hidden, double dropout,
                     std::uint64_t seed);
/// Dispatches on `arch`; the task's input kind must match the architecture.
template <typename T>
Model<T> BuildModel(Architecture arch, int input_dim, const TaskSpec &task,
                    const HeadConfig &hyper, std::uint64_t seed);

template <typename T>
std::size_t ParamCount(const Model<T> &model) {
  return model.params().NumParameters();
}

}  // namespace satt

#endif  // SATT_HEADS_MODEL_H_
