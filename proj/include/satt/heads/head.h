// satt/heads/head.h

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

#ifndef SATT_HEADS_HEAD_H_
#define SATT_HEADS_HEAD_H_

#include <random>
#include <string_view>
#include <vector>

#include "satt/common.h"
#include "satt/heads/tensor.h"

namespace satt {

enum class Architecture { kMlp, kResNet32, kBiLstm };
enum class TaskKind { kRegression, kClassification };
enum class InputKind { kPooled, kSequence };

std::string_view ArchitectureName(Architecture arch);
/// Accepts "mlp", "resnet32", "bilstm" and the alias "lstm".
Architecture ParseArchitecture(std::string_view name);
/// Input routing: MLP and ResNet32 read pooled vectors, the BiLSTM frames.
InputKind InputKindFor(Architecture arch);

struct TaskSpec {
  Attribute attribute = Attribute::kGender;
  TaskKind kind = TaskKind::kClassification;
  int num_classes = 2;  // classification only
  InputKind input_kind = InputKind::kPooled;

  int OutputWidth() const { return kind == TaskKind::kRegression ? 1 : num_classes; }
  void Validate() const;
};

/// Architecture hyperparameters.  Zero map sizes mean "pick the most square
/// factorization of the input dimension".
struct HeadConfig {
  double mlp_dropout = 0.3;
  int lstm_hidden = 128;
  double lstm_dropout = 0.2;
  int resnet_blocks = 5;
  int map_height = 0;
  int map_width = 0;
};

/// A batch.  `pooled` is B x D; `sequences` holds B matrices of T_i x D.
template <typename T>
struct HeadInput {
  InputKind kind = InputKind::kPooled;
  Matrix<T> pooled;
  std::vector<Matrix<T>> sequences;

  int batch_size() const {
    return kind == InputKind::kPooled ? static_cast<int>(pooled.rows())
                                      : static_cast<int>(sequences.size());
  }
};

struct ArchitectureSummary {
  int depth = 0;            // weighted layers on the main path
  int residual_blocks = 0;
  std::vector<int> stage_widths;
};

template <typename T>
class Head {
 public:
  virtual ~Head() = default;
  /// B x OutputWidth outputs.  Training mode caches activations for
  /// Backward() and draws dropout masks from `rng` (required when training).
  virtual Matrix<T> Forward(const HeadInput<T> &in, bool training, std::mt19937_64 *rng) = 0;
  /// Accumulates parameter gradients for the last training-mode Forward().
  virtual void Backward(const Matrix<T> &grad_out) = 0;
  virtual ArchitectureSummary Summary() const = 0;

  ParameterSet<T> &params() { return params_; }
  const ParameterSet<T> &params() const { return params_; }

 protected:
  ParameterSet<T> params_;
};

}  // namespace satt

#endif  // SATT_HEADS_HEAD_H_
