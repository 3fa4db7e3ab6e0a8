// satt/trainer.h

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

#ifndef SATT_TRAINER_H_
#define SATT_TRAINER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "satt/checkpoint.h"
#include "satt/corpus.h"
#include "satt/embed_store.h"
#include "satt/heads/model.h"
#include "satt/loss.h"
#include "satt/metrics.h"

namespace satt {

enum class OptimizerKind { kAdam, kSgd };
enum class ClassWeighting { kNone, kInverseFrequency };

struct TrainConfig {
  int max_epochs = 200;
  int batch_size = 64;
  double initial_lr = 1e-3;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  int early_stop_patience = 20;
  int plateau_patience = 5;
  double plateau_factor = 0.5;
  double min_lr = 1e-6;
  double improvement_tolerance = 1e-8;
  ClassWeighting class_weighting = ClassWeighting::kInverseFrequency;
  std::uint64_t seed = 0;

  void Validate() const;
  /// Field names and values, in declaration order.
  std::vector<std::pair<std::string, std::string>> ToKeyValues() const;
  /// Sets a field by name.  Returns false for unknown keys; throws on a bad value.
  bool Set(const std::string &key, const std::string &value);
};

/// Adam (bias-corrected, moments held in double) or plain SGD over the
/// trainable tensors of `params`, which must outlive the optimizer.
class Optimizer {
 public:
  Optimizer(ParameterSet<float> &params, const TrainConfig &cfg);
  /// Applies the accumulated gradients.
  void Step(double lr);

 private:
  ParameterSet<float> &params_;
  TrainConfig cfg_;
  std::vector<std::vector<double>> m_, v_;
  long step_ = 0;
};

/// z-score of age with constants taken from the training split.
struct AgeNormalizer {
  double mean = 0;
  double stddev = 1;

  /// Population statistics; a zero spread falls back to 1.
  static AgeNormalizer Fit(const std::vector<double> &ages);
  double Normalize(double age) const { return (age - mean) / stddev; }
  double Denormalize(double z) const { return z * stddev + mean; }
};

/// Inputs and targets of one split for one task.
struct TaskData {
  TaskSpec task;
  std::vector<std::string> segment_ids;
  std::vector<double> ages;   // years, regression tasks
  std::vector<int> labels;    // class indices, classification tasks
  Matrix<float> pooled;       // N x D, pooled tasks
  const StoreSet *store = nullptr;  // frame source, sequence tasks

  std::size_t size() const { return segment_ids.size(); }
  HeadInput<float> Batch(const std::vector<int> &rows) const;
};

/// Records carrying `attribute`, in input order.
std::vector<SegmentRecord> WithAttribute(const std::vector<SegmentRecord> &records,
                                         Attribute attribute);

/// Throws when a record lacks the attribute, a label falls outside `space`
/// (classification) or a segment is missing from `store`.
TaskData BuildTaskData(const std::vector<SegmentRecord> &records, const StoreSet &store,
                       const TaskSpec &task, const LabelSpace *space);

/// w_k = N / (K * n_k); classes absent from `labels` get 0.
std::vector<double> InverseFrequencyWeights(const std::vector<int> &labels, int num_classes);

/// Batch targets: normalized ages or class indices.
struct BatchTargets {
  std::vector<double> values;
  std::vector<int> classes;
};

/// Zeroes the gradients, runs a training-mode forward and backward pass and
/// returns the batch loss (L1 for regression, weighted cross-entropy for
/// classification).
template <typename T>
T ComputeGradient(Model<T> &model, const HeadInput<T> &in, const BatchTargets &targets,
                  const std::vector<double> &class_weights, std::mt19937_64 *rng) {
  model.params().ZeroGrad();
  Matrix<T> out = model.Forward(in, true, rng);
  Matrix<T> grad;
  T loss;
  if (model.task().kind == TaskKind::kRegression) {
    std::vector<T> y(targets.values.begin(), targets.values.end());
    loss = L1Loss<T>(out, y, &grad);
  } else {
    loss = CrossEntropyLoss<T>(out, targets.classes, class_weights, &grad);
  }
  model.Backward(grad);
  return loss;
}

/// Evaluation-mode predictions; regression outputs are denormalized to years.
PredictionSet Predict(Model<float> &model, const TaskData &data, const AgeNormalizer &norm,
                      int batch_size = 256);

/// MAE in years for regression, 1 - macro-F1 for classification.
double ValidationMetric(Model<float> &model, const TaskData &data, const AgeNormalizer &norm);

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0;
  double val_metric = 0;
  double lr = 0;
  double seconds = 0;
};

enum class StopReason { kEarlyStop, kMaxEpochs };
std::string_view StopReasonName(StopReason reason);

struct TrainLog {
  std::vector<EpochRecord> epochs;
  StopReason stop_reason = StopReason::kMaxEpochs;
  int best_epoch = 0;
  double best_val_metric = 0;

  /// "epoch,train_loss,val_metric,lr,seconds" rows.
  std::string ToCsv() const;
  void Write(const std::filesystem::path &path) const;
};

struct TrainHooks {
  /// Replaces the measured validation metric of an epoch (epoch, measured).
  std::function<double(int, double)> val_metric;
  /// Called after every epoch, once its record is complete.
  std::function<void(const EpochRecord &)> on_epoch;
};

struct TrainOutcome {
  Checkpoint checkpoint;
  TrainLog log;
};

/// Trains `model` in place and leaves it holding the best-validation
/// parameters, which the returned checkpoint also carries.  Shuffling and
/// dropout draw from cfg.seed.  Throws on empty splits and on a non-finite
/// loss, naming the epoch and batch.
TrainOutcome Train(Model<float> &model, const TaskData &train, const TaskData &val,
                   const LabelSpace *space, const TrainConfig &cfg, const TrainHooks &hooks = {});

}  // namespace satt

#endif  // SATT_TRAINER_H_
