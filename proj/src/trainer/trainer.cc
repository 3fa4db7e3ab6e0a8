// trainer/trainer.cc

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

#include "satt/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "satt/schedule.h"

namespace satt {

namespace {

int ToInt(const std::string &key, const std::string &value) {
  auto v = ParseInt(TrimView(value));
  if (!v || *v < std::numeric_limits<int>::min() || *v > std::numeric_limits<int>::max())
    throw Error("config key '" + key + "': expected an integer, got '" + value + "'");
  return static_cast<int>(*v);
}

double ToDouble(const std::string &key, const std::string &value) {
  auto v = ParseDouble(TrimView(value));
  if (!v) throw Error("config key '" + key + "': expected a number, got '" + value + "'");
  return *v;
}

void CheckData(const Model<float> &model, const TaskData &data, const char *what) {
  if (data.size() == 0) throw Error(std::string("empty ") + what + " set");
  const TaskSpec &a = model.task(), &b = data.task;
  if (a.attribute != b.attribute || a.kind != b.kind || a.input_kind != b.input_kind ||
      a.OutputWidth() != b.OutputWidth())
    throw Error(std::string(what) + " data was built for a different task");
}

}  // namespace

Optimizer::Optimizer(ParameterSet<float> &params, const TrainConfig &cfg)
    : params_(params), cfg_(cfg) {
  if (cfg.optimizer == OptimizerKind::kAdam)
    for (const Tensor<float> &t : params.tensors()) {
      m_.emplace_back(t.trainable ? t.size() : 0, 0.0);
      v_.emplace_back(t.trainable ? t.size() : 0, 0.0);
    }
}

void Optimizer::Step(double lr) {
  ++step_;
  const bool adam = cfg_.optimizer == OptimizerKind::kAdam;
  const double b1 = cfg_.adam_beta1, b2 = cfg_.adam_beta2;
  const double c1 = 1 - std::pow(b1, double(step_)), c2 = 1 - std::pow(b2, double(step_));
  std::size_t k = 0;
  for (Tensor<float> &t : params_.tensors()) {
    if (!t.trainable) {
      ++k;
      continue;
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double g = t.grad[i];
      if (!adam) {
        t.value[i] = static_cast<float>(t.value[i] - lr * g);
        continue;
      }
      double &m = m_[k][i], &v = v_[k][i];
      m = b1 * m + (1 - b1) * g;
      v = b2 * v + (1 - b2) * g * g;
      const double update = lr * (m / c1) / (std::sqrt(v / c2) + cfg_.adam_eps);
      t.value[i] = static_cast<float>(t.value[i] - update);
    }
    ++k;
  }
}


void TrainConfig::Validate() const {
  if (max_epochs < 1) throw Error("max_epochs must be >= 1");
  if (batch_size < 1) throw Error("batch_size must be >= 1");
  if (!(initial_lr > 0)) throw Error("initial_lr must be positive");
  if (!(min_lr > 0)) throw Error("min_lr must be positive");
  if (early_stop_patience < 1 || plateau_patience < 1) throw Error("patience values must be >= 1");
  if (!(plateau_factor > 0 && plateau_factor < 1))
    throw Error("plateau_factor must lie strictly between 0 and 1");
  if (!(adam_beta1 >= 0 && adam_beta1 < 1 && adam_beta2 >= 0 && adam_beta2 < 1))
    throw Error("Adam betas must lie in [0, 1)");
  if (!(adam_eps > 0)) throw Error("adam_eps must be positive");
  if (!(improvement_tolerance >= 0)) throw Error("improvement_tolerance must be >= 0");
}

std::vector<std::pair<std::string, std::string>> TrainConfig::ToKeyValues() const {
  return {
      {"max_epochs", std::to_string(max_epochs)},
      {"batch_size", std::to_string(batch_size)},
      {"initial_lr", FormatDouble(initial_lr)},
      {"optimizer", optimizer == OptimizerKind::kAdam ? "adam" : "sgd"},
      {"adam_beta1", FormatDouble(adam_beta1)},
      {"adam_beta2", FormatDouble(adam_beta2)},
      {"adam_eps", FormatDouble(adam_eps)},
      {"early_stop_patience", std::to_string(early_stop_patience)},
      {"plateau_patience", std::to_string(plateau_patience)},
      {"plateau_factor", FormatDouble(plateau_factor)},
      {"min_lr", FormatDouble(min_lr)},
      {"improvement_tolerance", FormatDouble(improvement_tolerance)},
      {"class_weighting",
       class_weighting == ClassWeighting::kNone ? "none" : "inverse_frequency"},
      {"seed", std::to_string(seed)},
  };
}

bool TrainConfig::Set(const std::string &key, const std::string &value) {
  if (key == "max_epochs") max_epochs = ToInt(key, value);
  else if (key == "batch_size") batch_size = ToInt(key, value);
  else if (key == "initial_lr" || key == "lr") initial_lr = ToDouble(key, value);
  else if (key == "optimizer") {
    const std::string v = ToLower(TrimView(value));
    if (v == "adam") optimizer = OptimizerKind::kAdam;
    else if (v == "sgd") optimizer = OptimizerKind::kSgd;
    else throw Error("config key 'optimizer': expected adam or sgd, got '" + value + "'");
  } else if (key == "adam_beta1") adam_beta1 = ToDouble(key, value);
  else if (key == "adam_beta2") adam_beta2 = ToDouble(key, value);
  else if (key == "adam_eps") adam_eps = ToDouble(key, value);
  else if (key == "early_stop_patience") early_stop_patience = ToInt(key, value);
  else if (key == "plateau_patience") plateau_patience = ToInt(key, value);
  else if (key == "plateau_factor") plateau_factor = ToDouble(key, value);
  else if (key == "min_lr") min_lr = ToDouble(key, value);
  else if (key == "improvement_tolerance") improvement_tolerance = ToDouble(key, value);
  else if (key == "class_weighting") {
    const std::string v = ToLower(TrimView(value));
    if (v == "none") class_weighting = ClassWeighting::kNone;
    else if (v == "inverse_frequency") class_weighting = ClassWeighting::kInverseFrequency;
    else throw Error("config key 'class_weighting': expected none or inverse_frequency");
  } else if (key == "seed") {
    auto v = ParseUint(TrimView(value));
    if (!v) throw Error("config key 'seed': expected an unsigned integer");
    seed = *v;
  } else {
    return false;
  }
  return true;
}

AgeNormalizer AgeNormalizer::Fit(const std::vector<double> &ages) {
  if (ages.empty()) throw Error("cannot fit age normalization on no ages");
  double mean = 0;
  for (double a : ages) mean += a;
  mean /= double(ages.size());
  double var = 0;
  for (double a : ages) var += (a - mean) * (a - mean);
  var /= double(ages.size());
  const double sd = std::sqrt(var);
  return {mean, sd > 0 ? sd : 1.0};
}

HeadInput<float> TaskData::Batch(const std::vector<int> &rows) const {
  HeadInput<float> in;
  in.kind = task.input_kind;
  if (in.kind == InputKind::kPooled) {
    in.pooled.resize(static_cast<Eigen::Index>(rows.size()), pooled.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) in.pooled.row(i) = pooled.row(rows[i]);
  } else {
    if (!store) throw Error("sequence task data without an embedding store");
    in.sequences.reserve(rows.size());
    for (int r : rows) in.sequences.push_back(store->GetSequence(segment_ids[r]).frames);
  }
  return in;
}

std::vector<SegmentRecord> WithAttribute(const std::vector<SegmentRecord> &records,
                                         Attribute attribute) {
  std::vector<SegmentRecord> out;
  for (const SegmentRecord &r : records)
    if (IsCategorical(attribute) ? CanonicalRecordLabel(r, attribute).has_value()
                                 : r.Has(attribute))
      out.push_back(r);
  return out;
}

TaskData BuildTaskData(const std::vector<SegmentRecord> &records, const StoreSet &store,
                       const TaskSpec &task, const LabelSpace *space) {
  task.Validate();
  if (task.kind == TaskKind::kClassification) {
    if (!space) throw Error("classification data needs a label space");
    if (space->attribute() != task.attribute || space->size() != task.num_classes)
      throw Error("label space does not match the task");
  }
  TaskData d;
  d.task = task;
  if (task.input_kind == InputKind::kPooled) d.pooled.resize(records.size(), store.dim());
  else d.store = &store;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const SegmentRecord &r = records[i];
    if (task.kind == TaskKind::kRegression) {
      if (!r.age) throw Error("segment '" + r.segment_id + "' has no age label");
      d.ages.push_back(*r.age);
    } else {
      auto k = space->IndexOf(r);
      if (!k)
        throw Error("segment '" + r.segment_id + "' has no " +
                    std::string(AttributeName(task.attribute)) + " label in the label space");
      d.labels.push_back(*k);
    }
    if (task.input_kind == InputKind::kPooled) {
      d.pooled.row(i) = store.GetPooled(r.segment_id).transpose();
    } else if (!store.Find(r.segment_id)) {
      throw Error("missing embeddings for segment '" + r.segment_id + "'");
    }
    d.segment_ids.push_back(r.segment_id);
  }
  return d;
}

std::vector<double> InverseFrequencyWeights(const std::vector<int> &labels, int num_classes) {
  std::vector<double> counts(num_classes, 0.0), w(num_classes, 0.0);
  for (int y : labels) {
    if (y < 0 || y >= num_classes) throw Error("label out of range");
    counts[y] += 1;
  }
  for (int k = 0; k < num_classes; ++k)
    if (counts[k] > 0) w[k] = double(labels.size()) / (double(num_classes) * counts[k]);
  return w;
}

PredictionSet Predict(Model<float> &model, const TaskData &data, const AgeNormalizer &norm,
                      int batch_size) {
  PredictionSet p;
  p.attribute = data.task.attribute;
  p.kind = data.task.kind == TaskKind::kRegression ? PredictionKind::kRegression
                                                   : PredictionKind::kClassification;
  const int n = static_cast<int>(data.size());
  for (int start = 0; start < n; start += batch_size) {
    std::vector<int> rows(std::min(batch_size, n - start));
    std::iota(rows.begin(), rows.end(), start);
    Matrix<float> out = model.Forward(data.Batch(rows), false, nullptr);
    if (p.kind == PredictionKind::kRegression) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        p.y.push_back(data.ages[rows[i]]);
        p.y_hat.push_back(norm.Denormalize(out(i, 0)));
      }
    } else {
      std::vector<int> arg = ArgmaxRows(out);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        p.y.push_back(data.labels[rows[i]]);
        p.y_hat.push_back(arg[i]);
      }
    }
  }
  return p;
}

double ValidationMetric(Model<float> &model, const TaskData &data, const AgeNormalizer &norm) {
  PredictionSet p = Predict(model, data, norm);
  if (p.kind == PredictionKind::kRegression) return Mae(p);
  return 1.0 - MacroF1(p, data.task.num_classes);
}

std::string_view StopReasonName(StopReason reason) {
  return reason == StopReason::kEarlyStop ? "early_stop" : "max_epochs";
}

std::string TrainLog::ToCsv() const {
  std::ostringstream out;
  out << "epoch,train_loss,val_metric,lr,seconds\n";
  for (const EpochRecord &e : epochs)
    out << e.epoch << ',' << FormatDouble(e.train_loss) << ',' << FormatDouble(e.val_metric)
        << ',' << FormatDouble(e.lr) << ',' << FormatFixed(e.seconds, 3) << '\n';
  return out.str();
}

void TrainLog::Write(const std::filesystem::path &path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write training log " + path.string());
  out << ToCsv();
  if (!out.flush()) throw Error("failed writing training log " + path.string());
}

TrainOutcome Train(Model<float> &model, const TaskData &train, const TaskData &val,
                   const LabelSpace *space, const TrainConfig &cfg, const TrainHooks &hooks) {
  cfg.Validate();
  CheckData(model, train, "training");
  CheckData(model, val, "validation");
  const TaskSpec &task = model.task();
  const bool regression = task.kind == TaskKind::kRegression;
  if (!regression && (!space || space->size() != task.num_classes))
    throw Error("classification training needs a matching label space");

  AgeNormalizer norm;
  std::vector<double> z;
  if (regression) {
    norm = AgeNormalizer::Fit(train.ages);
    for (double a : train.ages) z.push_back(norm.Normalize(a));
  }
  std::vector<double> weights;
  if (!regression && cfg.class_weighting == ClassWeighting::kInverseFrequency)
    weights = InverseFrequencyWeights(train.labels, task.num_classes);

  std::mt19937_64 shuffle_rng(Mix64(cfg.seed, Fnv1a64("shuffle")));
  std::mt19937_64 dropout_rng(Mix64(cfg.seed, Fnv1a64("dropout")));
  Optimizer opt(model.params(), cfg);
  PlateauScheduler plateau{cfg.initial_lr, cfg.plateau_patience, cfg.plateau_factor, cfg.min_lr,
                           cfg.improvement_tolerance};
  EarlyStopper stopper{cfg.early_stop_patience, cfg.improvement_tolerance};

  TrainLog log;
  std::vector<std::vector<float>> best = model.params().Snapshot();
  std::vector<int> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  const int n = static_cast<int>(train.size());

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    const double lr = plateau.lr;
    double loss_sum = 0;
    int batch_no = 0;
    for (int start = 0; start < n; start += cfg.batch_size, ++batch_no) {
      std::vector<int> rows(order.begin() + start,
                            order.begin() + std::min(n, start + cfg.batch_size));
      BatchTargets targets;
      for (int r : rows) {
        if (regression) targets.values.push_back(z[r]);
        else targets.classes.push_back(train.labels[r]);
      }
      const float loss =
          ComputeGradient(model, train.Batch(rows), targets, weights, &dropout_rng);
      if (!std::isfinite(loss))
        throw Error("non-finite training loss at epoch " + std::to_string(epoch) + ", batch " +
                    std::to_string(batch_no + 1));
      opt.Step(lr);
      loss_sum += double(loss) * double(rows.size());
    }

    double metric = ValidationMetric(model, val, norm);
    if (hooks.val_metric) metric = hooks.val_metric(epoch, metric);
    if (!std::isfinite(metric))
      throw Error("non-finite validation metric at epoch " + std::to_string(epoch));
    const bool stop = stopper.Step(metric);
    if (stopper.improved) best = model.params().Snapshot();
    plateau.Step(metric);

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / n;
    rec.val_metric = metric;
    rec.lr = lr;
    rec.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log.epochs.push_back(rec);
    if (hooks.on_epoch) hooks.on_epoch(rec);
    if (stop) {
      log.stop_reason = StopReason::kEarlyStop;
      break;
    }
  }

  model.params().Restore(best);
  log.best_epoch = stopper.best_epoch;
  log.best_val_metric = stopper.best;

  TrainOutcome outcome{Checkpoint::FromModel(model), std::move(log)};
  Checkpoint &c = outcome.checkpoint;
  c.train_config = cfg.ToKeyValues();
  if (!regression) c.classes = space->classes();
  c.age_mean = norm.mean;
  c.age_stddev = norm.stddev;
  c.best_val_metric = outcome.log.best_val_metric;
  c.best_epoch = outcome.log.best_epoch;
  return outcome;
}

}  // namespace satt
