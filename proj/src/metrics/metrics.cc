// metrics/metrics.cc

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

#include "satt/metrics.h"

#include <cmath>

namespace satt {

namespace {

void RequireNonEmpty(const PredictionSet &p) {
  if (p.y.size() != p.y_hat.size())
    throw Error("prediction set has " + std::to_string(p.y.size()) + " truths but " +
                std::to_string(p.y_hat.size()) + " predictions");
  if (p.y.empty()) throw Error("metric of an empty prediction set");
}

int ClassIndex(double v, int k) {
  const double r = std::round(v);
  if (r != v || r < 0 || r >= k)
    throw Error("class index " + FormatDouble(v) + " outside [0, " + std::to_string(k) + ")");
  return static_cast<int>(r);
}

}  // namespace

double Mae(const PredictionSet &preds) {
  RequireNonEmpty(preds);
  if (preds.kind != PredictionKind::kRegression) throw Error("MAE needs a regression set");
  double sum = 0;
  for (std::size_t i = 0; i < preds.n(); ++i) sum += std::abs(preds.y[i] - preds.y_hat[i]);
  return sum / double(preds.n());
}

double Accuracy(const PredictionSet &preds) {
  RequireNonEmpty(preds);
  if (preds.kind != PredictionKind::kClassification)
    throw Error("accuracy needs a classification set");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < preds.n(); ++i) correct += preds.y[i] == preds.y_hat[i];
  return double(correct) / double(preds.n());
}

ConfusionMatrix Confusion(const PredictionSet &preds, int num_classes) {
  if (preds.y.size() != preds.y_hat.size()) throw Error("prediction set length mismatch");
  if (num_classes < 1) throw Error("confusion matrix needs at least one class");
  ConfusionMatrix m(num_classes, std::vector<std::int64_t>(num_classes, 0));
  for (std::size_t i = 0; i < preds.n(); ++i)
    ++m[ClassIndex(preds.y[i], num_classes)][ClassIndex(preds.y_hat[i], num_classes)];
  return m;
}

double MacroF1(const ConfusionMatrix &c) {
  const std::size_t k = c.size();
  double sum = 0;
  int counted = 0;
  for (std::size_t j = 0; j < k; ++j) {
    std::int64_t support = 0, predicted = 0;
    for (std::size_t i = 0; i < k; ++i) {
      support += c[j][i];
      predicted += c[i][j];
    }
    if (support == 0 && predicted == 0) continue;
    ++counted;
    const double tp = double(c[j][j]);
    const double p = predicted ? tp / double(predicted) : 0.0;
    const double r = support ? tp / double(support) : 0.0;
    if (p + r > 0) sum += 2 * p * r / (p + r);
  }
  if (counted == 0) throw Error("macro-F1 of an empty confusion matrix");
  return sum / counted;
}

double MacroF1(const PredictionSet &preds, int num_classes) {
  RequireNonEmpty(preds);
  if (preds.kind != PredictionKind::kClassification)
    throw Error("macro-F1 needs a classification set");
  return MacroF1(Confusion(preds, num_classes));
}

std::string_view MetricName(MetricKind metric) {
  switch (metric) {
    case MetricKind::kMae: return "mae";
    case MetricKind::kAccuracy: return "accuracy";
    case MetricKind::kF1: return "f1";
  }
  throw Error("unknown metric");
}

MetricKind ParseMetric(std::string_view name) {
  const std::string n = ToLower(TrimView(name));
  if (n == "mae") return MetricKind::kMae;
  if (n == "accuracy" || n == "acc") return MetricKind::kAccuracy;
  if (n == "f1") return MetricKind::kF1;
  throw Error("unknown metric '" + std::string(name) + "'");
}

void EvalResult::Validate() const {
  if ((metric == MetricKind::kMae) != (attribute == Attribute::kAge))
    throw Error("metric " + std::string(MetricName(metric)) + " does not apply to " +
                std::string(AttributeName(attribute)));
  if (!std::isfinite(value)) throw Error("non-finite metric value");
}

std::vector<EvalResult> Score(const PredictionSet &preds, int num_classes,
                              const std::string &features, const std::string &model,
                              const std::string &train, const std::string &test) {
  EvalResult base{features, model, train, test, preds.attribute, MetricKind::kMae, 0, false};
  if (preds.kind == PredictionKind::kRegression) {
    base.value = Mae(preds);
    return {base};
  }
  EvalResult acc = base, f1 = base;
  acc.metric = MetricKind::kAccuracy;
  acc.value = 100.0 * Accuracy(preds);
  f1.metric = MetricKind::kF1;
  f1.value = 100.0 * MacroF1(preds, num_classes);
  return {acc, f1};
}

}  // namespace satt
