// satt/metrics.h

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

#ifndef SATT_METRICS_H_
#define SATT_METRICS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "satt/common.h"

namespace satt {

enum class PredictionKind { kRegression, kClassification };

/// Paired truths and predictions: years for regression, class indices
/// (stored as doubles) for classification.
struct PredictionSet {
  Attribute attribute = Attribute::kAge;
  PredictionKind kind = PredictionKind::kRegression;
  std::vector<double> y;
  std::vector<double> y_hat;

  std::size_t n() const { return y.size(); }
};

/// Row = true class, column = predicted class.
using ConfusionMatrix = std::vector<std::vector<std::int64_t>>;

/// Mean absolute error.  Throws on an empty set or a classification set.
double Mae(const PredictionSet &preds);
/// Fraction of exact matches.
double Accuracy(const PredictionSet &preds);
/// Throws when an index lies outside [0, K).
ConfusionMatrix Confusion(const PredictionSet &preds, int num_classes);
/// Unweighted mean of per-class F1.  Classes with neither support nor
/// predictions are left out of the mean; a class with P + R = 0 counts as 0.
double MacroF1(const PredictionSet &preds, int num_classes);
double MacroF1(const ConfusionMatrix &confusion);

enum class MetricKind { kMae, kAccuracy, kF1 };
std::string_view MetricName(MetricKind metric);
MetricKind ParseMetric(std::string_view name);
inline bool LowerIsBetter(MetricKind m) { return m == MetricKind::kMae; }

/// One report cell.  Accuracy and F1 are percentages, MAE is in years.
struct EvalResult {
  std::string features;
  std::string model;
  std::string train;
  std::string test;
  Attribute attribute = Attribute::kAge;
  MetricKind metric = MetricKind::kMae;
  double value = 0;
  bool external = false;  // reference rows supplied from outside

  void Validate() const;
  bool operator==(const EvalResult &) const = default;
};

/// MAE for regression; accuracy and macro-F1 for classification.
std::vector<EvalResult> Score(const PredictionSet &preds, int num_classes,
                              const std::string &features, const std::string &model,
                              const std::string &train, const std::string &test);

enum class ReportLayout { kCsv, kMarkdown };

inline constexpr std::string_view kReportHeader =
    "features,model,train,test,attribute,metric,value";

/// CSV: one row per result in canonical order, values with 2 decimals.
/// Markdown: one section per test set, rows by model and training set,
/// columns by attribute and metric; the best value of each column within a
/// section is bold (every tied value), missing cells are "-".  External
/// rows are tagged and never bolded.  CSV output omits external rows.
std::string RenderReport(const std::vector<EvalResult> &results, ReportLayout layout);

/// Parses the CSV report layout.  `external` marks every row.
std::vector<EvalResult> ParseResultsCsv(const std::string &text, bool external = false);
std::vector<EvalResult> ReadResultsCsv(const std::filesystem::path &path, bool external = false);

}  // namespace satt

#endif  // SATT_METRICS_H_
