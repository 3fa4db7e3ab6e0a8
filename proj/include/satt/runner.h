// satt/runner.h

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

#ifndef SATT_RUNNER_H_
#define SATT_RUNNER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "satt/corpus.h"
#include "satt/embed_store.h"
#include "satt/heads/model.h"
#include "satt/metrics.h"
#include "satt/synth.h"
#include "satt/trainer.h"

namespace satt {

/// One training run of the experiment matrix.
struct PlanEntry {
  Attribute attribute = Attribute::kAge;
  Architecture architecture = Architecture::kMlp;
  std::vector<std::string> train_datasets;  // sorted
  bool all = false;                         // union of every dataset with the attribute
  std::vector<std::string> test_datasets;   // sorted

  /// "All" or the single training dataset.
  std::string TrainName() const;
  /// Canonical one-line description; the basis of the run hash.
  std::string Describe() const;
  bool operator==(const PlanEntry &) const = default;
};

struct ExperimentPlan {
  std::vector<PlanEntry> runs;
};

/// For each attribute: one run per dataset carrying it, plus an "All" run
/// when at least two datasets carry it, crossed with `architectures`.  Each
/// run is tested on the datasets it was trained on, or on every dataset
/// carrying the attribute when `cross_eval` is set.  Ordered by attribute,
/// training set ("All" last) and architecture.
ExperimentPlan BuildPlan(const AvailabilityMatrix &matrix,
                         const std::vector<Architecture> &architectures, bool cross_eval = false);

struct RunnerConfig {
  TrainConfig train;
  HeadConfig hyper;
  double val_ratio = 0.1;
  std::string features = "synthetic";
  int workers = 1;
  std::uint64_t seed = 0;

  void Validate() const;
  /// Everything that affects results, in a fixed order.
  std::vector<std::pair<std::string, std::string>> ToKeyValues() const;
};

/// Applies flat key=value settings.  Keys are TrainConfig, HeadConfig and
/// SynthConfig field names plus val_ratio, features and workers; "seed" sets
/// every seed.  `synth` may be null.  Throws on unknown keys.
void ApplyConfig(const std::map<std::string, std::string> &values, RunnerConfig *runner,
                 SynthConfig *synth);

/// Train/validation/test material of one run.
struct RunData {
  std::vector<SegmentRecord> train, val;
  std::map<std::string, std::vector<SegmentRecord>> test;  // per test dataset
  std::optional<LabelSpace> space;
};

RunData PrepareRunData(const PlanEntry &entry, const std::vector<DatasetManifest> &manifests,
                       double val_ratio, std::uint64_t seed);

/// Seed used for initialization, shuffling and dropout of a run.
std::uint64_t RunSeed(const PlanEntry &entry, std::uint64_t global_seed);

/// 16 hex digits identifying (plan entry, configuration, manifests, stores).
std::string RunHash(const PlanEntry &entry, const RunnerConfig &cfg,
                    const std::vector<DatasetManifest> &manifests, const StoreSet &stores);

/// Scores a trained model on the records of one dataset.
std::vector<EvalResult> EvaluateModel(Model<float> &model, const Checkpoint &ckpt,
                                      const std::vector<SegmentRecord> &records,
                                      const StoreSet &stores, const std::string &features,
                                      const std::string &train_name, const std::string &test_name);

/// Trains one plan entry, writes its checkpoint and training log and scores
/// it on the test split of every test dataset.  `extra` is stored in the
/// checkpoint metadata.
std::vector<EvalResult> TrainAndEvaluate(const PlanEntry &entry,
                                         const std::vector<DatasetManifest> &manifests,
                                         const StoreSet &stores, const RunnerConfig &cfg,
                                         std::uint64_t seed,
                                         const std::filesystem::path &checkpoint,
                                         const std::filesystem::path &log,
                                         const std::map<std::string, std::string> &extra = {});

enum class RunStatus { kTrained, kReused, kFailed };
std::string_view RunStatusName(RunStatus status);

struct RunRecord {
  PlanEntry entry;
  std::string hash;
  std::uint64_t seed = 0;
  std::filesystem::path checkpoint;
  std::filesystem::path log;
  std::vector<EvalResult> results;
  RunStatus status = RunStatus::kFailed;
  std::string error;
};

struct ExecutionSummary {
  std::vector<RunRecord> runs;  // plan order
  int trained = 0;
  int reused = 0;
  int failed = 0;
  std::filesystem::path report_csv;
  std::filesystem::path report_markdown;
  std::filesystem::path run_index;
};

// Output layout under `out_dir`:
//   runs/<hash>/{checkpoint.satt, train_log.csv, results.csv, COMPLETE}
//   run_index.csv, report.csv, report.md
// A run whose COMPLETE marker matches the hashes of its checkpoint and
// results is reused; any other run is (re)trained.  A failing run is
// recorded and the others proceed.

/// Executes the plan with up to cfg.workers concurrent runs.  `baselines`
/// are external reference rows added to the markdown report.
ExecutionSummary ExecutePlan(const ExperimentPlan &plan,
                             const std::vector<DatasetManifest> &manifests,
                             const StoreSet &stores, const RunnerConfig &cfg,
                             const std::filesystem::path &out_dir,
                             const std::vector<EvalResult> &baselines = {},
                             const std::function<void(const std::string &)> &progress = {});

}  // namespace satt

#endif  // SATT_RUNNER_H_
