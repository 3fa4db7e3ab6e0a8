// runner/execute.cc

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

#include "satt/runner.h"

#include <atomic>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace satt {

namespace fs = std::filesystem;

namespace {

constexpr char kCheckpointFile[] = "checkpoint.satt";
constexpr char kLogFile[] = "train_log.csv";
constexpr char kResultsFile[] = "results.csv";
constexpr char kCompleteFile[] = "COMPLETE";

std::string ReadFile(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const fs::path &path, const std::string &text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw Error("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string CompleteMarker(const fs::path &dir) {
  return "checkpoint " + HexU64(Fnv1a64(ReadFile(dir / kCheckpointFile))) + "\nresults " +
         HexU64(Fnv1a64(ReadFile(dir / kResultsFile))) + "\n";
}

// Results of a finished run directory, or nullopt when it must be redone.
std::optional<std::vector<EvalResult>> ReuseRun(const fs::path &dir) {
  try {
    if (!fs::exists(dir / kCompleteFile)) return std::nullopt;
    if (ReadFile(dir / kCompleteFile) != CompleteMarker(dir)) return std::nullopt;
    return ReadResultsCsv(dir / kResultsFile);
  } catch (const Error &) {
    return std::nullopt;
  }
}

TaskSpec TaskFor(const PlanEntry &entry, const RunData &data) {
  TaskSpec task;
  task.attribute = entry.attribute;
  task.kind = IsCategorical(entry.attribute) ? TaskKind::kClassification : TaskKind::kRegression;
  task.num_classes = data.space ? data.space->size() : 1;
  task.input_kind = InputKindFor(entry.architecture);
  return task;
}

void ExecuteRun(RunRecord &rec, const std::vector<DatasetManifest> &manifests,
                const StoreSet &stores, const RunnerConfig &cfg, const fs::path &dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::vector<EvalResult> results =
      TrainAndEvaluate(rec.entry, manifests, stores, cfg, rec.seed, rec.checkpoint, rec.log,
                       {{"run_hash", rec.hash}});
  WriteFile(dir / kResultsFile, RenderReport(results, ReportLayout::kCsv));
  // Results are re-read so reused and fresh runs report identical values.
  rec.results = ReadResultsCsv(dir / kResultsFile);
  WriteFile(dir / kCompleteFile, CompleteMarker(dir));
}

std::string RunIndexCsv(const std::vector<RunRecord> &runs, const fs::path &out_dir) {
  std::ostringstream out;
  out << "hash,attribute,model,train,test,seed,status,checkpoint,log,error\n";
  for (const RunRecord &r : runs) {
    std::string tests;
    for (std::size_t i = 0; i < r.entry.test_datasets.size(); ++i)
      tests += (i ? "+" : "") + r.entry.test_datasets[i];
    std::string error = r.error;
    for (char &c : error)
      if (c == ',' || c == '\n' || c == '\r') c = ' ';
    out << r.hash << ',' << AttributeName(r.entry.attribute) << ','
        << ArchitectureName(r.entry.architecture) << ',' << r.entry.TrainName() << ',' << tests
        << ',' << r.seed << ',' << RunStatusName(r.status) << ','
        << fs::relative(r.checkpoint, out_dir).generic_string() << ','
        << fs::relative(r.log, out_dir).generic_string() << ',' << error << '\n';
  }
  return out.str();
}

}  // namespace

std::string_view RunStatusName(RunStatus status) {
  switch (status) {
    case RunStatus::kTrained: return "trained";
    case RunStatus::kReused: return "reused";
    case RunStatus::kFailed: return "failed";
  }
  return "unknown";
}

std::vector<EvalResult> TrainAndEvaluate(const PlanEntry &entry,
                                         const std::vector<DatasetManifest> &manifests,
                                         const StoreSet &stores, const RunnerConfig &cfg,
                                         std::uint64_t seed, const fs::path &checkpoint,
                                         const fs::path &log,
                                         const std::map<std::string, std::string> &extra) {
  RunData data = PrepareRunData(entry, manifests, cfg.val_ratio, cfg.seed);
  const TaskSpec task = TaskFor(entry, data);
  const LabelSpace *space = data.space ? &*data.space : nullptr;
  Model<float> model = BuildModel<float>(entry.architecture, stores.dim(), task, cfg.hyper, seed);
  TaskData train = BuildTaskData(data.train, stores, task, space);
  TaskData val = BuildTaskData(data.val, stores, task, space);
  TrainConfig tc = cfg.train;
  tc.seed = seed;
  TrainOutcome outcome = Train(model, train, val, space, tc);

  Checkpoint &ckpt = outcome.checkpoint;
  ckpt.extra = extra;
  ckpt.extra["plan"] = entry.Describe();
  ckpt.extra["features"] = cfg.features;
  ckpt.extra["train"] = entry.TrainName();
  ckpt.extra["stop_reason"] = std::string(StopReasonName(outcome.log.stop_reason));
  SaveCheckpoint(ckpt, checkpoint);
  outcome.log.Write(log);

  std::vector<EvalResult> results;
  for (const std::string &test : entry.test_datasets) {
    const std::vector<SegmentRecord> &records = data.test.at(test);
    if (records.empty()) continue;
    auto scored =
        EvaluateModel(model, ckpt, records, stores, cfg.features, entry.TrainName(), test);
    results.insert(results.end(), scored.begin(), scored.end());
  }
  return results;
}

std::vector<EvalResult> EvaluateModel(Model<float> &model, const Checkpoint &ckpt,
                                      const std::vector<SegmentRecord> &records,
                                      const StoreSet &stores, const std::string &features,
                                      const std::string &train_name,
                                      const std::string &test_name) {
  std::optional<LabelSpace> space;
  if (ckpt.task.kind == TaskKind::kClassification)
    space = LabelSpace(ckpt.task.attribute, ckpt.classes);
  TaskData data = BuildTaskData(records, stores, model.task(), space ? &*space : nullptr);
  PredictionSet preds = Predict(model, data, AgeNormalizer{ckpt.age_mean, ckpt.age_stddev});
  return Score(preds, ckpt.task.num_classes, features,
               std::string(ArchitectureName(model.architecture())), train_name, test_name);
}

ExecutionSummary ExecutePlan(const ExperimentPlan &plan,
                             const std::vector<DatasetManifest> &manifests,
                             const StoreSet &stores, const RunnerConfig &cfg,
                             const fs::path &out_dir, const std::vector<EvalResult> &baselines,
                             const std::function<void(const std::string &)> &progress) {
  cfg.Validate();
  if (stores.empty()) throw Error("no embedding stores given");
  fs::create_directories(out_dir / "runs");

  ExecutionSummary summary;
  summary.runs.resize(plan.runs.size());
  for (std::size_t i = 0; i < plan.runs.size(); ++i) {
    RunRecord &r = summary.runs[i];
    r.entry = plan.runs[i];
    r.hash = RunHash(r.entry, cfg, manifests, stores);
    r.seed = RunSeed(r.entry, cfg.seed);
    r.checkpoint = out_dir / "runs" / r.hash / kCheckpointFile;
    r.log = out_dir / "runs" / r.hash / kLogFile;
  }

  std::mutex mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < summary.runs.size(); i = next++) {
      RunRecord &r = summary.runs[i];
      const fs::path dir = out_dir / "runs" / r.hash;
      if (auto reused = ReuseRun(dir)) {
        r.results = std::move(*reused);
        r.status = RunStatus::kReused;
      } else {
        try {
          ExecuteRun(r, manifests, stores, cfg, dir);
          r.status = RunStatus::kTrained;
        } catch (const std::exception &ex) {
          r.status = RunStatus::kFailed;
          r.error = ex.what();
          r.results.clear();
        }
      }
      if (progress) {
        std::lock_guard<std::mutex> lock(mu);
        progress("[" + std::string(RunStatusName(r.status)) + "] " + r.hash + " " +
                 r.entry.Describe() + (r.error.empty() ? "" : ": " + r.error));
      }
    }
  };
  const int threads = std::max(1, std::min<int>(cfg.workers, int(summary.runs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread &t : pool) t.join();

  std::vector<EvalResult> all;
  for (const RunRecord &r : summary.runs) {
    switch (r.status) {
      case RunStatus::kTrained: ++summary.trained; break;
      case RunStatus::kReused: ++summary.reused; break;
      case RunStatus::kFailed: ++summary.failed; break;
    }
    all.insert(all.end(), r.results.begin(), r.results.end());
  }
  std::vector<EvalResult> with_baselines = all;
  for (EvalResult b : baselines) {
    b.external = true;
    with_baselines.push_back(b);
  }
  summary.report_csv = out_dir / "report.csv";
  summary.report_markdown = out_dir / "report.md";
  summary.run_index = out_dir / "run_index.csv";
  WriteFile(summary.report_csv, RenderReport(all, ReportLayout::kCsv));
  WriteFile(summary.report_markdown, RenderReport(with_baselines, ReportLayout::kMarkdown));
  WriteFile(summary.run_index, RunIndexCsv(summary.runs, out_dir));
  return summary;
}

}  // namespace satt
