// satt.cc

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

// Command-line front end: corpus ingestion, synthetic and imported embedding
// stores, single runs, evaluation, the experiment matrix and reports.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "satt/config_file.h"
#include "satt/corpus_adapters.h"
#include "satt/runner.h"

namespace fs = std::filesystem;

namespace satt {
namespace {

struct GlobalFlags {
  std::uint64_t seed = 0;
  std::string config;
  int workers = 1;
  CLI::Option *seed_opt = nullptr;
  CLI::Option *workers_opt = nullptr;
};

// Training flags shared by `train` and `matrix`; unset flags keep the config.
struct TrainFlags {
  int epochs = 0;
  int batch_size = 0;
  double lr = 0;
  double val_ratio = 0;
  std::string optimizer;
  std::string features;

  void Register(CLI::App *cmd) {
    cmd->add_option("--epochs", epochs, "Maximum training epochs");
    cmd->add_option("--batch-size", batch_size, "Mini-batch size");
    cmd->add_option("--lr", lr, "Initial learning rate");
    cmd->add_option("--val-ratio", val_ratio, "Fraction of dev speakers held out for validation");
    cmd->add_option("--optimizer", optimizer, "adam or sgd");
    cmd->add_option("--features", features, "Feature tag written into reports");
  }

  void Apply(RunnerConfig &rc) const {
    if (epochs) rc.train.max_epochs = epochs;
    if (batch_size) rc.train.batch_size = batch_size;
    if (lr) rc.train.initial_lr = lr;
    if (val_ratio) rc.val_ratio = val_ratio;
    if (!optimizer.empty()) rc.train.Set("optimizer", optimizer);
    if (!features.empty()) rc.features = features;
  }
};

struct Settings {
  RunnerConfig runner;
  SynthConfig synth;
};

Settings LoadSettings(const GlobalFlags &g) {
  Settings s;
  if (!g.config.empty()) ApplyConfig(ReadKeyValueFile(g.config), &s.runner, &s.synth);
  if (g.seed_opt->count()) s.runner.seed = s.runner.train.seed = s.synth.seed = g.seed;
  if (g.workers_opt->count()) s.runner.workers = g.workers;
  return s;
}

std::vector<DatasetManifest> LoadManifests(const std::vector<std::string> &paths) {
  std::vector<DatasetManifest> out;
  for (const std::string &p : paths) {
    DatasetManifest m = ParseManifest(p);
    m.Validate();
    for (const DatasetManifest &seen : out)
      if (seen.dataset_id == m.dataset_id)
        throw Error("dataset '" + m.dataset_id + "' given twice");
    out.push_back(std::move(m));
  }
  return out;
}

struct OpenStores {
  std::vector<EmbeddingStore> owned;
  StoreSet set;
};

std::unique_ptr<OpenStores> LoadStores(const std::vector<std::string> &paths) {
  auto s = std::make_unique<OpenStores>();
  for (const std::string &p : paths) s->owned.push_back(EmbeddingStore::Open(p));
  std::vector<const EmbeddingStore *> ptrs;
  for (const EmbeddingStore &e : s->owned) ptrs.push_back(&e);
  s->set = StoreSet(ptrs);
  return s;
}

std::vector<Architecture> ParseArchitectures(const std::string &list) {
  std::vector<Architecture> out;
  for (const std::string &name : SplitString(list, ','))
    if (!TrimView(name).empty()) out.push_back(ParseArchitecture(name));
  if (out.empty()) throw Error("no architectures given");
  return out;
}

void WriteOrPrint(const std::string &text, const std::string &path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out.flush()) throw Error("failed writing " + path);
}

std::string Hours(const std::optional<double> &h) { return h ? FormatFixed(*h, 2) : "-"; }

}  // namespace
}  // namespace satt

int main(int argc, char **argv) {
  using namespace satt;
  CLI::App app{"Speaker attribute prediction from speech embeddings"};
  app.name("satt");
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  g.seed_opt = app.add_option("--seed", g.seed, "Global seed");
  app.add_option("--config", g.config, "key=value file with training/synthesis settings")
      ->check(CLI::ExistingFile);
  g.workers_opt = app.add_option("--workers", g.workers, "Concurrent runs for `matrix`")
                      ->check(CLI::PositiveNumber);

  // ingest
  auto *ingest = app.add_subcommand("ingest", "Convert a corpus directory into a manifest");
  std::string kind, root, aux, ingest_out;
  ingest->add_option("--kind", kind, "timit, voxceleb2, l2arctic, saa or common_voice")
      ->required();
  ingest->add_option("--root", root, "Corpus root directory")->required();
  ingest->add_option("--aux", aux, "Annotation or split-override CSV");
  ingest->add_option("--out", ingest_out, "Manifest CSV to write")->required();

  // manifest-summary
  auto *summary = app.add_subcommand("manifest-summary", "Split sizes and attribute availability");
  std::vector<std::string> summary_manifests;
  summary->add_option("--manifest,--manifests", summary_manifests, "Manifest CSV files")
      ->required();

  // synth-manifest
  auto *synth_manifest =
      app.add_subcommand("synth-manifest", "Write a synthetic speaker manifest");
  SynthManifestSpec spec;
  std::string spec_attrs = "age,gender", spec_out;
  int spec_classes = 4;
  synth_manifest->add_option("--dataset-id", spec.dataset_id, "Dataset id");
  synth_manifest->add_option("--speakers", spec.num_speakers, "Number of speakers");
  synth_manifest->add_option("--segments", spec.segments_per_speaker, "Segments per speaker");
  synth_manifest->add_option("--test-fraction", spec.test_fraction, "Fraction of test speakers");
  synth_manifest->add_option("--attributes", spec_attrs, "Comma-separated attributes");
  synth_manifest->add_option("--classes", spec_classes,
                             "Classes per categorical attribute other than gender");
  synth_manifest->add_option("--out", spec_out, "Manifest CSV to write")->required();

  // synth
  auto *synth = app.add_subcommand("synth", "Generate a synthetic embedding store");
  std::vector<std::string> synth_manifests;
  std::string synth_out;
  int dim = 0, frames_min = 0, frames_max = 0;
  double separation = -1, noise_sigma = -1, age_slope = std::nan("");
  synth->add_option("--manifest,--manifests", synth_manifests, "Manifest CSV files")->required();
  synth->add_option("--dim", dim, "Embedding width");
  synth->add_option("--frames-min", frames_min, "Minimum frames per segment");
  synth->add_option("--frames-max", frames_max, "Maximum frames per segment");
  synth->add_option("--separation", separation, "Scale of the class means");
  synth->add_option("--noise-sigma", noise_sigma, "Per-frame noise standard deviation");
  synth->add_option("--age-slope", age_slope, "Shift per year along the age direction");
  synth->add_option("--out", synth_out, "Store file to write")->required();

  // import-embeddings
  auto *import = app.add_subcommand("import-embeddings",
                                    "Pack externally extracted float32 features into a store");
  std::string import_dir, import_listing, import_out;
  int import_dim = 0;
  import->add_option("--dir", import_dir, "Directory holding the feature files")->required();
  import->add_option("--listing", import_listing, "Lines of '<segment_id> <file>'")->required();
  import->add_option("--dim", import_dim, "Feature width")->required();
  import->add_option("--out", import_out, "Store file to write")->required();

  // train
  auto *train = app.add_subcommand("train", "Train one head on one attribute");
  std::vector<std::string> train_manifests, train_stores, train_sets;
  std::string train_attr, train_arch = "mlp", train_dir;
  TrainFlags train_flags;
  train->add_option("--manifest,--manifests", train_manifests, "Manifest CSV files")->required();
  train->add_option("--store,--stores", train_stores, "Embedding stores")->required();
  train->add_option("--attribute", train_attr, "Attribute to predict")->required();
  train->add_option("--arch", train_arch, "mlp, resnet32 or bilstm");
  train->add_option("--train", train_sets,
                    "Training datasets (default: every dataset with the attribute)");
  train->add_option("--out", train_dir, "Output directory")->required();
  train_flags.Register(train);

  // evaluate
  auto *evaluate = app.add_subcommand("evaluate", "Score a checkpoint on a dataset split");
  std::string eval_ckpt, eval_split = "test", eval_out, eval_train_name, eval_features;
  std::vector<std::string> eval_manifests, eval_stores;
  evaluate->add_option("--checkpoint", eval_ckpt, "Checkpoint file")->required();
  evaluate->add_option("--manifest,--manifests", eval_manifests, "Manifest CSV files")
      ->required();
  evaluate->add_option("--store,--stores", eval_stores, "Embedding stores")->required();
  evaluate->add_option("--split", eval_split, "test or dev");
  evaluate->add_option("--train-name", eval_train_name, "Training-set label for the results");
  evaluate->add_option("--features", eval_features, "Feature tag for the results");
  evaluate->add_option("--out", eval_out, "Results CSV (default: stdout)");

  // matrix
  auto *matrix = app.add_subcommand("matrix", "Run the full experiment matrix");
  std::vector<std::string> matrix_manifests, matrix_stores;
  std::string matrix_arch = "mlp,resnet32,bilstm", matrix_out, matrix_baselines;
  bool cross_eval = false, dry_run = false;
  TrainFlags matrix_flags;
  matrix->add_option("--manifest,--manifests", matrix_manifests, "Manifest CSV files")
      ->required();
  matrix->add_option("--store,--stores", matrix_stores, "Embedding stores");
  matrix->add_option("--arch", matrix_arch, "Comma-separated architectures");
  matrix->add_option("--out", matrix_out, "Output directory");
  matrix->add_option("--baselines", matrix_baselines, "External reference results CSV");
  matrix->add_flag("--cross-eval", cross_eval,
                   "Test on every dataset with the attribute, not only training ones");
  matrix->add_flag("--dry-run", dry_run, "Print the plan and exit");
  matrix_flags.Register(matrix);

  // report
  auto *report = app.add_subcommand("report", "Render results as CSV or markdown");
  std::vector<std::string> report_inputs;
  std::string report_layout = "markdown", report_baselines, report_out;
  report->add_option("--results", report_inputs, "Results CSV files or matrix output dirs")
      ->required();
  report->add_option("--baselines", report_baselines, "External reference results CSV");
  report->add_option("--layout", report_layout, "csv or markdown");
  report->add_option("--out", report_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() != 0) std::cerr << app.help() << '\n';
    return app.exit(e);
  }

  try {
    Settings s = LoadSettings(g);

    if (*ingest) {
      std::optional<fs::path> aux_path;
      if (!aux.empty()) aux_path = aux;
      DatasetManifest m = AdaptCorpus(ParseCorpusKind(kind), root, aux_path, s.runner.seed);
      m.Validate();
      WriteManifest(m, ingest_out);
      std::cout << "wrote " << m.records.size() << " records of " << m.dataset_id << " to "
                << ingest_out << '\n';
    } else if (*summary) {
      std::vector<DatasetManifest> ms = LoadManifests(summary_manifests);
      std::cout << "dataset,split,speakers,segments,hours\n";
      for (const DatasetManifest &m : ms) {
        ManifestSummary sum = Summarize(m);
        std::cout << m.dataset_id << ",dev," << sum.dev.speakers << ',' << sum.dev.segments << ','
                  << Hours(sum.dev.hours) << '\n'
                  << m.dataset_id << ",test," << sum.test.speakers << ',' << sum.test.segments
                  << ',' << Hours(sum.test.hours) << '\n';
      }
      AvailabilityMatrix av = ComputeAvailability(ms);
      std::cout << "\ndataset";
      for (Attribute a : kAllAttributes) std::cout << ',' << AttributeName(a);
      std::cout << '\n';
      for (const std::string &d : av.datasets) {
        std::cout << d;
        for (Attribute a : kAllAttributes) {
          std::cout << ',';
          if (!av.Has(d, a)) std::cout << '-';
          else if (auto k = av.ClassCount(d, a)) std::cout << "yes(" << *k << ')';
          else std::cout << "yes";
        }
        std::cout << '\n';
      }
    } else if (*synth_manifest) {
      spec.seed = s.runner.seed;
      spec.attributes.clear();
      for (const std::string &a : SplitString(spec_attrs, ','))
        if (!TrimView(a).empty()) {
          Attribute attr = ParseAttribute(TrimView(a));
          spec.attributes.push_back(attr);
          if (IsCategorical(attr)) spec.num_classes[attr] = spec_classes;
        }
      DatasetManifest m = MakeSyntheticManifest(spec);
      WriteManifest(m, spec_out);
      std::cout << "wrote " << m.records.size() << " records to " << spec_out << '\n';
    } else if (*synth) {
      SynthConfig cfg = s.synth;
      if (dim) cfg.dim = dim;
      if (frames_min) cfg.frames_min = frames_min;
      if (frames_max) cfg.frames_max = frames_max;
      if (separation >= 0) cfg.separation = separation;
      if (noise_sigma >= 0) cfg.noise_sigma = noise_sigma;
      if (!std::isnan(age_slope)) cfg.age_slope = age_slope;
      std::vector<DatasetManifest> ms = LoadManifests(synth_manifests);
      std::vector<const DatasetManifest *> ptrs;
      for (const DatasetManifest &m : ms) ptrs.push_back(&m);
      EmbeddingStore store = SynthGenerate(ptrs, LabelSpacesFor(ptrs), cfg, synth_out);
      std::cout << "wrote " << store.size() << " sequences of width " << store.dim() << " to "
                << synth_out << '\n';
    } else if (*import) {
      EmbeddingStore store = ImportExternal(import_dir, import_listing, import_dim, import_out);
      std::cout << "imported " << store.size() << " sequences into " << import_out << '\n';
    } else if (*train) {
      train_flags.Apply(s.runner);
      s.runner.Validate();
      std::vector<DatasetManifest> ms = LoadManifests(train_manifests);
      auto stores = LoadStores(train_stores);
      PlanEntry e;
      e.attribute = ParseAttribute(train_attr);
      e.architecture = ParseArchitecture(train_arch);
      AvailabilityMatrix av = ComputeAvailability(ms);
      if (train_sets.empty()) {
        for (const std::string &d : av.datasets)
          if (av.Has(d, e.attribute)) train_sets.push_back(d);
      }
      std::sort(train_sets.begin(), train_sets.end());
      for (const std::string &d : train_sets)
        if (!av.Has(d, e.attribute))
          throw Error("dataset '" + d + "' has no " + std::string(AttributeName(e.attribute)) +
                      " labels");
      if (train_sets.empty())
        throw Error("no dataset carries " + std::string(AttributeName(e.attribute)));
      e.train_datasets = e.test_datasets = train_sets;
      e.all = train_sets.size() > 1;
      fs::create_directories(train_dir);
      auto results = TrainAndEvaluate(e, ms, stores->set, s.runner, RunSeed(e, s.runner.seed),
                                      fs::path(train_dir) / "checkpoint.satt",
                                      fs::path(train_dir) / "train_log.csv");
      const std::string csv = RenderReport(results, ReportLayout::kCsv);
      WriteOrPrint(csv, (fs::path(train_dir) / "results.csv").string());
      std::cout << csv;
    } else if (*evaluate) {
      Checkpoint ckpt = LoadCheckpoint(eval_ckpt);
      Model<float> model = ckpt.Instantiate();
      std::vector<DatasetManifest> ms = LoadManifests(eval_manifests);
      auto stores = LoadStores(eval_stores);
      const Split split = eval_split == "dev" ? Split::kDev : Split::kTest;
      if (eval_split != "dev" && eval_split != "test")
        throw Error("--split must be test or dev");
      if (eval_train_name.empty())
        eval_train_name = ckpt.extra.count("train") ? ckpt.extra.at("train") : "unknown";
      if (eval_features.empty())
        eval_features = ckpt.extra.count("features") ? ckpt.extra.at("features") : "unknown";
      std::vector<EvalResult> all;
      for (const DatasetManifest &m : ms) {
        std::vector<SegmentRecord> recs;
        for (const SegmentRecord &r : WithAttribute(m.records, ckpt.task.attribute))
          if (r.split == split) recs.push_back(r);
        if (recs.empty()) continue;
        auto scored = EvaluateModel(model, ckpt, recs, stores->set, eval_features,
                                    eval_train_name, m.dataset_id);
        all.insert(all.end(), scored.begin(), scored.end());
      }
      if (all.empty()) throw Error("no labelled records in the requested split");
      WriteOrPrint(RenderReport(all, ReportLayout::kCsv), eval_out);
    } else if (*matrix) {
      matrix_flags.Apply(s.runner);
      s.runner.Validate();
      std::vector<DatasetManifest> ms = LoadManifests(matrix_manifests);
      ExperimentPlan plan =
          BuildPlan(ComputeAvailability(ms), ParseArchitectures(matrix_arch), cross_eval);
      if (dry_run) {
        for (const PlanEntry &e : plan.runs) std::cout << e.Describe() << '\n';
        std::cout << plan.runs.size() << " runs\n";
        return 0;
      }
      if (matrix_stores.empty()) throw Error("matrix needs --stores (or use --dry-run)");
      if (matrix_out.empty()) throw Error("matrix needs --out (or use --dry-run)");
      auto stores = LoadStores(matrix_stores);
      std::vector<EvalResult> baselines;
      if (!matrix_baselines.empty()) baselines = ReadResultsCsv(matrix_baselines, true);
      ExecutionSummary sum =
          ExecutePlan(plan, ms, stores->set, s.runner, matrix_out, baselines,
                      [](const std::string &line) { std::cerr << line << '\n'; });
      std::cout << plan.runs.size() << " runs: " << sum.trained << " trained, " << sum.reused
                << " reused, " << sum.failed << " failed\nreport: " << sum.report_markdown.string()
                << '\n';
      return sum.failed ? 1 : 0;
    } else if (*report) {
      std::vector<EvalResult> results;
      for (const std::string &in : report_inputs) {
        std::vector<fs::path> files;
        if (fs::is_directory(in)) {
          for (const auto &entry : fs::recursive_directory_iterator(in))
            if (entry.path().filename() == "results.csv") files.push_back(entry.path());
          std::sort(files.begin(), files.end());
        } else {
          files.push_back(in);
        }
        for (const fs::path &f : files) {
          auto r = ReadResultsCsv(f);
          results.insert(results.end(), r.begin(), r.end());
        }
      }
      if (!report_baselines.empty()) {
        auto b = ReadResultsCsv(report_baselines, true);
        results.insert(results.end(), b.begin(), b.end());
      }
      ReportLayout layout;
      if (report_layout == "csv") layout = ReportLayout::kCsv;
      else if (report_layout == "markdown" || report_layout == "md") layout = ReportLayout::kMarkdown;
      else throw Error("--layout must be csv or markdown");
      WriteOrPrint(RenderReport(results, layout), report_out);
    }
  } catch (const std::exception &e) {
    std::cerr << "satt: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
