// runner/plan.cc

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

#include <algorithm>
#include <sstream>

namespace satt {

namespace {

std::string Join(const std::vector<std::string> &items, char sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

const DatasetManifest &FindManifest(const std::vector<DatasetManifest> &manifests,
                                    const std::string &id) {
  for (const DatasetManifest &m : manifests)
    if (m.dataset_id == id) return m;
  throw Error("no manifest for dataset '" + id + "'");
}

int ToInt(const std::string &key, const std::string &value) {
  auto v = ParseInt(TrimView(value));
  if (!v || *v < -(1LL << 31) || *v >= (1LL << 31))
    throw Error("config key '" + key + "': expected an integer, got '" + value + "'");
  return static_cast<int>(*v);
}

double ToDouble(const std::string &key, const std::string &value) {
  auto v = ParseDouble(TrimView(value));
  if (!v) throw Error("config key '" + key + "': expected a number, got '" + value + "'");
  return *v;
}

bool SetHead(HeadConfig &h, const std::string &key, const std::string &value) {
  if (key == "mlp_dropout") h.mlp_dropout = ToDouble(key, value);
  else if (key == "lstm_hidden") h.lstm_hidden = ToInt(key, value);
  else if (key == "lstm_dropout") h.lstm_dropout = ToDouble(key, value);
  else if (key == "resnet_blocks") h.resnet_blocks = ToInt(key, value);
  else if (key == "map_height") h.map_height = ToInt(key, value);
  else if (key == "map_width") h.map_width = ToInt(key, value);
  else return false;
  return true;
}

bool SetSynth(SynthConfig &s, const std::string &key, const std::string &value) {
  if (key == "dim") s.dim = ToInt(key, value);
  else if (key == "frames_min") s.frames_min = ToInt(key, value);
  else if (key == "frames_max") s.frames_max = ToInt(key, value);
  else if (key == "separation") s.separation = ToDouble(key, value);
  else if (key == "noise_sigma") s.noise_sigma = ToDouble(key, value);
  else if (key == "age_slope") s.age_slope = ToDouble(key, value);
  else return false;
  return true;
}

}  // namespace

std::string PlanEntry::TrainName() const {
  if (all) return "All";
  if (train_datasets.size() != 1) throw Error("single-dataset run with several datasets");
  return train_datasets[0];
}

std::string PlanEntry::Describe() const {
  return "attribute=" + std::string(AttributeName(attribute)) +
         " architecture=" + std::string(ArchitectureName(architecture)) +
         " train=" + Join(train_datasets, '+') + (all ? " all" : "") +
         " test=" + Join(test_datasets, '+');
}

ExperimentPlan BuildPlan(const AvailabilityMatrix &matrix,
                         const std::vector<Architecture> &architectures, bool cross_eval) {
  if (architectures.empty()) throw Error("experiment plan needs at least one architecture");
  if (matrix.datasets.empty()) throw Error("experiment plan needs at least one dataset");
  std::vector<Architecture> archs = architectures;
  std::sort(archs.begin(), archs.end());
  archs.erase(std::unique(archs.begin(), archs.end()), archs.end());

  ExperimentPlan plan;
  for (Attribute a : kAllAttributes) {
    std::vector<std::string> having;
    for (const std::string &d : matrix.datasets)
      if (matrix.Has(d, a)) having.push_back(d);
    if (having.empty()) continue;
    std::vector<PlanEntry> entries;
    for (const std::string &d : having) {
      PlanEntry e;
      e.attribute = a;
      e.train_datasets = {d};
      e.test_datasets = cross_eval ? having : std::vector<std::string>{d};
      entries.push_back(e);
    }
    if (having.size() >= 2) {
      PlanEntry e;
      e.attribute = a;
      e.train_datasets = having;
      e.all = true;
      e.test_datasets = having;
      entries.push_back(e);
    }
    for (const PlanEntry &e : entries)
      for (Architecture arch : archs) {
        PlanEntry r = e;
        r.architecture = arch;
        plan.runs.push_back(r);
      }
  }
  return plan;
}

void RunnerConfig::Validate() const {
  train.Validate();
  if (!(val_ratio > 0 && val_ratio < 1)) throw Error("val_ratio must lie in (0, 1)");
  if (workers < 1) throw Error("workers must be >= 1");
  if (features.empty() || features.find_first_of(",\n") != std::string::npos)
    throw Error("features tag must be non-empty and free of commas");
}

std::vector<std::pair<std::string, std::string>> RunnerConfig::ToKeyValues() const {
  std::vector<std::pair<std::string, std::string>> kv;
  for (auto &p : train.ToKeyValues())
    if (p.first != "seed") kv.push_back(p);
  kv.emplace_back("mlp_dropout", FormatDouble(hyper.mlp_dropout));
  kv.emplace_back("lstm_hidden", std::to_string(hyper.lstm_hidden));
  kv.emplace_back("lstm_dropout", FormatDouble(hyper.lstm_dropout));
  kv.emplace_back("resnet_blocks", std::to_string(hyper.resnet_blocks));
  kv.emplace_back("map_height", std::to_string(hyper.map_height));
  kv.emplace_back("map_width", std::to_string(hyper.map_width));
  kv.emplace_back("val_ratio", FormatDouble(val_ratio));
  kv.emplace_back("features", features);
  kv.emplace_back("seed", std::to_string(seed));
  return kv;
}

void ApplyConfig(const std::map<std::string, std::string> &values, RunnerConfig *runner,
                 SynthConfig *synth) {
  for (const auto &[key, value] : values) {
    if (key == "seed") {
      auto v = ParseUint(TrimView(value));
      if (!v) throw Error("config key 'seed': expected an unsigned integer");
      if (runner) runner->seed = runner->train.seed = *v;
      if (synth) synth->seed = *v;
      continue;
    }
    bool used = false;
    if (runner) {
      if (key == "val_ratio") {
        runner->val_ratio = ToDouble(key, value);
        used = true;
      } else if (key == "features") {
        runner->features = std::string(TrimView(value));
        used = true;
      } else if (key == "workers") {
        runner->workers = ToInt(key, value);
        used = true;
      } else {
        used = runner->train.Set(key, value) || SetHead(runner->hyper, key, value);
      }
    }
    if (!used && synth) used = SetSynth(*synth, key, value);
    if (!used) throw Error("unknown config key '" + key + "'");
  }
}

RunData PrepareRunData(const PlanEntry &entry, const std::vector<DatasetManifest> &manifests,
                       double val_ratio, std::uint64_t seed) {
  RunData d;
  const Attribute a = entry.attribute;
  std::vector<const DatasetManifest *> vocab;
  for (const std::string &id : entry.train_datasets) {
    const DatasetManifest &m = FindManifest(manifests, id);
    vocab.push_back(&m);
    DatasetManifest sub{m.dataset_id, WithAttribute(m.records, a)};
    TrainValSplit s = SplitTrainVal(sub, val_ratio, seed);
    d.train.insert(d.train.end(), s.train.begin(), s.train.end());
    d.val.insert(d.val.end(), s.val.begin(), s.val.end());
  }
  for (const std::string &id : entry.test_datasets) {
    const DatasetManifest &m = FindManifest(manifests, id);
    if (std::find(vocab.begin(), vocab.end(), &m) == vocab.end()) vocab.push_back(&m);
    std::vector<SegmentRecord> &out = d.test[id];
    for (const SegmentRecord &r : WithAttribute(m.records, a))
      if (r.split == Split::kTest) out.push_back(r);
  }
  if (IsCategorical(a)) d.space = HarmonizeLabels(vocab, a);
  return d;
}

std::uint64_t RunSeed(const PlanEntry &entry, std::uint64_t global_seed) {
  return Mix64(global_seed, Fnv1a64(entry.Describe()));
}

std::string RunHash(const PlanEntry &entry, const RunnerConfig &cfg,
                    const std::vector<DatasetManifest> &manifests, const StoreSet &stores) {
  std::ostringstream desc;
  desc << entry.Describe() << '\n';
  for (const auto &[k, v] : cfg.ToKeyValues()) desc << k << '=' << v << '\n';
  desc << "stores=" << HexU64(stores.Fingerprint()) << '\n';
  std::vector<std::string> ids = entry.train_datasets;
  ids.insert(ids.end(), entry.test_datasets.begin(), entry.test_datasets.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  for (const std::string &id : ids)
    desc << "manifest " << id << '=' << HexU64(Fnv1a64(ManifestToText(FindManifest(manifests, id))))
         << '\n';
  return HexU64(Fnv1a64(desc.str()));
}

}  // namespace satt
