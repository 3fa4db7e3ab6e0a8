// trainer/checkpoint.cc

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

#include "satt/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace satt {

static_assert(std::endian::native == std::endian::little, "little-endian host required");

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string_view TaskKindName(TaskKind k) {
  return k == TaskKind::kRegression ? "regression" : "classification";
}

std::string_view InputKindName(InputKind k) {
  return k == InputKind::kPooled ? "pooled" : "sequence";
}

json ToJson(const Checkpoint &c) {
  json j;
  j["architecture"] = ArchitectureName(c.architecture);
  j["input_dim"] = c.input_dim;
  j["task"] = {{"attribute", AttributeName(c.task.attribute)},
               {"kind", TaskKindName(c.task.kind)},
               {"num_classes", c.task.num_classes},
               {"input_kind", InputKindName(c.task.input_kind)}};
  j["hyper"] = {{"mlp_dropout", c.hyper.mlp_dropout},   {"lstm_hidden", c.hyper.lstm_hidden},
                {"lstm_dropout", c.hyper.lstm_dropout}, {"resnet_blocks", c.hyper.resnet_blocks},
                {"map_height", c.hyper.map_height},     {"map_width", c.hyper.map_width}};
  json cfg = json::array();
  for (const auto &[k, v] : c.train_config) cfg.push_back({k, v});
  j["train_config"] = cfg;
  j["classes"] = c.classes;
  j["age_normalization"] = {{"mean", c.age_mean}, {"stddev", c.age_stddev}};
  j["best_val_metric"] = c.best_val_metric;
  j["best_epoch"] = c.best_epoch;
  j["extra"] = c.extra;
  json tensors = json::array();
  for (const StoredTensor &t : c.tensors)
    tensors.push_back({{"name", t.name}, {"shape", t.shape}, {"trainable", t.trainable}});
  j["tensors"] = tensors;
  return j;
}

Checkpoint FromJson(const json &j) {
  Checkpoint c;
  c.architecture = ParseArchitecture(j.at("architecture").get<std::string>());
  c.input_dim = j.at("input_dim").get<int>();
  const json &t = j.at("task");
  c.task.attribute = ParseAttribute(t.at("attribute").get<std::string>());
  c.task.kind = t.at("kind").get<std::string>() == "regression" ? TaskKind::kRegression
                                                                : TaskKind::kClassification;
  c.task.num_classes = t.at("num_classes").get<int>();
  c.task.input_kind =
      t.at("input_kind").get<std::string>() == "pooled" ? InputKind::kPooled : InputKind::kSequence;
  const json &h = j.at("hyper");
  c.hyper.mlp_dropout = h.at("mlp_dropout").get<double>();
  c.hyper.lstm_hidden = h.at("lstm_hidden").get<int>();
  c.hyper.lstm_dropout = h.at("lstm_dropout").get<double>();
  c.hyper.resnet_blocks = h.at("resnet_blocks").get<int>();
  c.hyper.map_height = h.at("map_height").get<int>();
  c.hyper.map_width = h.at("map_width").get<int>();
  for (const json &kv : j.at("train_config"))
    c.train_config.emplace_back(kv.at(0).get<std::string>(), kv.at(1).get<std::string>());
  c.classes = j.at("classes").get<std::vector<std::string>>();
  c.age_mean = j.at("age_normalization").at("mean").get<double>();
  c.age_stddev = j.at("age_normalization").at("stddev").get<double>();
  c.best_val_metric = j.at("best_val_metric").get<double>();
  c.best_epoch = j.at("best_epoch").get<int>();
  c.extra = j.at("extra").get<std::map<std::string, std::string>>();
  for (const json &tj : j.at("tensors")) {
    StoredTensor st;
    st.name = tj.at("name").get<std::string>();
    st.shape = tj.at("shape").get<std::vector<int>>();
    st.trainable = tj.at("trainable").get<bool>();
    c.tensors.push_back(std::move(st));
  }
  return c;
}

}  // namespace

Checkpoint Checkpoint::FromModel(const Model<float> &model) {
  Checkpoint c;
  c.architecture = model.architecture();
  c.input_dim = model.input_dim();
  c.task = model.task();
  c.hyper = model.hyper();
  for (const Tensor<float> &t : model.params().tensors())
    c.tensors.push_back({t.name, t.shape, t.trainable, t.value});
  return c;
}

Model<float> Checkpoint::Instantiate() const {
  if (task.kind == TaskKind::kClassification &&
      static_cast<int>(classes.size()) != task.num_classes)
    throw Error("checkpoint lists " + std::to_string(classes.size()) + " classes for a " +
                std::to_string(task.num_classes) + "-class task");
  Model<float> model = BuildModel<float>(architecture, input_dim, task, hyper, 0);
  auto &built = model.params().tensors();
  if (built.size() != tensors.size())
    throw Error("checkpoint holds " + std::to_string(tensors.size()) + " tensors, model expects " +
                std::to_string(built.size()));
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    const StoredTensor &s = tensors[i];
    Tensor<float> &t = built[i];
    if (s.name != t.name || s.shape != t.shape || s.trainable != t.trainable ||
        s.values.size() != t.value.size())
      throw Error("checkpoint tensor '" + s.name + "' does not match model tensor '" + t.name +
                  "'");
    t.value = s.values;
  }
  return model;
}

void Checkpoint::RequireLabelSpace(const LabelSpace &space) const {
  if (space.attribute() != task.attribute)
    throw Error("checkpoint predicts " + std::string(AttributeName(task.attribute)) + ", not " +
                std::string(AttributeName(space.attribute())));
  if (space.classes() != classes)
    throw Error("checkpoint has a " + std::to_string(classes.size()) +
                "-class label space, request has " + std::to_string(space.size()));
}

void SaveCheckpoint(const Checkpoint &ckpt, const fs::path &path) {
  const std::string meta = ToJson(ckpt).dump();
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write checkpoint " + tmp.string());
    const std::uint32_t version = kCheckpointVersion;
    const std::uint64_t meta_bytes = meta.size();
    out.write(kCheckpointMagic, 4);
    out.write(reinterpret_cast<const char *>(&version), 4);
    out.write(reinterpret_cast<const char *>(&meta_bytes), 8);
    out.write(meta.data(), static_cast<std::streamsize>(meta.size()));
    for (const StoredTensor &t : ckpt.tensors)
      out.write(reinterpret_cast<const char *>(t.values.data()),
                static_cast<std::streamsize>(t.values.size() * sizeof(float)));
    if (!out.flush()) throw Error("failed writing checkpoint " + tmp.string());
  }
  fs::rename(tmp, path);
}

Checkpoint LoadCheckpoint(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string bytes = ss.str();
  const std::string where = "checkpoint " + path.string() + ": ";
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kCheckpointMagic, 4) != 0)
    throw Error(where + "not a checkpoint file");
  std::uint32_t version;
  std::uint64_t meta_bytes;
  std::memcpy(&version, bytes.data() + 4, 4);
  std::memcpy(&meta_bytes, bytes.data() + 8, 8);
  if (version != kCheckpointVersion)
    throw Error(where + "unsupported version " + std::to_string(version));
  if (meta_bytes > bytes.size() - 16) throw Error(where + "truncated metadata");
  Checkpoint c;
  try {
    c = FromJson(json::parse(bytes.substr(16, meta_bytes)));
  } catch (const json::exception &e) {
    throw Error(where + "bad metadata: " + e.what());
  }
  std::size_t offset = 16 + meta_bytes;
  for (StoredTensor &t : c.tensors) {
    std::size_t n = 1;
    for (int d : t.shape) {
      if (d < 0) throw Error(where + "negative tensor dimension");
      n *= static_cast<std::size_t>(d);
    }
    if (n > (bytes.size() - offset) / sizeof(float)) throw Error(where + "truncated parameters");
    t.values.resize(n);
    std::memcpy(t.values.data(), bytes.data() + offset, n * sizeof(float));
    offset += n * sizeof(float);
  }
  if (offset != bytes.size()) throw Error(where + "trailing bytes after parameters");
  return c;
}

}  // namespace satt
