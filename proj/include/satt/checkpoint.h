// satt/checkpoint.h

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

#ifndef SATT_CHECKPOINT_H_
#define SATT_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "satt/corpus.h"
#include "satt/heads/model.h"

namespace satt {

// File layout, little-endian:
//   "SATT"  u32 version=1  u64 metadata_bytes  metadata (UTF-8 JSON)
//   float32 values of every tensor in enumeration order
// The metadata lists architecture, input width, task, head hyperparameters,
// training configuration, class names, age normalization, best validation
// metric and the name/shape of every tensor.
inline constexpr char kCheckpointMagic[4] = {'S', 'A', 'T', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct StoredTensor {
  std::string name;
  std::vector<int> shape;
  bool trainable = true;
  std::vector<float> values;

  bool operator==(const StoredTensor &) const = default;
};

struct Checkpoint {
  Architecture architecture = Architecture::kMlp;
  int input_dim = 0;
  TaskSpec task;
  HeadConfig hyper;
  std::vector<std::pair<std::string, std::string>> train_config;
  std::vector<std::string> classes;  // classification label space, in index order
  double age_mean = 0;
  double age_stddev = 1;
  double best_val_metric = 0;
  int best_epoch = 0;
  std::map<std::string, std::string> extra;  // free-form run metadata
  std::vector<StoredTensor> tensors;

  /// Copies the description and current parameter values of `model`.
  static Checkpoint FromModel(const Model<float> &model);
  /// Rebuilds the model and loads the stored values.  Throws when the stored
  /// tensors do not match the rebuilt topology.
  Model<float> Instantiate() const;
  /// Throws unless the stored classes equal `space` (and the attribute matches).
  void RequireLabelSpace(const LabelSpace &space) const;
};

/// Writes to "<path>.tmp" and renames into place.
void SaveCheckpoint(const Checkpoint &ckpt, const std::filesystem::path &path);
/// Throws on a bad magic, unsupported version, malformed metadata or a
/// truncated payload.
Checkpoint LoadCheckpoint(const std::filesystem::path &path);

}  // namespace satt

#endif  // SATT_CHECKPOINT_H_
