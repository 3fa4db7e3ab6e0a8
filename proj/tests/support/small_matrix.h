// support/small_matrix.h

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

#ifndef SATT_TESTS_SUPPORT_SMALL_MATRIX_H_
#define SATT_TESTS_SUPPORT_SMALL_MATRIX_H_

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "satt/runner.h"
#include "satt/synth.h"

namespace satt::testing {

// Small synthetic datasets with one shared store, for executor tests.
struct SmallMatrix {
  std::vector<DatasetManifest> manifests;
  std::unique_ptr<EmbeddingStore> store;
  StoreSet stores;
  RunnerConfig cfg;
};

inline std::unique_ptr<SmallMatrix> MakeSmallMatrix(const std::vector<std::string> &datasets,
                                                    std::vector<Attribute> attributes,
                                                    const std::filesystem::path &store_path,
                                                    int dim = 8) {
  auto m = std::make_unique<SmallMatrix>();
  std::uint64_t seed = 1;
  for (const std::string &id : datasets) {
    SynthManifestSpec spec;
    spec.dataset_id = id;
    spec.num_speakers = 24;
    spec.segments_per_speaker = 3;
    spec.attributes = attributes;
    spec.seed = seed++;
    m->manifests.push_back(MakeSyntheticManifest(spec));
  }
  std::vector<const DatasetManifest *> ptrs;
  for (const DatasetManifest &d : m->manifests) ptrs.push_back(&d);
  SynthConfig synth;
  synth.dim = dim;
  synth.frames_min = 2;
  synth.frames_max = 4;
  synth.separation = 2.0;
  synth.seed = 3;
  m->store = std::make_unique<EmbeddingStore>(
      SynthGenerate(ptrs, LabelSpacesFor(ptrs), synth, store_path));
  m->stores = StoreSet({m->store.get()});
  m->cfg.train.max_epochs = 4;
  m->cfg.train.batch_size = 16;
  m->cfg.hyper.lstm_hidden = 4;
  m->cfg.hyper.resnet_blocks = 1;
  m->cfg.seed = 11;
  return m;
}

}  // namespace satt::testing

#endif  // SATT_TESTS_SUPPORT_SMALL_MATRIX_H_
