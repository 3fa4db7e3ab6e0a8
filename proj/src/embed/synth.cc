// embed/synth.cc

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

#include "satt/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace satt {

namespace {

Eigen::VectorXd UnitVector(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(dim);
  do {
    for (int i = 0; i < dim; ++i) v[i] = normal(rng);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

}  // namespace

void SynthConfig::Validate() const {
  if (dim <= 0) throw Error("synth dim must be positive");
  if (frames_min < 1 || frames_max < frames_min)
    throw Error("synth frame range must satisfy 1 <= frames_min <= frames_max");
  if (!(separation >= 0)) throw Error("synth separation must be >= 0");
  if (!(noise_sigma >= 0)) throw Error("synth noise_sigma must be >= 0");
  if (!std::isfinite(age_slope)) throw Error("synth age_slope must be finite");
}

Eigen::VectorXd SynthClassMean(const SynthConfig &cfg, Attribute attribute,
                               const std::string &canonical_class) {
  std::string key = std::string(AttributeName(attribute)) + ":" + canonical_class;
  return UnitVector(cfg.dim, Mix64(cfg.seed, Fnv1a64(key)));
}

Eigen::VectorXd SynthAgeDirection(const SynthConfig &cfg) {
  return UnitVector(cfg.dim, Mix64(cfg.seed, Fnv1a64("age")));
}

Eigen::VectorXd SynthCenter(const SegmentRecord &record, const LabelSpaces &spaces,
                            const SynthConfig &cfg) {
  Eigen::VectorXd center = Eigen::VectorXd::Zero(cfg.dim);
  for (const auto &[attribute, space] : spaces) {
    auto k = space.IndexOf(record);
    if (!k) continue;
    center += cfg.separation * SynthClassMean(cfg, attribute, space.classes()[*k]);
  }
  if (record.age)
    center += cfg.age_slope * (*record.age - 40.0) * SynthAgeDirection(cfg);
  return center;
}

FeatureSequence SynthSequence(const SegmentRecord &record, const LabelSpaces &spaces,
                              const SynthConfig &cfg) {
  Eigen::VectorXd center = SynthCenter(record, spaces, cfg);
  std::mt19937_64 rng(Mix64(cfg.seed, Fnv1a64(record.segment_id)));
  std::uniform_int_distribution<int> length(cfg.frames_min, cfg.frames_max);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int frames = length(rng);
  FeatureSequence seq;
  seq.segment_id = record.segment_id;
  seq.frames.resize(frames, cfg.dim);
  for (int t = 0; t < frames; ++t)
    for (int d = 0; d < cfg.dim; ++d)
      seq.frames(t, d) = static_cast<float>(center[d] + cfg.noise_sigma * normal(rng));
  return seq;
}

EmbeddingStore SynthGenerate(const std::vector<const DatasetManifest *> &manifests,
                             const LabelSpaces &spaces, const SynthConfig &cfg,
                             const std::filesystem::path &out) {
  cfg.Validate();
  EmbeddingStoreWriter writer(out, cfg.dim);
  for (const DatasetManifest *m : manifests)
    for (const SegmentRecord &r : m->records) writer.Add(SynthSequence(r, spaces, cfg));
  return writer.Finish();
}

EmbeddingStore SynthGenerate(const DatasetManifest &manifest, const LabelSpaces &spaces,
                             const SynthConfig &cfg, const std::filesystem::path &out) {
  if (manifest.records.empty())
    throw Error("cannot synthesize embeddings for an empty manifest");
  return SynthGenerate(std::vector<const DatasetManifest *>{&manifest}, spaces, cfg, out);
}

LabelSpaces LabelSpacesFor(const std::vector<const DatasetManifest *> &manifests) {
  LabelSpaces spaces;
  for (Attribute a : kCategoricalAttributes) {
    bool any = false;
    for (const DatasetManifest *m : manifests)
      for (const SegmentRecord &r : m->records)
        if (r.Has(a)) {
          any = true;
          break;
        }
    if (any) spaces.emplace(a, HarmonizeLabels(manifests, a));
  }
  return spaces;
}

DatasetManifest MakeSyntheticManifest(const SynthManifestSpec &spec) {
  if (spec.num_speakers < 2 || spec.segments_per_speaker < 1)
    throw Error("synthetic manifest needs >= 2 speakers and >= 1 segment each");
  DatasetManifest m;
  m.dataset_id = spec.dataset_id;
  std::mt19937_64 rng(Mix64(spec.seed, Fnv1a64(spec.dataset_id)));
  std::uniform_real_distribution<double> age(spec.age_min, spec.age_max);
  const int n_test = std::clamp(
      static_cast<int>(std::lround(spec.test_fraction * spec.num_speakers)), 0,
      spec.num_speakers - 1);
  for (int s = 0; s < spec.num_speakers; ++s) {
    SegmentRecord base;
    base.dataset_id = spec.dataset_id;
    char spk[32];
    std::snprintf(spk, sizeof(spk), "spk%04d", s);
    base.speaker_id = spk;
    base.split = s < spec.num_speakers - n_test ? Split::kDev : Split::kTest;
    base.duration_s = spec.segment_seconds;
    for (Attribute a : spec.attributes) {
      if (a == Attribute::kAge) {
        base.age = std::round(age(rng) * 10.0) / 10.0;
        continue;
      }
      int k = 4;
      if (auto it = spec.num_classes.find(a); it != spec.num_classes.end()) k = it->second;
      if (a == Attribute::kGender) {
        base.gender = std::uniform_int_distribution<int>(0, 1)(rng) ? "male" : "female";
        continue;
      }
      int c = std::uniform_int_distribution<int>(0, k - 1)(rng);
      base.Label(a) = std::string(AttributeName(a)) + "_" + std::to_string(c);
    }
    for (int g = 0; g < spec.segments_per_speaker; ++g) {
      SegmentRecord r = base;
      r.segment_id = spec.dataset_id + "-" + base.speaker_id + "_" + std::to_string(g);
      m.records.push_back(std::move(r));
    }
  }
  return m;
}

}  // namespace satt
