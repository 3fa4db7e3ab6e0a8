// satt/synth.h

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

#ifndef SATT_SYNTH_H_
#define SATT_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <vector>

#include "satt/corpus.h"
#include "satt/embed_store.h"

namespace satt {

// Attribute-conditioned synthetic frame features.  Every frame of a segment is
//
//   separation * sum_a mean(a, class_a) + age_slope * (age - 40) * u_age + N(0, noise_sigma^2)
//
// where mean(a, c) and u_age are unit vectors drawn from the global seed and
// keyed by (attribute, canonical class name), so they do not depend on which
// other classes or segments exist.  Each segment draws its frame count and
// noise from Mix64(seed, Fnv1a64(segment_id)).
struct SynthConfig {
  int dim = 768;
  int frames_min = 20;
  int frames_max = 40;
  double separation = 1.0;
  double noise_sigma = 1.0;
  double age_slope = 0.1;
  std::uint64_t seed = 0;

  void Validate() const;
};

using LabelSpaces = std::map<Attribute, LabelSpace>;

/// Fixed unit vector for one attribute class.
Eigen::VectorXd SynthClassMean(const SynthConfig &cfg, Attribute attribute,
                               const std::string &canonical_class);
Eigen::VectorXd SynthAgeDirection(const SynthConfig &cfg);
/// Noise-free frame value of a record (what the frames scatter around).
Eigen::VectorXd SynthCenter(const SegmentRecord &record, const LabelSpaces &spaces,
                            const SynthConfig &cfg);
FeatureSequence SynthSequence(const SegmentRecord &record, const LabelSpaces &spaces,
                              const SynthConfig &cfg);

/// Writes one synthetic sequence per manifest record.  Categorical
/// attributes contribute only when a label space for them is supplied.
EmbeddingStore SynthGenerate(const std::vector<const DatasetManifest *> &manifests,
                             const LabelSpaces &spaces, const SynthConfig &cfg,
                             const std::filesystem::path &out);
EmbeddingStore SynthGenerate(const DatasetManifest &manifest, const LabelSpaces &spaces,
                             const SynthConfig &cfg, const std::filesystem::path &out);

/// Label spaces for every categorical attribute present in the manifests.
LabelSpaces LabelSpacesFor(const std::vector<const DatasetManifest *> &manifests);

/// Shape of a synthetic manifest.  Speakers get one label per requested
/// attribute; class names are "<attribute>_<k>" (gender uses female/male).
struct SynthManifestSpec {
  std::string dataset_id = "synth";
  int num_speakers = 200;
  int segments_per_speaker = 10;
  double test_fraction = 0.2;
  std::vector<Attribute> attributes = {Attribute::kAge, Attribute::kGender};
  std::map<Attribute, int> num_classes;  // categorical attributes; default 4
  double age_min = 18;
  double age_max = 80;
  double segment_seconds = 3.0;
  std::uint64_t seed = 0;
};

DatasetManifest MakeSyntheticManifest(const SynthManifestSpec &spec);

}  // namespace satt

#endif  // SATT_SYNTH_H_
