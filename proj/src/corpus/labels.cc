// corpus/labels.cc

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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <unordered_set>

#include "satt/corpus.h"

namespace satt {

std::string CanonicalLabel(std::string_view raw) {
  std::string out;
  bool pending_space = false;
  for (char c : TrimView(raw)) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

std::optional<std::string> CanonicalGender(std::string_view raw) {
  std::string c = CanonicalLabel(raw);
  if (c == "f" || c == "female" || c == "woman" || c == "w") return "female";
  if (c == "m" || c == "male" || c == "man") return "male";
  return std::nullopt;
}

std::optional<std::string> CanonicalRecordLabel(const SegmentRecord &record,
                                                Attribute attribute) {
  const std::optional<std::string> &raw = record.Label(attribute);
  if (!raw) return std::nullopt;
  if (attribute == Attribute::kGender) return CanonicalGender(*raw);
  std::string c = CanonicalLabel(*raw);
  if (c.empty()) return std::nullopt;
  return c;
}

LabelSpace::LabelSpace(Attribute attribute, std::vector<std::string> classes)
    : attribute_(attribute), classes_(std::move(classes)) {
  if (!IsCategorical(attribute))
    throw Error("label spaces exist only for categorical attributes");
  for (std::string &c : classes_) c = CanonicalLabel(c);
  std::sort(classes_.begin(), classes_.end());
  if (std::adjacent_find(classes_.begin(), classes_.end()) != classes_.end())
    throw Error("label space for " + std::string(AttributeName(attribute)) +
                " has duplicate classes after canonicalization");
  for (std::size_t i = 0; i < classes_.size(); ++i)
    index_.emplace(classes_[i], static_cast<int>(i));
}

std::optional<int> LabelSpace::IndexOf(std::string_view label) const {
  std::optional<std::string> c;
  if (attribute_ == Attribute::kGender) c = CanonicalGender(label);
  else c = CanonicalLabel(label);
  if (!c) return std::nullopt;
  auto it = index_.find(*c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> LabelSpace::IndexOf(const SegmentRecord &record) const {
  const std::optional<std::string> &raw = record.Label(attribute_);
  if (!raw) return std::nullopt;
  return IndexOf(*raw);
}

LabelSpace HarmonizeLabels(const std::vector<const DatasetManifest *> &manifests,
                           Attribute attribute) {
  if (!IsCategorical(attribute))
    throw Error("cannot harmonize labels of a regression attribute");
  std::set<std::string> vocab;
  for (const DatasetManifest *m : manifests)
    for (const SegmentRecord &r : m->records)
      if (auto c = CanonicalRecordLabel(r, attribute)) vocab.insert(*c);
  if (vocab.empty())
    throw Error("no manifest carries attribute '" +
                std::string(AttributeName(attribute)) + "'");
  return LabelSpace(attribute, {vocab.begin(), vocab.end()});
}

LabelSpace HarmonizeLabels(const std::vector<DatasetManifest> &manifests,
                           Attribute attribute) {
  std::vector<const DatasetManifest *> ptrs;
  for (const DatasetManifest &m : manifests) ptrs.push_back(&m);
  return HarmonizeLabels(ptrs, attribute);
}

TrainValSplit SplitTrainVal(const DatasetManifest &manifest, double ratio,
                            std::uint64_t seed) {
  if (!(ratio > 0 && ratio < 1))
    throw Error("validation ratio must lie in (0, 1)");
  std::vector<std::pair<std::uint64_t, std::string>> ranked;
  std::unordered_set<std::string> seen;
  for (const SegmentRecord &r : manifest.records)
    if (r.split == Split::kDev && seen.insert(r.speaker_id).second)
      ranked.emplace_back(Mix64(seed, Fnv1a64(r.speaker_id)), r.speaker_id);
  const std::size_t n = ranked.size();
  if (n < 2)
    throw Error("dataset '" + manifest.dataset_id +
                "' needs at least 2 dev speakers for a validation split, has " +
                std::to_string(n));
  std::sort(ranked.begin(), ranked.end());
  std::size_t n_val = static_cast<std::size_t>(std::llround(ratio * double(n)));
  n_val = std::clamp<std::size_t>(n_val, 1, n - 1);
  std::unordered_set<std::string> val_speakers;
  for (std::size_t i = 0; i < n_val; ++i) val_speakers.insert(ranked[i].second);

  TrainValSplit out;
  for (const SegmentRecord &r : manifest.records) {
    if (r.split != Split::kDev) continue;
    (val_speakers.count(r.speaker_id) ? out.val : out.train).push_back(r);
  }
  return out;
}

bool AvailabilityMatrix::Has(const std::string &dataset,
                             Attribute attribute) const {
  auto it = cells.find({dataset, attribute});
  return it != cells.end() && it->second;
}

std::optional<int> AvailabilityMatrix::ClassCount(const std::string &dataset,
                                                  Attribute attribute) const {
  auto it = class_counts.find({dataset, attribute});
  if (it == class_counts.end()) return std::nullopt;
  return it->second;
}

AvailabilityMatrix ComputeAvailability(
    const std::vector<DatasetManifest> &manifests) {
  AvailabilityMatrix m;
  for (const DatasetManifest &man : manifests) {
    m.datasets.push_back(man.dataset_id);
    for (Attribute a : kAllAttributes) {
      bool any = std::any_of(man.records.begin(), man.records.end(),
                             [a](const SegmentRecord &r) { return r.Has(a); });
      m.cells[{man.dataset_id, a}] = any;
      std::optional<int> k;
      if (any && IsCategorical(a))
        k = HarmonizeLabels(std::vector<const DatasetManifest *>{&man}, a).size();
      m.class_counts[{man.dataset_id, a}] = k;
    }
  }
  std::sort(m.datasets.begin(), m.datasets.end());
  m.datasets.erase(std::unique(m.datasets.begin(), m.datasets.end()),
                   m.datasets.end());
  return m;
}

ManifestSummary Summarize(const DatasetManifest &manifest) {
  ManifestSummary s;
  std::unordered_set<std::string> speakers[2];
  double seconds[2] = {0, 0};
  bool complete[2] = {true, true};
  for (const SegmentRecord &r : manifest.records) {
    int k = r.split == Split::kDev ? 0 : 1;
    SplitStats &st = k == 0 ? s.dev : s.test;
    ++st.segments;
    speakers[k].insert(r.speaker_id);
    if (r.duration_s) seconds[k] += *r.duration_s;
    else complete[k] = false;
  }
  for (int k = 0; k < 2; ++k) {
    SplitStats &st = k == 0 ? s.dev : s.test;
    st.speakers = static_cast<std::int64_t>(speakers[k].size());
    if (complete[k]) st.hours = seconds[k] / 3600.0;
  }
  return s;
}

}  // namespace satt
