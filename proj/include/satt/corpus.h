// satt/corpus.h

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

#ifndef SATT_CORPUS_H_
#define SATT_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "satt/common.h"

namespace satt {

enum class Split { kDev, kTest };
std::string_view SplitName(Split split);

/// One audio segment with whatever demographic labels its corpus provides.
struct SegmentRecord {
  std::string dataset_id;
  std::string speaker_id;
  std::string segment_id;
  std::optional<std::string> audio_path;
  Split split = Split::kDev;
  std::optional<double> duration_s;
  std::optional<double> age;
  std::optional<std::string> gender;
  std::optional<std::string> native_language;
  std::optional<std::string> country;
  std::optional<std::string> education;

  /// Raw categorical label for `attribute` (must be categorical).
  const std::optional<std::string> &Label(Attribute attribute) const;
  std::optional<std::string> &Label(Attribute attribute);
  bool Has(Attribute attribute) const;

  bool operator==(const SegmentRecord &) const = default;
};

struct DatasetManifest {
  std::string dataset_id;
  std::vector<SegmentRecord> records;

  /// Throws Error if segment ids repeat, a split is shared by a speaker, an
  /// age is out of range, or a record names another dataset.
  void Validate() const;
};

/// Exact manifest header, in column order.
inline constexpr std::string_view kManifestHeader =
    "dataset_id,speaker_id,segment_id,audio_path,split,duration_s,age,gender,"
    "native_language,country,education";

/// Reads a manifest file.  Errors name the 1-based line number and column.
/// An empty (header-only) file yields a manifest whose dataset_id is the
/// file stem.
DatasetManifest ParseManifest(const std::filesystem::path &path);
DatasetManifest ParseManifestText(const std::string &text,
                                  const std::string &fallback_dataset_id);
void WriteManifest(const DatasetManifest &manifest,
                   const std::filesystem::path &path);
std::string ManifestToText(const DatasetManifest &manifest);

/// Trim, lowercase, collapse runs of internal whitespace to one space.
std::string CanonicalLabel(std::string_view raw);
/// Maps a raw gender label onto {"female", "male"}; nullopt for anything else.
std::optional<std::string> CanonicalGender(std::string_view raw);
/// Canonical label of a record for a categorical attribute; applies the
/// gender mapping.  nullopt when missing or (for gender) unmappable.
std::optional<std::string> CanonicalRecordLabel(const SegmentRecord &record,
                                                Attribute attribute);

/// Dense, lexicographically ordered class vocabulary for one attribute.
class LabelSpace {
 public:
  LabelSpace() = default;
  LabelSpace(Attribute attribute, std::vector<std::string> classes);

  Attribute attribute() const { return attribute_; }
  const std::vector<std::string> &classes() const { return classes_; }
  int size() const { return static_cast<int>(classes_.size()); }
  /// Looks up a raw or canonical label.
  std::optional<int> IndexOf(std::string_view label) const;
  /// Class index of a record's label, if it has one inside this space.
  std::optional<int> IndexOf(const SegmentRecord &record) const;

  bool operator==(const LabelSpace &other) const {
    return attribute_ == other.attribute_ && classes_ == other.classes_;
  }

 private:
  Attribute attribute_ = Attribute::kGender;
  std::vector<std::string> classes_;
  std::unordered_map<std::string, int> index_;
};

/// Sorted union of canonical labels of `attribute` across manifests.
/// Throws if no manifest carries the attribute.
LabelSpace HarmonizeLabels(const std::vector<const DatasetManifest *> &manifests,
                           Attribute attribute);
LabelSpace HarmonizeLabels(const std::vector<DatasetManifest> &manifests,
                           Attribute attribute);

struct TrainValSplit {
  std::vector<SegmentRecord> train;
  std::vector<SegmentRecord> val;
};

/// Speaker-disjoint split of the dev records.  Speakers are ranked by
/// Mix64(seed, Fnv1a64(speaker_id)); the first round(ratio * n) (clamped to
/// [1, n-1]) go to validation.
TrainValSplit SplitTrainVal(const DatasetManifest &manifest, double ratio,
                            std::uint64_t seed);

struct AvailabilityMatrix {
  std::vector<std::string> datasets;  // sorted
  std::map<std::pair<std::string, Attribute>, bool> cells;
  std::map<std::pair<std::string, Attribute>, std::optional<int>> class_counts;

  bool Has(const std::string &dataset, Attribute attribute) const;
  std::optional<int> ClassCount(const std::string &dataset,
                                Attribute attribute) const;
};

AvailabilityMatrix ComputeAvailability(
    const std::vector<DatasetManifest> &manifests);

struct SplitStats {
  std::int64_t speakers = 0;
  std::int64_t segments = 0;
  std::optional<double> hours;  // nullopt when any duration is missing
};

struct ManifestSummary {
  SplitStats dev;
  SplitStats test;
};

ManifestSummary Summarize(const DatasetManifest &manifest);

}  // namespace satt

#endif  // SATT_CORPUS_H_
