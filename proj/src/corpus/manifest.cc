// corpus/manifest.cc

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

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "satt/corpus.h"

namespace satt {

namespace {

constexpr int kNumColumns = 11;
const char *const kColumnNames[kNumColumns] = {
    "dataset_id", "speaker_id", "segment_id", "audio_path",
    "split",      "duration_s", "age",        "gender",
    "native_language", "country", "education"};

[[noreturn]] void RowError(std::size_t line, std::string_view field,
                           const std::string &msg) {
  throw Error("manifest line " + std::to_string(line) + ", field '" +
              std::string(field) + "': " + msg);
}

std::optional<std::string> OptionalField(const std::string &s) {
  if (s.empty()) return std::nullopt;
  return s;
}

}  // namespace

std::string_view SplitName(Split split) {
  return split == Split::kDev ? "dev" : "test";
}

const std::optional<std::string> &SegmentRecord::Label(Attribute attribute) const {
  switch (attribute) {
    case Attribute::kGender: return gender;
    case Attribute::kNativeLanguage: return native_language;
    case Attribute::kCountry: return country;
    case Attribute::kEducation: return education;
    case Attribute::kAge: break;
  }
  throw Error("age is not a categorical attribute");
}

std::optional<std::string> &SegmentRecord::Label(Attribute attribute) {
  const auto &self = *this;
  return const_cast<std::optional<std::string> &>(self.Label(attribute));
}

bool SegmentRecord::Has(Attribute attribute) const {
  if (attribute == Attribute::kAge) return age.has_value();
  return CanonicalRecordLabel(*this, attribute).has_value();
}

void DatasetManifest::Validate() const {
  std::unordered_set<std::string> ids;
  std::unordered_map<std::string, Split> speaker_split;
  for (const SegmentRecord &r : records) {
    if (r.dataset_id != dataset_id)
      throw Error("segment '" + r.segment_id + "' belongs to dataset '" +
                  r.dataset_id + "', expected '" + dataset_id + "'");
    if (!ids.insert(r.segment_id).second)
      throw Error("duplicate segment_id '" + r.segment_id + "' in dataset '" +
                  dataset_id + "'");
    auto [it, inserted] = speaker_split.emplace(r.speaker_id, r.split);
    if (!inserted && it->second != r.split)
      throw Error("speaker '" + r.speaker_id + "' of dataset '" + dataset_id +
                  "' appears in both dev and test");
    if (r.age && !(std::isfinite(*r.age) && *r.age > 0 && *r.age < 120))
      throw Error("segment '" + r.segment_id + "' has age outside (0, 120)");
    if (r.duration_s && !(std::isfinite(*r.duration_s) && *r.duration_s >= 0))
      throw Error("segment '" + r.segment_id + "' has a negative duration");
  }
}

DatasetManifest ParseManifestText(const std::string &text,
                                  const std::string &fallback_dataset_id) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  DatasetManifest manifest;
  std::unordered_set<std::string> ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header) {
      if (line_no == 1 && StartsWith(line, "\xEF\xBB\xBF")) line.erase(0, 3);
      if (line != kManifestHeader)
        throw Error("manifest header mismatch at line " +
                    std::to_string(line_no) + "; expected '" +
                    std::string(kManifestHeader) + "'");
      have_header = true;
      continue;
    }
    if (TrimView(line).empty()) continue;
    std::vector<std::string> f = SplitString(line, ',');
    if (f.size() != kNumColumns)
      RowError(line_no, "*", "expected 11 fields, found " +
                                 std::to_string(f.size()));
    SegmentRecord r;
    for (int c : {0, 1, 2})
      if (f[c].empty()) RowError(line_no, kColumnNames[c], "must not be empty");
    r.dataset_id = f[0];
    r.speaker_id = f[1];
    r.segment_id = f[2];
    r.audio_path = OptionalField(f[3]);
    if (f[4] == "dev") r.split = Split::kDev;
    else if (f[4] == "test") r.split = Split::kTest;
    else RowError(line_no, "split", "expected dev or test, got '" + f[4] + "'");
    if (!f[5].empty()) {
      auto d = ParseDouble(f[5]);
      if (!d || !std::isfinite(*d) || *d < 0)
        RowError(line_no, "duration_s", "invalid duration '" + f[5] + "'");
      r.duration_s = d;
    }
    if (!f[6].empty()) {
      auto a = ParseDouble(f[6]);
      if (!a) RowError(line_no, "age", "not a number: '" + f[6] + "'");
      if (!std::isfinite(*a) || *a <= 0 || *a >= 120)
        RowError(line_no, "age", "outside (0, 120): '" + f[6] + "'");
      r.age = a;
    }
    r.gender = OptionalField(f[7]);
    r.native_language = OptionalField(f[8]);
    r.country = OptionalField(f[9]);
    r.education = OptionalField(f[10]);
    if (manifest.records.empty()) manifest.dataset_id = r.dataset_id;
    else if (r.dataset_id != manifest.dataset_id)
      RowError(line_no, "dataset_id", "mixes datasets '" + manifest.dataset_id +
                                          "' and '" + r.dataset_id + "'");
    if (!ids.insert(r.segment_id).second)
      RowError(line_no, "segment_id", "duplicate segment_id '" + r.segment_id + "'");
    manifest.records.push_back(std::move(r));
  }
  if (!have_header) throw Error("manifest is empty; missing header");
  if (manifest.records.empty()) manifest.dataset_id = fallback_dataset_id;
  manifest.Validate();
  return manifest;
}

DatasetManifest ParseManifest(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open manifest " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return ParseManifestText(buf.str(), path.stem().string());
  } catch (const Error &e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::string ManifestToText(const DatasetManifest &manifest) {
  std::string out(kManifestHeader);
  out += '\n';
  auto opt = [](const std::optional<std::string> &s) -> std::string {
    return s ? *s : std::string();
  };
  auto check = [](const SegmentRecord &r, const std::string &value) {
    if (value.find_first_of(",\n\r") != std::string::npos)
      throw Error("segment '" + r.segment_id +
                  "' has a field containing a comma or newline");
  };
  for (const SegmentRecord &r : manifest.records) {
    std::string fields[kNumColumns] = {
        r.dataset_id, r.speaker_id, r.segment_id, opt(r.audio_path),
        std::string(SplitName(r.split)),
        r.duration_s ? FormatDouble(*r.duration_s) : std::string(),
        r.age ? FormatDouble(*r.age) : std::string(), opt(r.gender),
        opt(r.native_language), opt(r.country), opt(r.education)};
    for (int c = 0; c < kNumColumns; ++c) {
      check(r, fields[c]);
      if (c) out += ',';
      out += fields[c];
    }
    out += '\n';
  }
  return out;
}

void WriteManifest(const DatasetManifest &manifest,
                   const std::filesystem::path &path) {
  manifest.Validate();
  std::string text = ManifestToText(manifest);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write manifest " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace satt
