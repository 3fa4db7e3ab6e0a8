// corpus_test.cc

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
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "satt/corpus.h"
#include "support/standard_corpora.h"
#include "support/temp_dir.h"

namespace satt {
namespace {

const std::string kHeader = std::string(kManifestHeader) + "\n";

// Independent canonicalization: lowercase, trim, single spaces.
std::string OracleCanonical(const std::string &raw) {
  std::istringstream words(raw);
  std::string w, out;
  while (words >> w) {
    if (!out.empty()) out += ' ';
    for (char c : w) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::set<std::string> OracleVocabulary(const std::vector<DatasetManifest> &ms, Attribute a) {
  std::set<std::string> out;
  for (const DatasetManifest &m : ms)
    for (const SegmentRecord &r : m.records)
      if (r.Label(a)) out.insert(OracleCanonical(*r.Label(a)));
  return out;
}

const DatasetManifest &Find(const std::vector<DatasetManifest> &ms, const std::string &id) {
  for (const DatasetManifest &m : ms)
    if (m.dataset_id == id) return m;
  throw Error("fixture missing " + id);
}

TEST_SUITE("corpus") {

TEST_CASE("manifest text parses and round-trips") {
  const std::string text = kHeader +
                           "d,s1,a,/x/a.wav,dev,3.5,31,F,,,\n"
                           "d,s1,b,,dev,,31,F,,,\n"
                           "d,s2,c,,test,1,,,arabic,egypt,BS\n";
  DatasetManifest m = ParseManifestText(text, "fallback");
  REQUIRE(m.records.size() == 3);
  CHECK(m.dataset_id == "d");
  CHECK(m.records[0].audio_path == "/x/a.wav");
  CHECK(m.records[0].duration_s == 3.5);
  CHECK(m.records[0].age == 31.0);
  CHECK(m.records[1].audio_path == std::nullopt);
  CHECK(m.records[1].duration_s == std::nullopt);
  CHECK(m.records[2].split == Split::kTest);
  CHECK(m.records[2].gender == std::nullopt);
  CHECK(m.records[2].education == "BS");
  // Missing cells are absent, never empty strings.
  for (const SegmentRecord &r : m.records)
    for (Attribute a : kCategoricalAttributes)
      if (r.Label(a)) CHECK_FALSE(r.Label(a)->empty());

  DatasetManifest again = ParseManifestText(ManifestToText(m), "x");
  CHECK(again.records == m.records);

  testing::TempDir dir;
  WriteManifest(m, dir / "m.csv");
  CHECK(ParseManifest(dir / "m.csv").records == m.records);
}

TEST_CASE("header-only manifest is empty and named after the file") {
  testing::TempDir dir;
  testing::WriteText(dir / "timit.csv", kHeader);
  DatasetManifest m = ParseManifest(dir / "timit.csv");
  CHECK(m.records.empty());
  CHECK(m.dataset_id == "timit");
  ManifestSummary s = Summarize(m);
  CHECK(s.dev.speakers == 0);
  CHECK(s.dev.segments == 0);
  CHECK(s.test.segments == 0);
}

TEST_CASE("malformed rows name the line and field") {
  auto error_of = [](const std::string &text) {
    try {
      ParseManifestText(text, "x");
    } catch (const Error &e) {
      return std::string(e.what());
    }
    return std::string();
  };
  std::string e = error_of(kHeader + "d,s1,a,,dev,,31,,,,\nd,s1,b,,dev,,abc,,,,\n");
  CHECK(e.find("line 3") != std::string::npos);
  CHECK(e.find("age") != std::string::npos);
  CHECK(error_of(kHeader + "d,s1,a,,dev,,31,,,,\nd,s1,a,,dev,,31,,,,\n").find("duplicate") !=
        std::string::npos);
  CHECK(error_of(kHeader + "d,s1,a,,train,,,,,,\n").find("split") != std::string::npos);
  CHECK(error_of(kHeader + "d,s1,a,,dev,,150,,,,\n").find("age") != std::string::npos);
  CHECK(error_of(kHeader + "d,s1,a,,dev,,\n").find("fields") != std::string::npos);
  CHECK(error_of("dataset_id,speaker\n").find("header") != std::string::npos);
  CHECK_FALSE(error_of(kHeader + "d,s1,a,,dev,,,,,,\nd,s1,b,,test,,,,,,\n").empty());
}

TEST_CASE("validate rejects mixed splits per speaker") {
  DatasetManifest m;
  m.dataset_id = "d";
  SegmentRecord r;
  r.dataset_id = "d";
  r.speaker_id = "s";
  r.segment_id = "1";
  m.records.push_back(r);
  r.segment_id = "2";
  r.split = Split::kTest;
  m.records.push_back(r);
  CHECK_THROWS_AS(m.Validate(), Error);
}

TEST_CASE("label canonicalization") {
  CHECK(CanonicalLabel("  Hong   Kong\t") == "hong kong");
  CHECK(CanonicalGender("F") == "female");
  CHECK(CanonicalGender(" Male ") == "male");
  CHECK(CanonicalGender("other") == std::nullopt);
  LabelSpace space(Attribute::kCountry, {"usa", "india"});
  CHECK(space.classes() == std::vector<std::string>{"india", "usa"});
  CHECK(space.IndexOf(" USA ") == 1);
  CHECK(space.IndexOf("france") == std::nullopt);
}

TEST_CASE("standard corpus fixtures summarize to the reference counts") {
  auto ms = testing::StandardManifests(true);
  for (const testing::CorpusShape &shape : testing::kStandardCorpora) {
    CAPTURE(shape.dataset_id);
    const DatasetManifest &m = Find(ms, shape.dataset_id);
    CHECK_NOTHROW(m.Validate());
    ManifestSummary s = Summarize(m);
    CHECK(s.dev.speakers == shape.dev_speakers);
    CHECK(s.test.speakers == shape.test_speakers);
    CHECK(s.dev.segments == shape.dev_segments);
    CHECK(s.test.segments == shape.test_segments);
    REQUIRE(s.dev.hours);
    CHECK(*s.dev.hours == doctest::Approx(shape.dev_hours).epsilon(1e-9));
    CHECK(*s.test.hours == doctest::Approx(shape.test_hours).epsilon(1e-9));
  }
  // Spot values of the reference counts.
  ManifestSummary timit = Summarize(Find(ms, "timit"));
  CHECK(timit.dev.speakers == 461);
  CHECK(timit.test.speakers == 168);
  ManifestSummary saa = Summarize(Find(ms, "saa"));
  CHECK(saa.dev.segments == 1712);
  CHECK(saa.test.speakers == 428);
  ManifestSummary vox = Summarize(Find(ms, "voxceleb2"));
  CHECK(vox.dev.speakers == 3680);
  CHECK(vox.dev.segments == 106922);
}

TEST_CASE("hours are unknown when any duration is missing") {
  DatasetManifest m = testing::StandardManifest(testing::ShapeOf("l2arctic"), false);
  m.records[0].duration_s.reset();
  ManifestSummary s = Summarize(m);
  CHECK_FALSE(s.dev.hours);
  CHECK(s.test.hours);
}

TEST_CASE("harmonized vocabularies match the reference class counts") {
  auto ms = testing::StandardManifests();
  CHECK(HarmonizeLabels({Find(ms, "l2arctic")}, Attribute::kNativeLanguage).size() == 6);
  CHECK(HarmonizeLabels({Find(ms, "saa")}, Attribute::kCountry).size() == 141);
  CHECK(HarmonizeLabels({Find(ms, "saa")}, Attribute::kNativeLanguage).size() == 202);
  CHECK(HarmonizeLabels({Find(ms, "timit")}, Attribute::kEducation).size() == 5);
  CHECK(HarmonizeLabels({Find(ms, "common_voice")}, Attribute::kCountry).size() == 17);

  std::vector<DatasetManifest> pair = {Find(ms, "saa"), Find(ms, "l2arctic")};
  LabelSpace both = HarmonizeLabels(pair, Attribute::kNativeLanguage);
  std::set<std::string> oracle = OracleVocabulary(pair, Attribute::kNativeLanguage);
  CHECK(both.classes() == std::vector<std::string>(oracle.begin(), oracle.end()));
  CHECK(both.size() <= 208);
  for (const SegmentRecord &r : Find(ms, "l2arctic").records)
    CHECK(both.IndexOf(*r.native_language));

  LabelSpace gender = HarmonizeLabels(ms, Attribute::kGender);
  CHECK(gender.classes() == std::vector<std::string>{"female", "male"});
  CHECK_THROWS_AS(HarmonizeLabels({Find(ms, "timit")}, Attribute::kCountry), Error);
}

TEST_CASE("harmonization is idempotent and sorted") {
  auto ms = testing::StandardManifests();
  for (Attribute a : kCategoricalAttributes) {
    LabelSpace first = HarmonizeLabels(ms, a);
    CHECK(std::is_sorted(first.classes().begin(), first.classes().end()));
    DatasetManifest vocab;
    vocab.dataset_id = "v";
    for (std::size_t i = 0; i < first.classes().size(); ++i) {
      SegmentRecord r;
      r.dataset_id = "v";
      r.speaker_id = r.segment_id = std::to_string(i);
      r.Label(a) = first.classes()[i];
      vocab.records.push_back(r);
    }
    CHECK(HarmonizeLabels({vocab}, a) == first);
    for (int k = 0; k < first.size(); ++k) CHECK(first.IndexOf(first.classes()[k]) == k);
  }
}

TEST_CASE("availability matches the reference pattern") {
  auto ms = testing::StandardManifests();
  AvailabilityMatrix m = ComputeAvailability(ms);
  // Rows: saa, timit, voxceleb2, l2arctic, common_voice.
  // Columns: age, gender, native language, country, education.
  const std::map<std::string, std::array<int, 5>> expected = {
      {"saa", {1, 1, 202, 141, 0}},
      {"timit", {1, 1, 0, 0, 5}},
      {"voxceleb2", {1, 1, 0, 0, 0}},
      {"l2arctic", {0, 1, 6, 0, 0}},
      {"common_voice", {0, 1, 0, 17, 0}},
  };
  CHECK(m.datasets ==
        std::vector<std::string>{"common_voice", "l2arctic", "saa", "timit", "voxceleb2"});
  for (const auto &[dataset, row] : expected) {
    for (std::size_t c = 0; c < kAllAttributes.size(); ++c) {
      Attribute a = kAllAttributes[c];
      CAPTURE(dataset);
      CAPTURE(AttributeName(a));
      CHECK(m.Has(dataset, a) == (row[c] != 0));
      if (c >= 2) {
        if (row[c]) CHECK(m.ClassCount(dataset, a) == row[c]);
        else CHECK_FALSE(m.ClassCount(dataset, a));
      }
    }
  }
  CHECK(m.ClassCount("saa", Attribute::kGender) == 2);
}

TEST_CASE("unlabeled manifest gives an all-false row") {
  DatasetManifest m;
  m.dataset_id = "bare";
  SegmentRecord r;
  r.dataset_id = "bare";
  r.speaker_id = r.segment_id = "1";
  m.records.push_back(r);
  AvailabilityMatrix a = ComputeAvailability({m});
  for (Attribute attr : kAllAttributes) CHECK_FALSE(a.Has("bare", attr));
}

TEST_CASE("train/val split: exact fraction and determinism") {
  DatasetManifest m;
  m.dataset_id = "d";
  for (int s = 0; s < 10; ++s)
    for (int j = 0; j < 3; ++j) {
      SegmentRecord r;
      r.dataset_id = "d";
      r.speaker_id = "s" + std::to_string(s);
      r.segment_id = r.speaker_id + "_" + std::to_string(j);
      m.records.push_back(r);
    }
  TrainValSplit a = SplitTrainVal(m, 0.1, 42);
  TrainValSplit b = SplitTrainVal(m, 0.1, 42);
  std::set<std::string> val_spk, train_spk;
  for (const auto &r : a.val) val_spk.insert(r.speaker_id);
  for (const auto &r : a.train) train_spk.insert(r.speaker_id);
  CHECK(val_spk.size() == 1);
  CHECK(train_spk.size() == 9);
  for (const std::string &s : val_spk) CHECK_FALSE(train_spk.count(s));
  CHECK(a.val == b.val);
  CHECK(a.train == b.train);
  CHECK_THROWS_AS(SplitTrainVal(m, 0.0, 1), Error);
}

TEST_CASE("train/val split property: speaker-disjoint over many seeds") {
  DatasetManifest m = testing::StandardManifest(testing::ShapeOf("l2arctic"), true);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    const std::uint64_t seed = rng();
    TrainValSplit s = SplitTrainVal(m, 0.1, seed);
    std::map<std::string, int> side;
    for (const auto &r : s.train) side[r.speaker_id] |= 1;
    for (const auto &r : s.val) side[r.speaker_id] |= 2;
    int val = 0;
    for (const auto &[spk, bits] : side) {
      CHECK(bits != 3);
      val += bits == 2;
    }
    CHECK((val == 1 || val == 2));
    CHECK(side.size() == 19);
    CHECK(s.train.size() + s.val.size() == 21212);
  }
}

TEST_CASE("train/val split needs two dev speakers") {
  DatasetManifest m;
  m.dataset_id = "d";
  SegmentRecord r;
  r.dataset_id = "d";
  r.speaker_id = "only";
  r.segment_id = "1";
  m.records.push_back(r);
  CHECK_THROWS_AS(SplitTrainVal(m, 0.1, 0), Error);
}

}  // TEST_SUITE

}  // namespace
}  // namespace satt
