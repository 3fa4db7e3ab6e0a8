// adapters_test.cc

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

#include <cstdint>
#include <set>
#include <string>

#include "doctest.h"
#include "satt/corpus.h"
#include "satt/corpus_adapters.h"
#include "support/temp_dir.h"

namespace satt {
namespace {

namespace fs = std::filesystem;
using testing::WriteText;

void PutU32(std::string &s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutU16(std::string &s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>(v >> 8));
}

// 16 kHz mono 16-bit RIFF header announcing `seconds` of audio (no samples).
std::string RiffHeader(double seconds) {
  const std::uint32_t rate = 16000, byte_rate = rate * 2;
  const auto data = static_cast<std::uint32_t>(seconds * byte_rate);
  std::string s = "RIFF";
  PutU32(s, 36 + data);
  s += "WAVEfmt ";
  PutU32(s, 16);
  PutU16(s, 1);
  PutU16(s, 1);
  PutU32(s, rate);
  PutU32(s, byte_rate);
  PutU16(s, 2);
  PutU16(s, 16);
  s += "data";
  PutU32(s, data);
  return s;
}

std::string NistHeader(int samples, int rate) {
  std::string h = "NIST_1A\n   1024\nsample_count -i " + std::to_string(samples) +
                  "\nsample_rate -i " + std::to_string(rate) + "\nend_head\n";
  h.resize(1024, ' ');
  return h;
}

std::set<std::string> Values(const DatasetManifest &m, Attribute a) {
  std::set<std::string> out;
  for (const SegmentRecord &r : m.records)
    if (r.Label(a)) out.insert(*r.Label(a));
  return out;
}

// Attributes carried by at least one record.
std::set<Attribute> Carried(const DatasetManifest &m) {
  std::set<Attribute> out;
  for (const SegmentRecord &r : m.records)
    for (Attribute a : kAllAttributes)
      if (r.Has(a)) out.insert(a);
  return out;
}

std::string ErrorOf(CorpusKind kind, const fs::path &root,
                    const std::optional<fs::path> &aux = {}) {
  try {
    AdaptCorpus(kind, root, aux);
  } catch (const Error &e) {
    return e.what();
  }
  return {};
}

void BuildTimit(const fs::path &root) {
  WriteText(root / "DOC" / "SPKRINFO.TXT",
            "; speaker table\n"
            ";ID  Sex DR Use  RecDate    BirthDate  Ht     Race Edu  Comments\n"
            "ABC0  F   1  TRN  03/03/86  06/17/60  5'05\"  WHT  BS\n"
            "DEF0  M   1  TST  03/03/86  01/01/50  6'00\"  BLK  PHD\n"
            "GHI0  M   2  TRN  03/03/86  ?\?/?\?/??  5'10\"  WHT  ??\n");
  WriteText(root / "TRAIN" / "DR1" / "FABC0" / "SA1.WAV", NistHeader(32000, 16000));
  WriteText(root / "TRAIN" / "DR1" / "FABC0" / "SX10.WAV", NistHeader(16000, 16000));
  WriteText(root / "TRAIN" / "DR1" / "FABC0" / "SA1.PHN", "unused\n");
  WriteText(root / "TRAIN" / "DR2" / "MGHI0" / "SA1.WAV", NistHeader(8000, 16000));
  WriteText(root / "TEST" / "DR1" / "MDEF0" / "SA2.WAV", NistHeader(24000, 16000));
}

TEST_SUITE("adapters") {

TEST_CASE("audio header durations") {
  testing::TempDir dir;
  WriteText(dir / "a.wav", RiffHeader(2.5));
  WriteText(dir / "b.wav", NistHeader(48000, 16000));
  WriteText(dir / "c.mp3", "ID3 not parsed");
  CHECK(ReadAudioDuration(dir / "a.wav") == doctest::Approx(2.5));
  CHECK(ReadAudioDuration(dir / "b.wav") == doctest::Approx(3.0));
  CHECK_FALSE(ReadAudioDuration(dir / "c.mp3"));
  CHECK_FALSE(ReadAudioDuration(dir / "missing.wav"));
}

TEST_CASE("corpus kind names") {
  for (CorpusKind k : {CorpusKind::kTimit, CorpusKind::kVoxCeleb2, CorpusKind::kL2Arctic,
                       CorpusKind::kSaa, CorpusKind::kCommonVoice})
    CHECK(ParseCorpusKind(CorpusKindName(k)) == k);
  CHECK_THROWS_AS(ParseCorpusKind("librispeech"), Error);
}

TEST_CASE("timit layout") {
  testing::TempDir dir;
  BuildTimit(dir.path());
  DatasetManifest m = AdaptCorpus(CorpusKind::kTimit, dir.path());
  CHECK_NOTHROW(m.Validate());
  REQUIRE(m.records.size() == 4);
  CHECK(m.dataset_id == "timit");
  CHECK(Carried(m) == std::set<Attribute>{Attribute::kAge, Attribute::kGender,
                                           Attribute::kEducation});
  for (const std::string &e : Values(m, Attribute::kEducation))
    CHECK(std::set<std::string>{"BS", "HS", "MS", "PHD", "AS"}.count(e));
  const SegmentRecord &first = m.records[0];
  CHECK(first.speaker_id == "ABC0");
  CHECK(first.split == Split::kDev);
  CHECK(first.gender == "F");
  CHECK(first.education == "BS");
  REQUIRE(first.age);
  CHECK(*first.age == doctest::Approx(25.7).epsilon(0.01));
  CHECK(first.duration_s == doctest::Approx(2.0));
  const SegmentRecord &unknown = m.records[2];
  CHECK(unknown.speaker_id == "GHI0");
  CHECK_FALSE(unknown.age);
  CHECK_FALSE(unknown.education);
  CHECK(m.records[3].split == Split::kTest);
  CHECK(m.records[3].education == "PHD");
}

TEST_CASE("timit missing speaker table names the path") {
  testing::TempDir dir;
  BuildTimit(dir.path());
  fs::remove(dir / "DOC" / "SPKRINFO.TXT");
  std::string e = ErrorOf(CorpusKind::kTimit, dir.path());
  CHECK(e.find("SPKRINFO.TXT") != std::string::npos);
}

TEST_CASE("voxceleb2 needs its annotation file") {
  testing::TempDir dir;
  WriteText(dir / "vox" / "dev" / "aac" / "id001" / "vidA" / "00001.m4a", "x");
  WriteText(dir / "vox" / "dev" / "aac" / "id001" / "vidB" / "00002.m4a", "x");
  WriteText(dir / "vox" / "dev" / "aac" / "id002" / "vidC" / "00001.m4a", "x");
  WriteText(dir / "vox" / "dev" / "aac" / "id404" / "vidD" / "00001.m4a", "x");
  WriteText(dir / "vox" / "test" / "aac" / "id003" / "vidE" / "00001.m4a", "x");
  WriteText(dir / "ann.csv",
            "VoxCeleb_ID,video_id,Gender,speaker_age\n"
            "id001,vidA,m,34\n"
            "id001,vidB,m,36\n"
            "id002,vidC,f,\n"
            "id003,vidE,f,51\n");
  CHECK(ErrorOf(CorpusKind::kVoxCeleb2, dir / "vox").find("aux") != std::string::npos);

  DatasetManifest m = AdaptCorpus(CorpusKind::kVoxCeleb2, dir / "vox", dir / "ann.csv");
  CHECK_NOTHROW(m.Validate());
  REQUIRE(m.records.size() == 4);  // id404 is not annotated
  CHECK(Carried(m) == std::set<Attribute>{Attribute::kAge, Attribute::kGender});
  CHECK(m.records[0].age == 34.0);
  CHECK(m.records[1].age == 36.0);
  CHECK_FALSE(m.records[2].age);
  CHECK(m.records[2].gender == "f");
  CHECK(m.records[3].split == Split::kTest);
  CHECK(m.records[0].segment_id == "id001/vidA/00001");
}

TEST_CASE("l2arctic layout") {
  testing::TempDir dir;
  const char *speakers[] = {"ABA", "SKA", "YBAA", "ZHAA", "BWC", "LXC", "NCC", "TXHC",
                            "ASI", "RRBI", "SVBI", "TNI", "HJK", "HKK", "YDCK", "YKWK",
                            "EBVS", "ERMS", "MBMPS", "NJS", "HQTV", "PNV", "THV", "TLV"};
  for (const char *s : speakers) {
    WriteText(dir / s / "wav" / "arctic_a0001.wav", RiffHeader(1.0));
    WriteText(dir / s / "wav" / "arctic_a0002.wav", RiffHeader(2.0));
    WriteText(dir / s / "transcript" / "arctic_a0001.txt", "text");
  }
  DatasetManifest m = AdaptCorpus(CorpusKind::kL2Arctic, dir.path());
  CHECK_NOTHROW(m.Validate());
  CHECK(m.records.size() == 48);
  CHECK(Carried(m) == std::set<Attribute>{Attribute::kGender, Attribute::kNativeLanguage});
  std::set<std::string> langs;
  for (const std::string &l : Values(m, Attribute::kNativeLanguage))
    langs.insert(CanonicalLabel(l));
  CHECK(langs == std::set<std::string>{"arabic", "hindi", "korean", "mandarin", "spanish",
                                       "vietnamese"});
  ManifestSummary s = Summarize(m);
  CHECK(s.dev.speakers == 19);
  CHECK(s.test.speakers == 5);
  CHECK(*s.dev.hours == doctest::Approx(19 * 3.0 / 3600));

  fs::remove_all(dir / "NJS");
  CHECK(ErrorOf(CorpusKind::kL2Arctic, dir.path()).find("NJS") != std::string::npos);
}

TEST_CASE("l2arctic split override file") {
  testing::TempDir dir;
  for (const char *s : {"ABA", "SKA", "YBAA", "ZHAA", "BWC", "LXC", "NCC", "TXHC", "ASI",
                        "RRBI", "SVBI", "TNI", "HJK", "HKK", "YDCK", "YKWK", "EBVS", "ERMS",
                        "MBMPS", "NJS", "HQTV", "PNV", "THV", "TLV"})
    WriteText(dir / "root" / s / "wav" / "a.wav", RiffHeader(1.0));
  WriteText(dir / "split.csv", "speaker_id,split\nABA,test\nZHAA,dev\n");
  DatasetManifest m = AdaptCorpus(CorpusKind::kL2Arctic, dir / "root", dir / "split.csv");
  ManifestSummary s = Summarize(m);
  CHECK(s.test.speakers == 5);
  for (const SegmentRecord &r : m.records) {
    if (r.speaker_id == "ABA") CHECK(r.split == Split::kTest);
    if (r.speaker_id == "ZHAA") CHECK(r.split == Split::kDev);
  }
}

TEST_CASE("speech accent archive layout") {
  testing::TempDir dir;
  std::string csv = "age,age_onset,birthplace,filename,native_language,sex,speakerid,country,"
                    "file_missing?\n";
  for (int i = 1; i <= 20; ++i) {
    std::string name = "english" + std::to_string(i);
    csv += std::to_string(20 + i) + ",0,\"town, state\"," + name + ",english," +
           (i % 2 ? "female" : "male") + "," + std::to_string(i) + ",usa,FALSE\n";
    WriteText(dir / "recordings" / (name + ".mp3"), "mp3");
  }
  csv += "40,5,x,mandarin1,mandarin,male,99,china,TRUE\n";
  csv += "40,5,x,ghost1,mandarin,male,98,china,FALSE\n";  // no audio
  WriteText(dir / "speakers_all.csv", csv);
  DatasetManifest m = AdaptCorpus(CorpusKind::kSaa, dir.path(), {}, 3);
  CHECK_NOTHROW(m.Validate());
  CHECK(m.records.size() == 20);
  CHECK(Carried(m) == std::set<Attribute>{Attribute::kAge, Attribute::kGender,
                                           Attribute::kNativeLanguage, Attribute::kCountry});
  ManifestSummary s = Summarize(m);
  CHECK(s.test.speakers == 4);  // 20% held out
  CHECK(s.dev.speakers == 16);
  CHECK_FALSE(s.dev.hours);  // mp3 durations are not parsed
  CHECK(AdaptCorpus(CorpusKind::kSaa, dir.path(), {}, 3).records == m.records);
}

TEST_CASE("common voice layout") {
  testing::TempDir dir;
  const std::string header = "client_id\tpath\tsentence\tup_votes\tdown_votes\tage\tgender\taccent\n";
  WriteText(dir / "en" / "train.tsv", header + "c1\ta.mp3\thi\t2\t0\ttwenties\tmale\tus\n"
                                               "c2\tb.mp3\thi\t2\t0\t\t\t\n");
  WriteText(dir / "en" / "dev.tsv", header + "c3\tc.mp3\thi\t2\t0\tthirties\tfemale\t\n");
  WriteText(dir / "en" / "test.tsv", header + "c4\td.mp3\thi\t2\t0\t\t\tengland\n");
  DatasetManifest m = AdaptCorpus(CorpusKind::kCommonVoice, dir.path());
  CHECK_NOTHROW(m.Validate());
  REQUIRE(m.records.size() == 3);  // c2 carries no label
  CHECK(Carried(m) == std::set<Attribute>{Attribute::kGender, Attribute::kCountry});
  CHECK(m.records[0].country == "us");
  CHECK(m.records[2].split == Split::kTest);
  CHECK_FALSE(m.records[0].age);

  fs::remove(dir / "en" / "dev.tsv");
  CHECK(ErrorOf(CorpusKind::kCommonVoice, dir.path()).find("dev.tsv") != std::string::npos);
}

TEST_CASE("missing root is reported") {
  testing::TempDir dir;
  CHECK(ErrorOf(CorpusKind::kSaa, dir / "nope").find("nope") != std::string::npos);
}

}  // TEST_SUITE

}  // namespace
}  // namespace satt
