// corpus/adapters.cc

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
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "satt/corpus_adapters.h"

namespace satt {

namespace fs = std::filesystem;

namespace {

// Case-insensitive lookup of one path component inside `dir`.
std::optional<fs::path> FindChild(const fs::path &dir, std::string_view name) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return std::nullopt;
  fs::path exact = dir / std::string(name);
  if (fs::exists(exact, ec)) return exact;
  std::string want = ToLower(name);
  for (const auto &entry : fs::directory_iterator(dir, ec))
    if (ToLower(entry.path().filename().string()) == want) return entry.path();
  return std::nullopt;
}

fs::path RequireChild(const fs::path &dir, std::string_view name) {
  auto p = FindChild(dir, name);
  if (!p) throw Error("corpus layout: missing expected path " +
                      (dir / std::string(name)).string());
  return *p;
}

// Sorted list of regular files under `dir` (recursive) with extension `ext`
// (case-insensitive, including the dot).
std::vector<fs::path> ListFiles(const fs::path &dir, std::string_view ext,
                                bool recursive) {
  std::vector<fs::path> out;
  std::string want = ToLower(ext);
  auto take = [&](const fs::directory_entry &e) {
    if (e.is_regular_file() && ToLower(e.path().extension().string()) == want)
      out.push_back(e.path());
  };
  if (recursive) {
    for (const auto &e : fs::recursive_directory_iterator(dir)) take(e);
  } else {
    for (const auto &e : fs::directory_iterator(dir)) take(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<fs::path> ListDirs(const fs::path &dir) {
  std::vector<fs::path> out;
  for (const auto &e : fs::directory_iterator(dir))
    if (e.is_directory()) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> ReadLines(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  if (!lines.empty() && StartsWith(lines[0], "\xEF\xBB\xBF")) lines[0].erase(0, 3);
  return lines;
}

// Header-addressed delimited table.
struct Table {
  std::vector<std::string> header;  // canonical (lowercased, trimmed)
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> Column(std::initializer_list<std::string_view> names) const {
    for (std::string_view n : names)
      for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == n) return i;
    return std::nullopt;
  }
  static std::string Get(const std::vector<std::string> &row,
                         std::optional<std::size_t> col) {
    if (!col || *col >= row.size()) return {};
    return std::string(TrimView(row[*col]));
  }
};

Table ReadTable(const fs::path &path, char sep) {
  std::vector<std::string> lines = ReadLines(path);
  Table t;
  if (lines.empty()) throw Error(path.string() + ": empty table");
  for (const std::string &h : SplitCsvLine(lines[0], sep))
    t.header.push_back(CanonicalLabel(h));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (TrimView(lines[i]).empty()) continue;
    t.rows.push_back(SplitCsvLine(lines[i], sep));
  }
  return t;
}

std::map<std::string, Split> ReadSplitOverrides(const fs::path &path) {
  Table t = ReadTable(path, ',');
  auto spk = t.Column({"speaker_id", "speaker"});
  auto split = t.Column({"split"});
  if (!spk || !split)
    throw Error(path.string() + ": split override file needs speaker_id,split columns");
  std::map<std::string, Split> out;
  for (const auto &row : t.rows) {
    std::string s = Table::Get(row, split);
    if (s != "dev" && s != "test")
      throw Error(path.string() + ": bad split '" + s + "'");
    out[Table::Get(row, spk)] = s == "dev" ? Split::kDev : Split::kTest;
  }
  return out;
}

void ApplyOverrides(DatasetManifest &m, const std::optional<fs::path> &aux) {
  if (!aux) return;
  auto overrides = ReadSplitOverrides(*aux);
  for (SegmentRecord &r : m.records) {
    auto it = overrides.find(r.speaker_id);
    if (it != overrides.end()) r.split = it->second;
  }
}

// Speakers ranked by hash; the first round(fraction * n) become test.
std::map<std::string, Split> HashedSpeakerSplit(const std::set<std::string> &speakers,
                                                double test_fraction,
                                                std::uint64_t seed) {
  std::vector<std::pair<std::uint64_t, std::string>> ranked;
  for (const std::string &s : speakers) ranked.emplace_back(Mix64(seed, Fnv1a64(s)), s);
  std::sort(ranked.begin(), ranked.end());
  std::size_t n_test = static_cast<std::size_t>(
      std::llround(test_fraction * double(ranked.size())));
  std::map<std::string, Split> out;
  for (std::size_t i = 0; i < ranked.size(); ++i)
    out[ranked[i].second] = i < n_test ? Split::kTest : Split::kDev;
  return out;
}

std::optional<double> ValidAge(std::optional<double> age) {
  if (age && std::isfinite(*age) && *age > 0 && *age < 120) return age;
  return std::nullopt;
}

std::optional<std::string> NonEmpty(std::string s) {
  if (TrimView(s).empty()) return std::nullopt;
  return s;
}

// ---------------------------------------------------------------- TIMIT

struct TimitSpeaker {
  std::string sex;
  std::optional<double> age;
  std::optional<std::string> education;
};

// mm/dd/yy with 19yy years; nullopt when any part is unknown ("??").
std::optional<double> TimitDateYears(const std::string &date) {
  auto parts = SplitString(date, '/');
  if (parts.size() != 3) return std::nullopt;
  auto m = ParseInt(parts[0]), d = ParseInt(parts[1]), y = ParseInt(parts[2]);
  if (!m || !d || !y || *m < 1 || *m > 12 || *d < 1 || *d > 31) return std::nullopt;
  int64_t year = *y < 100 ? 1900 + *y : *y;
  static const int kCumDays[12] = {0, 31, 59, 90, 120, 151, 181, 212, 243, 273, 304, 334};
  return double(year) + (kCumDays[*m - 1] + (*d - 1)) / 365.25;
}

std::map<std::string, TimitSpeaker> ReadSpkrInfo(const fs::path &path) {
  std::map<std::string, TimitSpeaker> out;
  for (const std::string &line : ReadLines(path)) {
    std::string_view t = TrimView(line);
    if (t.empty() || t.front() == ';') continue;
    std::istringstream in{std::string(t)};
    std::string id, sex, dr, use, rec, birth, height, race, edu;
    if (!(in >> id >> sex >> dr >> use >> rec >> birth >> height >> race >> edu))
      continue;
    TimitSpeaker s;
    s.sex = sex;
    auto r = TimitDateYears(rec), b = TimitDateYears(birth);
    if (r && b) s.age = ValidAge(*r - *b);
    if (edu != "??") s.education = edu;
    out[ToLower(id)] = s;
  }
  return out;
}

DatasetManifest AdaptTimit(const fs::path &root) {
  fs::path base = root;
  if (!FindChild(base, "DOC") && FindChild(base, "TIMIT")) base = *FindChild(base, "TIMIT");
  fs::path info = RequireChild(RequireChild(base, "DOC"), "SPKRINFO.TXT");
  auto speakers = ReadSpkrInfo(info);
  DatasetManifest m;
  m.dataset_id = "timit";
  for (auto [dir_name, split] : {std::pair{"TRAIN", Split::kDev},
                                 std::pair{"TEST", Split::kTest}}) {
    fs::path split_dir = RequireChild(base, dir_name);
    for (const fs::path &region : ListDirs(split_dir)) {
      for (const fs::path &spk_dir : ListDirs(region)) {
        std::string folder = spk_dir.filename().string();
        if (folder.size() < 2) continue;
        std::string id = folder.substr(1);
        auto it = speakers.find(ToLower(id));
        if (it == speakers.end())
          throw Error("TIMIT speaker " + folder + " missing from " + info.string());
        for (const fs::path &wav : ListFiles(spk_dir, ".wav", false)) {
          SegmentRecord r;
          r.dataset_id = m.dataset_id;
          r.speaker_id = id;
          r.segment_id = id + "_" + wav.stem().string();
          r.audio_path = wav.string();
          r.split = split;
          r.duration_s = ReadAudioDuration(wav);
          r.age = it->second.age;
          r.gender = it->second.sex;
          r.education = it->second.education;
          m.records.push_back(std::move(r));
        }
      }
    }
  }
  return m;
}

// ------------------------------------------------------------ VoxCeleb2

struct VoxLabels {
  std::optional<double> age;
  std::optional<std::string> gender;
};

DatasetManifest AdaptVoxCeleb2(const fs::path &root, const std::optional<fs::path> &aux) {
  if (!aux)
    throw Error("voxceleb2 requires the speaker age/gender annotation file (--aux)");
  Table t = ReadTable(*aux, ',');
  auto c_spk = t.Column({"speaker_id", "voxceleb_id", "id", "speaker"});
  auto c_video = t.Column({"video_id", "video"});
  auto c_gender = t.Column({"gender", "gender_wiki", "sex"});
  auto c_age = t.Column({"age", "speaker_age"});
  auto c_birth = t.Column({"birth_year"});
  auto c_rec = t.Column({"recording_year", "video_year", "year"});
  if (!c_spk)
    throw Error(aux->string() + ": annotation file needs a speaker_id column");
  if (!c_gender && !c_age && !(c_birth && c_rec))
    throw Error(aux->string() + ": annotation file has no gender or age columns");

  std::map<std::string, VoxLabels> by_speaker;
  std::map<std::pair<std::string, std::string>, VoxLabels> by_video;
  for (const auto &row : t.rows) {
    VoxLabels l;
    l.gender = NonEmpty(Table::Get(row, c_gender));
    if (c_age) l.age = ValidAge(ParseDouble(Table::Get(row, c_age)));
    if (!l.age && c_birth && c_rec) {
      auto b = ParseDouble(Table::Get(row, c_birth));
      auto r = ParseDouble(Table::Get(row, c_rec));
      if (b && r) l.age = ValidAge(*r - *b);
    }
    std::string spk = Table::Get(row, c_spk);
    std::string video = Table::Get(row, c_video);
    if (!video.empty()) {
      by_video[{spk, video}] = l;
      VoxLabels &s = by_speaker[spk];
      if (!s.gender) s.gender = l.gender;
    } else {
      by_speaker[spk] = l;
    }
  }

  DatasetManifest m;
  m.dataset_id = "voxceleb2";
  for (auto [dir_name, split] : {std::pair{"dev", Split::kDev},
                                 std::pair{"test", Split::kTest}}) {
    fs::path split_dir = RequireChild(root, dir_name);
    fs::path audio_dir = FindChild(split_dir, "aac").value_or(
        FindChild(split_dir, "wav").value_or(split_dir / "aac"));
    if (!fs::is_directory(audio_dir))
      throw Error("corpus layout: missing expected path " + audio_dir.string());
    for (const fs::path &spk_dir : ListDirs(audio_dir)) {
      std::string spk = spk_dir.filename().string();
      auto sit = by_speaker.find(spk);
      if (sit == by_speaker.end()) continue;  // not annotated
      for (const fs::path &video_dir : ListDirs(spk_dir)) {
        std::string video = video_dir.filename().string();
        VoxLabels labels = sit->second;
        auto vit = by_video.find({spk, video});
        if (vit != by_video.end()) {
          if (vit->second.age) labels.age = vit->second.age;
          if (vit->second.gender) labels.gender = vit->second.gender;
        }
        if (!labels.age && !labels.gender) continue;
        std::vector<fs::path> files;
        for (const auto &e : fs::directory_iterator(video_dir))
          if (e.is_regular_file()) files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const fs::path &f : files) {
          SegmentRecord r;
          r.dataset_id = m.dataset_id;
          r.speaker_id = spk;
          r.segment_id = spk + "/" + video + "/" + f.stem().string();
          r.audio_path = f.string();
          r.split = split;
          r.duration_s = ReadAudioDuration(f);
          r.age = labels.age;
          r.gender = labels.gender;
          m.records.push_back(std::move(r));
        }
      }
    }
  }
  return m;
}

// ------------------------------------------------------------- L2-ARCTIC

struct L2ArcticSpeaker {
  const char *code;
  const char *gender;
  const char *language;
};

constexpr L2ArcticSpeaker kL2ArcticSpeakers[] = {
    {"ABA", "M", "Arabic"},      {"SKA", "F", "Arabic"},
    {"YBAA", "M", "Arabic"},     {"ZHAA", "F", "Arabic"},
    {"BWC", "M", "Mandarin"},    {"LXC", "F", "Mandarin"},
    {"NCC", "F", "Mandarin"},    {"TXHC", "M", "Mandarin"},
    {"ASI", "M", "Hindi"},       {"RRBI", "M", "Hindi"},
    {"SVBI", "F", "Hindi"},      {"TNI", "F", "Hindi"},
    {"HJK", "F", "Korean"},      {"HKK", "M", "Korean"},
    {"YDCK", "F", "Korean"},     {"YKWK", "M", "Korean"},
    {"EBVS", "M", "Spanish"},    {"ERMS", "M", "Spanish"},
    {"MBMPS", "F", "Spanish"},   {"NJS", "F", "Spanish"},
    {"HQTV", "M", "Vietnamese"}, {"PNV", "F", "Vietnamese"},
    {"THV", "F", "Vietnamese"},  {"TLV", "M", "Vietnamese"},
};

// Default held-out speakers: 19 dev / 5 test.
constexpr const char *kL2ArcticTest[] = {"ZHAA", "TXHC", "TNI", "YKWK", "NJS"};

DatasetManifest AdaptL2Arctic(const fs::path &root, const std::optional<fs::path> &aux) {
  DatasetManifest m;
  m.dataset_id = "l2arctic";
  for (const L2ArcticSpeaker &s : kL2ArcticSpeakers) {
    fs::path wav_dir = RequireChild(RequireChild(root, s.code), "wav");
    bool is_test = std::any_of(std::begin(kL2ArcticTest), std::end(kL2ArcticTest),
                               [&](const char *t) { return std::strcmp(t, s.code) == 0; });
    for (const fs::path &wav : ListFiles(wav_dir, ".wav", false)) {
      SegmentRecord r;
      r.dataset_id = m.dataset_id;
      r.speaker_id = s.code;
      r.segment_id = std::string(s.code) + "_" + wav.stem().string();
      r.audio_path = wav.string();
      r.split = is_test ? Split::kTest : Split::kDev;
      r.duration_s = ReadAudioDuration(wav);
      r.gender = s.gender;
      r.native_language = s.language;
      m.records.push_back(std::move(r));
    }
  }
  ApplyOverrides(m, aux);
  return m;
}

// --------------------------------------------------- Speech Accent Archive

DatasetManifest AdaptSaa(const fs::path &root, const std::optional<fs::path> &aux,
                         std::uint64_t seed) {
  fs::path csv = RequireChild(root, "speakers_all.csv");
  fs::path rec_dir = RequireChild(root, "recordings");
  Table t = ReadTable(csv, ',');
  auto c_file = t.Column({"filename"});
  auto c_age = t.Column({"age"});
  auto c_sex = t.Column({"sex", "gender"});
  auto c_lang = t.Column({"native_language"});
  auto c_country = t.Column({"country"});
  auto c_missing = t.Column({"file_missing?", "file_missing"});
  if (!c_file) throw Error(csv.string() + ": missing 'filename' column");

  DatasetManifest m;
  m.dataset_id = "saa";
  std::set<std::string> speakers;
  for (const auto &row : t.rows) {
    std::string file = Table::Get(row, c_file);
    if (file.empty()) continue;
    if (ToLower(Table::Get(row, c_missing)) == "true") continue;
    std::optional<fs::path> audio;
    for (const char *ext : {".mp3", ".wav"}) {
      fs::path p = rec_dir / (file + ext);
      if (fs::exists(p)) {
        audio = p;
        break;
      }
    }
    if (!audio) continue;
    SegmentRecord r;
    r.dataset_id = m.dataset_id;
    r.speaker_id = file;
    r.segment_id = file;
    r.audio_path = audio->string();
    r.duration_s = ReadAudioDuration(*audio);
    r.age = ValidAge(ParseDouble(Table::Get(row, c_age)));
    r.gender = NonEmpty(Table::Get(row, c_sex));
    r.native_language = NonEmpty(Table::Get(row, c_lang));
    r.country = NonEmpty(Table::Get(row, c_country));
    speakers.insert(file);
    m.records.push_back(std::move(r));
  }
  auto split = HashedSpeakerSplit(speakers, 0.2, seed);
  for (SegmentRecord &r : m.records) r.split = split.at(r.speaker_id);
  ApplyOverrides(m, aux);
  return m;
}

// ------------------------------------------------------------ Common Voice

DatasetManifest AdaptCommonVoice(const fs::path &root, const std::optional<fs::path> &aux) {
  fs::path base = root;
  if (!FindChild(base, "train.tsv") && FindChild(base, "en")) base = *FindChild(base, "en");
  DatasetManifest m;
  m.dataset_id = "common_voice";
  fs::path clips = base / "clips";
  for (auto [file, split] : {std::pair{"train.tsv", Split::kDev},
                             std::pair{"dev.tsv", Split::kDev},
                             std::pair{"test.tsv", Split::kTest}}) {
    Table t = ReadTable(RequireChild(base, file), '\t');
    auto c_client = t.Column({"client_id"});
    auto c_path = t.Column({"path"});
    auto c_gender = t.Column({"gender"});
    auto c_accent = t.Column({"accent", "accents"});
    if (!c_client || !c_path)
      throw Error(file + std::string(": needs client_id and path columns"));
    for (const auto &row : t.rows) {
      auto gender = NonEmpty(Table::Get(row, c_gender));
      auto accent = NonEmpty(Table::Get(row, c_accent));
      if (!gender && !accent) continue;
      std::string path = Table::Get(row, c_path);
      SegmentRecord r;
      r.dataset_id = m.dataset_id;
      r.speaker_id = Table::Get(row, c_client);
      r.segment_id = fs::path(path).stem().string();
      r.audio_path = (clips / path).string();
      r.split = split;
      r.gender = gender;
      r.country = accent;
      m.records.push_back(std::move(r));
    }
  }
  ApplyOverrides(m, aux);
  return m;
}

std::uint32_t ReadU32Le(const unsigned char *p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
         std::uint32_t(p[3]) << 24;
}

}  // namespace

std::string_view CorpusKindName(CorpusKind kind) {
  switch (kind) {
    case CorpusKind::kTimit: return "timit";
    case CorpusKind::kVoxCeleb2: return "voxceleb2";
    case CorpusKind::kL2Arctic: return "l2arctic";
    case CorpusKind::kSaa: return "saa";
    case CorpusKind::kCommonVoice: return "common_voice";
  }
  return "unknown";
}

CorpusKind ParseCorpusKind(std::string_view name) {
  for (CorpusKind k : {CorpusKind::kTimit, CorpusKind::kVoxCeleb2, CorpusKind::kL2Arctic,
                       CorpusKind::kSaa, CorpusKind::kCommonVoice})
    if (CorpusKindName(k) == name) return k;
  throw Error("unknown corpus kind '" + std::string(name) +
              "' (expected timit, voxceleb2, l2arctic, saa, common_voice)");
}

std::optional<double> ReadAudioDuration(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::string head(1024, '\0');
  in.read(head.data(), static_cast<std::streamsize>(head.size()));
  head.resize(static_cast<std::size_t>(in.gcount()));

  if (head.size() >= 12 && head.compare(0, 4, "RIFF") == 0 &&
      head.compare(8, 4, "WAVE") == 0) {
    std::uint32_t byte_rate = 0;
    std::size_t pos = 12;
    in.clear();
    while (true) {
      unsigned char chunk[8];
      in.seekg(static_cast<std::streamoff>(pos));
      if (!in.read(reinterpret_cast<char *>(chunk), 8)) return std::nullopt;
      std::uint32_t size = ReadU32Le(chunk + 4);
      if (std::memcmp(chunk, "fmt ", 4) == 0) {
        unsigned char fmt[12];
        if (size < 12 || !in.read(reinterpret_cast<char *>(fmt), 12)) return std::nullopt;
        byte_rate = ReadU32Le(fmt + 8);
      } else if (std::memcmp(chunk, "data", 4) == 0) {
        if (byte_rate == 0) return std::nullopt;
        return double(size) / double(byte_rate);
      }
      pos += 8 + size + (size & 1);
    }
  }
  if (StartsWith(head, "NIST_1A")) {
    std::optional<double> count, rate;
    std::istringstream lines(head);
    std::string line;
    while (std::getline(lines, line)) {
      if (StartsWith(line, "end_head")) break;
      std::istringstream f(line);
      std::string key, type, value;
      if (!(f >> key >> type >> value)) continue;
      if (key == "sample_count") count = ParseDouble(value);
      if (key == "sample_rate") rate = ParseDouble(value);
    }
    if (count && rate && *rate > 0) return *count / *rate;
  }
  return std::nullopt;
}

DatasetManifest AdaptCorpus(CorpusKind kind, const fs::path &root,
                            const std::optional<fs::path> &aux, std::uint64_t seed) {
  if (!fs::is_directory(root))
    throw Error("corpus layout: missing expected path " + root.string());
  DatasetManifest m;
  switch (kind) {
    case CorpusKind::kTimit:
      m = AdaptTimit(root);
      ApplyOverrides(m, aux);
      break;
    case CorpusKind::kVoxCeleb2: m = AdaptVoxCeleb2(root, aux); break;
    case CorpusKind::kL2Arctic: m = AdaptL2Arctic(root, aux); break;
    case CorpusKind::kSaa: m = AdaptSaa(root, aux, seed); break;
    case CorpusKind::kCommonVoice: m = AdaptCommonVoice(root, aux); break;
  }
  m.Validate();
  return m;
}

}  // namespace satt
