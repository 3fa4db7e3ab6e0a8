// embed/embed_store.cc

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

#include "satt/embed_store.h"

#include <fcntl.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <sstream>

namespace satt {

static_assert(std::endian::native == std::endian::little,
              "store and checkpoint payloads are written in host order");

namespace fs = std::filesystem;

namespace {

template <typename U>
void PutLe(std::string &out, U v) {
  for (std::size_t i = 0; i < sizeof(U); ++i)
    out.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff));
}

template <typename U>
U GetLe(const unsigned char *p) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= std::uint64_t(p[i]) << (8 * i);
  return static_cast<U>(v);
}

}  // namespace

Eigen::VectorXf PoolMean(const FrameMatrix &frames) {
  if (frames.rows() == 0) throw Error("cannot pool an empty sequence (T = 0)");
  Eigen::VectorXd acc = frames.cast<double>().colwise().sum().transpose();
  return (acc / double(frames.rows())).cast<float>();
}

EmbeddingVector PoolMean(const FeatureSequence &seq) {
  if (seq.frames.rows() == 0)
    throw Error("cannot pool segment '" + seq.segment_id + "': T = 0");
  return {seq.segment_id, PoolMean(seq.frames)};
}

// ------------------------------------------------------------------ reader

EmbeddingStore EmbeddingStore::Open(const fs::path &path) {
  EmbeddingStore s;
  s.path_ = path;
  int fd = ::open(path.c_str(), O_RDONLY);
  if (fd < 0) throw Error("cannot open embedding store " + path.string());
  struct stat st {};
  if (::fstat(fd, &st) != 0) {
    ::close(fd);
    throw Error("cannot stat " + path.string());
  }
  s.map_size_ = static_cast<std::size_t>(st.st_size);
  if (s.map_size_ < 20) {
    ::close(fd);
    throw Error(path.string() + ": truncated embedding store header");
  }
  void *m = ::mmap(nullptr, s.map_size_, PROT_READ, MAP_PRIVATE, fd, 0);
  ::close(fd);
  if (m == MAP_FAILED) throw Error("cannot map " + path.string());
  s.map_ = static_cast<const unsigned char *>(m);

  const unsigned char *p = s.map_;
  const unsigned char *end = s.map_ + s.map_size_;
  if (std::memcmp(p, kStoreMagic, 4) != 0)
    throw Error(path.string() + ": not an embedding store (bad magic)");
  std::uint32_t version = GetLe<std::uint32_t>(p + 4);
  if (version != kStoreVersion)
    throw Error(path.string() + ": unsupported store version " + std::to_string(version));
  s.dim_ = static_cast<int>(GetLe<std::uint32_t>(p + 8));
  std::uint64_t count = GetLe<std::uint64_t>(p + 12);
  p += 20;
  s.entries_.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 24)));
  std::uint64_t total_frames = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    if (end - p < 2) throw Error(path.string() + ": truncated index");
    std::uint16_t len = GetLe<std::uint16_t>(p);
    p += 2;
    if (end - p < std::ptrdiff_t(len) + 12) throw Error(path.string() + ": truncated index");
    StoreEntry e;
    e.segment_id.assign(reinterpret_cast<const char *>(p), len);
    p += len;
    e.offset_frames = GetLe<std::uint64_t>(p);
    e.num_frames = GetLe<std::uint32_t>(p + 8);
    p += 12;
    if (!s.index_.emplace(e.segment_id, s.entries_.size()).second)
      throw Error(path.string() + ": duplicate segment '" + e.segment_id + "'");
    total_frames = std::max(total_frames, e.offset_frames + e.num_frames);
    s.entries_.push_back(std::move(e));
  }
  s.payload_offset_ = static_cast<std::size_t>(p - s.map_);
  std::uint64_t payload_bytes = s.map_size_ - s.payload_offset_;
  if (total_frames * std::uint64_t(s.dim_) * 4 > payload_bytes)
    throw Error(path.string() + ": index points past the end of the payload");
  s.fingerprint_ = Fnv1a64(std::string_view(reinterpret_cast<const char *>(s.map_),
                                            s.payload_offset_));
  // Ranges must not overlap.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
  for (const StoreEntry &e : s.entries_)
    ranges.emplace_back(e.offset_frames, e.offset_frames + e.num_frames);
  std::sort(ranges.begin(), ranges.end());
  for (std::size_t i = 1; i < ranges.size(); ++i)
    if (ranges[i].first < ranges[i - 1].second)
      throw Error(path.string() + ": overlapping index ranges");
  return s;
}

EmbeddingStore::EmbeddingStore(EmbeddingStore &&o) noexcept { *this = std::move(o); }

EmbeddingStore &EmbeddingStore::operator=(EmbeddingStore &&o) noexcept {
  if (this == &o) return *this;
  if (map_) ::munmap(const_cast<unsigned char *>(map_), map_size_);
  path_ = std::move(o.path_);
  dim_ = o.dim_;
  entries_ = std::move(o.entries_);
  index_ = std::move(o.index_);
  fingerprint_ = o.fingerprint_;
  map_ = o.map_;
  map_size_ = o.map_size_;
  payload_offset_ = o.payload_offset_;
  o.map_ = nullptr;
  o.map_size_ = 0;
  return *this;
}

EmbeddingStore::~EmbeddingStore() {
  if (map_) ::munmap(const_cast<unsigned char *>(map_), map_size_);
}

bool EmbeddingStore::Contains(const std::string &segment_id) const {
  return index_.count(segment_id) != 0;
}

const float *EmbeddingStore::Frames(const StoreEntry &e) const {
  return reinterpret_cast<const float *>(map_ + payload_offset_ +
                                         e.offset_frames * std::uint64_t(dim_) * 4);
}

FeatureSequence EmbeddingStore::GetSequence(const std::string &segment_id) const {
  auto it = index_.find(segment_id);
  if (it == index_.end())
    throw Error("segment '" + segment_id + "' not found in store " + path_.string());
  const StoreEntry &e = entries_[it->second];
  FeatureSequence seq;
  seq.segment_id = segment_id;
  seq.frames.resize(e.num_frames, dim_);
  // The payload is only 1-byte aligned after the variable-length index.
  std::memcpy(seq.frames.data(), Frames(e), std::size_t(e.num_frames) * dim_ * 4);
  return seq;
}

Eigen::VectorXf EmbeddingStore::GetPooled(const std::string &segment_id) const {
  return PoolMean(GetSequence(segment_id).frames);
}

// ------------------------------------------------------------------ writer

EmbeddingStoreWriter::EmbeddingStoreWriter(fs::path path, int dim)
    : path_(std::move(path)), dim_(dim) {
  if (dim < 0) throw Error("store dimension must be non-negative");
  spool_path_ = path_;
  spool_path_ += ".part";
  spool_.open(spool_path_, std::ios::binary | std::ios::trunc);
  if (!spool_) throw Error("cannot write " + spool_path_.string());
}

EmbeddingStoreWriter::~EmbeddingStoreWriter() {
  if (!finished_) {
    spool_.close();
    std::error_code ec;
    fs::remove(spool_path_, ec);
  }
}

void EmbeddingStoreWriter::AddRaw(const std::string &segment_id, const float *values,
                                  std::uint32_t num_frames) {
  if (finished_) throw Error("store writer already finished");
  if (num_frames == 0) throw Error("segment '" + segment_id + "' has no frames");
  if (segment_id.size() > 0xffff) throw Error("segment id too long: " + segment_id);
  if (!seen_.emplace(segment_id, entries_.size()).second)
    throw Error("duplicate segment '" + segment_id + "' written to store");
  const std::size_t n = std::size_t(num_frames) * dim_;
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(values[i]))
      throw Error("segment '" + segment_id + "' contains non-finite values");
  spool_.write(reinterpret_cast<const char *>(values), std::streamsize(n * 4));
  if (!spool_) throw Error("write failed for " + spool_path_.string());
  entries_.push_back({segment_id, next_offset_, num_frames});
  next_offset_ += num_frames;
}

void EmbeddingStoreWriter::Add(const FeatureSequence &seq) {
  if (dim_ == 0) dim_ = static_cast<int>(seq.frames.cols());
  if (seq.frames.cols() != dim_)
    throw Error("segment '" + seq.segment_id + "' has dimension " +
                std::to_string(seq.frames.cols()) + ", store has " + std::to_string(dim_));
  AddRaw(seq.segment_id, seq.frames.data(), static_cast<std::uint32_t>(seq.frames.rows()));
}

EmbeddingStore EmbeddingStoreWriter::Finish() {
  if (finished_) throw Error("store writer already finished");
  spool_.close();
  std::string head(kStoreMagic, 4);
  PutLe<std::uint32_t>(head, kStoreVersion);
  PutLe<std::uint32_t>(head, static_cast<std::uint32_t>(dim_));
  PutLe<std::uint64_t>(head, entries_.size());
  for (const StoreEntry &e : entries_) {
    PutLe<std::uint16_t>(head, static_cast<std::uint16_t>(e.segment_id.size()));
    head += e.segment_id;
    PutLe<std::uint64_t>(head, e.offset_frames);
    PutLe<std::uint32_t>(head, e.num_frames);
  }
  {
    std::ofstream out(path_, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path_.string());
    out.write(head.data(), std::streamsize(head.size()));
    std::ifstream spool(spool_path_, std::ios::binary);
    // Streaming an empty buffer sets failbit.
    if (next_offset_ > 0) out << spool.rdbuf();
    out.flush();
    if (!out) throw Error("write failed for " + path_.string());
  }
  fs::remove(spool_path_);
  finished_ = true;
  return EmbeddingStore::Open(path_);
}

EmbeddingStore WriteStore(const std::vector<FeatureSequence> &sequences,
                          const fs::path &path, int dim) {
  EmbeddingStoreWriter writer(path, dim);
  for (const FeatureSequence &s : sequences) writer.Add(s);
  return writer.Finish();
}

EmbeddingStore ImportExternal(const fs::path &dir, const fs::path &listing, int dim,
                              const fs::path &out) {
  if (dim <= 0) throw Error("import dimension must be positive");
  std::ifstream in(listing);
  if (!in) throw Error("cannot open index listing " + listing.string());
  EmbeddingStoreWriter writer(out, dim);
  std::string line;
  std::size_t line_no = 0;
  std::vector<float> buf;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view t = TrimView(line);
    if (t.empty() || t.front() == '#') continue;
    std::istringstream fields{std::string(t)};
    std::string id, file;
    if (!(fields >> id >> file))
      throw Error(listing.string() + ":" + std::to_string(line_no) +
                  ": expected '<segment_id> <file>'");
    fs::path p = fs::path(file).is_absolute() ? fs::path(file) : dir / file;
    std::error_code ec;
    auto bytes = fs::file_size(p, ec);
    if (ec) throw Error("segment '" + id + "': missing file " + p.string());
    const std::uintmax_t frame_bytes = std::uintmax_t(dim) * 4;
    if (bytes == 0 || bytes % frame_bytes != 0)
      throw Error("segment '" + id + "': file " + p.string() + " has " +
                  std::to_string(bytes) + " bytes, not a positive multiple of 4*" +
                  std::to_string(dim));
    buf.resize(bytes / 4);
    std::ifstream f(p, std::ios::binary);
    if (!f.read(reinterpret_cast<char *>(buf.data()), std::streamsize(bytes)))
      throw Error("cannot read " + p.string());
    writer.AddRaw(id, buf.data(), static_cast<std::uint32_t>(bytes / frame_bytes));
  }
  return writer.Finish();
}

// --------------------------------------------------------------- store set

StoreSet::StoreSet(std::vector<const EmbeddingStore *> stores) : stores_(std::move(stores)) {
  for (const EmbeddingStore *s : stores_) {
    if (!s) throw Error("null embedding store");
    if (dim_ == 0) dim_ = s->dim();
    if (s->dim() != dim_)
      throw Error("embedding stores disagree on width: " + std::to_string(dim_) + " vs " +
                  std::to_string(s->dim()) + " (" + s->path().string() + ")");
  }
}

const EmbeddingStore *StoreSet::Find(const std::string &segment_id) const {
  for (const EmbeddingStore *s : stores_)
    if (s->Contains(segment_id)) return s;
  return nullptr;
}

FeatureSequence StoreSet::GetSequence(const std::string &segment_id) const {
  const EmbeddingStore *s = Find(segment_id);
  if (!s) throw Error("missing embeddings for segment '" + segment_id + "'");
  return s->GetSequence(segment_id);
}

Eigen::VectorXf StoreSet::GetPooled(const std::string &segment_id) const {
  return PoolMean(GetSequence(segment_id).frames);
}

std::uint64_t StoreSet::Fingerprint() const {
  std::uint64_t h = Fnv1a64("storeset");
  for (const EmbeddingStore *s : stores_) h = Mix64(h, s->Fingerprint());
  return h;
}

}  // namespace satt
