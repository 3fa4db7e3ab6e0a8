// satt/embed_store.h

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

#ifndef SATT_EMBED_STORE_H_
#define SATT_EMBED_STORE_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "satt/common.h"

namespace satt {

/// Row-major T x D frame matrix.
using FrameMatrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct FeatureSequence {
  std::string segment_id;
  FrameMatrix frames;
};

struct EmbeddingVector {
  std::string segment_id;
  Eigen::VectorXf values;
};

/// Mean over frames, accumulated in double.  Throws if the sequence is empty.
EmbeddingVector PoolMean(const FeatureSequence &seq);
Eigen::VectorXf PoolMean(const FrameMatrix &frames);

// On-disk layout, little-endian:
//   "EMBS"  u32 version=1  u32 dim  u64 count
//   count x { u16 id_len, id bytes, u64 offset_frames, u32 num_frames }
//   float32 payload, row-major; byte offset of an entry = offset_frames*dim*4
// relative to the start of the payload.
inline constexpr char kStoreMagic[4] = {'E', 'M', 'B', 'S'};
inline constexpr std::uint32_t kStoreVersion = 1;

struct StoreEntry {
  std::string segment_id;
  std::uint64_t offset_frames = 0;
  std::uint32_t num_frames = 0;
};

/// Read-only, memory-mapped store.  Immutable; safe for concurrent readers.
class EmbeddingStore {
 public:
  static EmbeddingStore Open(const std::filesystem::path &path);

  EmbeddingStore(EmbeddingStore &&) noexcept;
  EmbeddingStore &operator=(EmbeddingStore &&) noexcept;
  ~EmbeddingStore();

  int dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<StoreEntry> &entries() const { return entries_; }
  const std::filesystem::path &path() const { return path_; }
  bool Contains(const std::string &segment_id) const;

  /// Throws Error for unknown ids.
  FeatureSequence GetSequence(const std::string &segment_id) const;
  Eigen::VectorXf GetPooled(const std::string &segment_id) const;

  /// Content identity: FNV-1a of the header and index.
  std::uint64_t Fingerprint() const { return fingerprint_; }

 private:
  EmbeddingStore() = default;
  const float *Frames(const StoreEntry &e) const;

  std::filesystem::path path_;
  int dim_ = 0;
  std::vector<StoreEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
  std::uint64_t fingerprint_ = 0;
  const unsigned char *map_ = nullptr;
  std::size_t map_size_ = 0;
  std::size_t payload_offset_ = 0;
};

/// Ordered lookup over several stores of the same width; the first store
/// holding a segment wins.
class StoreSet {
 public:
  StoreSet() = default;
  explicit StoreSet(std::vector<const EmbeddingStore *> stores);

  int dim() const { return dim_; }
  bool empty() const { return stores_.empty(); }
  const std::vector<const EmbeddingStore *> &stores() const { return stores_; }
  /// nullptr when no store holds the segment.
  const EmbeddingStore *Find(const std::string &segment_id) const;
  /// Throws Error naming the segment when it is missing.
  FeatureSequence GetSequence(const std::string &segment_id) const;
  Eigen::VectorXf GetPooled(const std::string &segment_id) const;
  /// Combined fingerprint of the member stores, in order.
  std::uint64_t Fingerprint() const;

 private:
  std::vector<const EmbeddingStore *> stores_;
  int dim_ = 0;
};

/// Streams sequences to a store.  The payload is spooled to "<path>.part"
/// and stitched behind the header by Finish().
class EmbeddingStoreWriter {
 public:
  /// `dim` may be 0 to take the width of the first sequence.
  explicit EmbeddingStoreWriter(std::filesystem::path path, int dim = 0);
  ~EmbeddingStoreWriter();
  EmbeddingStoreWriter(const EmbeddingStoreWriter &) = delete;
  EmbeddingStoreWriter &operator=(const EmbeddingStoreWriter &) = delete;

  /// Throws on a width mismatch, duplicate id, empty or non-finite sequence.
  void Add(const FeatureSequence &seq);
  void AddRaw(const std::string &segment_id, const float *values,
              std::uint32_t num_frames);
  EmbeddingStore Finish();

 private:
  std::filesystem::path path_;
  std::filesystem::path spool_path_;
  std::ofstream spool_;
  int dim_;
  std::uint64_t next_offset_ = 0;
  std::vector<StoreEntry> entries_;
  std::unordered_map<std::string, std::size_t> seen_;
  bool finished_ = false;
};

EmbeddingStore WriteStore(const std::vector<FeatureSequence> &sequences,
                          const std::filesystem::path &path, int dim = 0);

/// Consolidates per-segment raw float32 files.  `listing` holds lines of
/// "<segment_id> <file>" (paths relative to `dir`); blank lines and lines
/// starting with '#' are ignored.
EmbeddingStore ImportExternal(const std::filesystem::path &dir,
                              const std::filesystem::path &listing, int dim,
                              const std::filesystem::path &out);

}  // namespace satt

#endif  // SATT_EMBED_STORE_H_
