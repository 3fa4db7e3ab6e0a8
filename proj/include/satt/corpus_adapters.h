// satt/corpus_adapters.h

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

#ifndef SATT_CORPUS_ADAPTERS_H_
#define SATT_CORPUS_ADAPTERS_H_

#include <filesystem>
#include <optional>
#include <string_view>

#include "satt/corpus.h"

namespace satt {

enum class CorpusKind { kTimit, kVoxCeleb2, kL2Arctic, kSaa, kCommonVoice };

std::string_view CorpusKindName(CorpusKind kind);
CorpusKind ParseCorpusKind(std::string_view name);

// Converts a corpus, laid out as distributed, into a generic manifest.
// Only the attributes the corpus actually annotates are filled in:
//
//   timit        age, gender, education   DOC/SPKRINFO.TXT + TRAIN|TEST/DR*/<sex><id>/*.WAV
//   voxceleb2    age, gender              {dev,test}/aac/<id>/<video>/*.m4a (aux required)
//   l2arctic     gender, native_language  <SPK>/wav/*.wav
//   saa          age, gender, native_language, country
//                                         speakers_all.csv + recordings/
//   common_voice gender, country          {train,dev,test}.tsv + clips/
//
// `aux` is the age/gender annotation CSV for voxceleb2 (required) and an
// optional "speaker_id,split" override list for the other corpora.
// Throws Error naming the first missing expected path.
DatasetManifest AdaptCorpus(CorpusKind kind, const std::filesystem::path &root,
                            const std::optional<std::filesystem::path> &aux = {},
                            std::uint64_t seed = 0);

/// Duration of a RIFF/WAVE or NIST SPHERE file from its header, if parsable.
std::optional<double> ReadAudioDuration(const std::filesystem::path &path);

}  // namespace satt

#endif  // SATT_CORPUS_ADAPTERS_H_
