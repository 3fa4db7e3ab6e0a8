// satt/common.h

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

#ifndef SATT_COMMON_H_
#define SATT_COMMON_H_

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace satt {

/// Error raised by every satt operation on bad input or violated
/// preconditions.  The message is meant to be shown to the user as-is.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &what) : std::runtime_error(what) {}
};

/// The five speaker attributes.  Order is the column order used in reports.
enum class Attribute { kAge, kGender, kNativeLanguage, kCountry, kEducation };

inline constexpr std::array<Attribute, 5> kAllAttributes = {
    Attribute::kAge, Attribute::kGender, Attribute::kNativeLanguage,
    Attribute::kCountry, Attribute::kEducation};

inline constexpr std::array<Attribute, 4> kCategoricalAttributes = {
    Attribute::kGender, Attribute::kNativeLanguage, Attribute::kCountry,
    Attribute::kEducation};

/// Manifest column name ("age", "gender", "native_language", ...).
std::string_view AttributeName(Attribute attribute);
/// Inverse of AttributeName; throws Error on unknown names.
Attribute ParseAttribute(std::string_view name);
inline bool IsCategorical(Attribute a) { return a != Attribute::kAge; }

// 64-bit FNV-1a over raw bytes.
std::uint64_t Fnv1a64(std::string_view bytes);
std::uint64_t Fnv1a64(std::string_view bytes, std::uint64_t state);
// splitmix64 finaliser applied to (a ^ rotated b).
std::uint64_t Mix64(std::uint64_t a, std::uint64_t b);
std::string HexU64(std::uint64_t v);

// String helpers.
std::string_view TrimView(std::string_view s);
std::string ToLower(std::string_view s);
std::vector<std::string> SplitString(std::string_view s, char sep);
/// Splits one CSV line honouring double quotes ("a,""b""" style).
std::vector<std::string> SplitCsvLine(std::string_view line, char sep = ',');
bool StartsWith(std::string_view s, std::string_view prefix);

/// Shortest representation that parses back to the same double.
std::string FormatDouble(double v);
std::string FormatFixed(double v, int decimals);
/// Strict full-string parses; nullopt on any trailing garbage.
std::optional<double> ParseDouble(std::string_view s);
std::optional<std::int64_t> ParseInt(std::string_view s);
std::optional<std::uint64_t> ParseUint(std::string_view s);

}  // namespace satt

#endif  // SATT_COMMON_H_
