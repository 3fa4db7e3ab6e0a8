// satt/config_file.h

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

#ifndef SATT_CONFIG_FILE_H_
#define SATT_CONFIG_FILE_H_

#include <filesystem>
#include <map>
#include <string>

namespace satt {

// Flat "key = value" text: one pair per line, '#' starts a comment, blank
// lines are skipped.  Repeated keys are an error.
std::map<std::string, std::string> ReadKeyValueFile(const std::filesystem::path &path);
std::map<std::string, std::string> ParseKeyValueText(const std::string &text);

}  // namespace satt

#endif  // SATT_CONFIG_FILE_H_
