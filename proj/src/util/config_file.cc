// util/config_file.cc

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

#include "satt/config_file.h"

#include <fstream>
#include <sstream>

#include "satt/common.h"

namespace satt {

std::map<std::string, std::string> ParseKeyValueText(const std::string &text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string_view t = TrimView(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string_view::npos)
      throw Error("config line " + std::to_string(line_no) + ": expected key=value");
    std::string key(TrimView(t.substr(0, eq)));
    std::string value(TrimView(t.substr(eq + 1)));
    if (key.empty()) throw Error("config line " + std::to_string(line_no) + ": empty key");
    if (!out.emplace(key, value).second)
      throw Error("config line " + std::to_string(line_no) + ": repeated key '" + key + "'");
  }
  return out;
}

std::map<std::string, std::string> ReadKeyValueFile(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return ParseKeyValueText(buf.str());
  } catch (const Error &e) {
    throw Error(path.string() + ": " + e.what());
  }
}

}  // namespace satt
