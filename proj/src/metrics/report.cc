// metrics/report.cc

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

#include "satt/metrics.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace satt {

namespace {

int ModelRank(const std::string &model) {
  static const char *kOrder[] = {"mlp", "resnet32", "bilstm"};
  for (int i = 0; i < 3; ++i)
    if (model == kOrder[i]) return i;
  return 3;
}

// Single datasets in name order, then "All".
auto TrainKey(const std::string &train) { return std::make_tuple(train == "All", train); }

int AttributeRank(Attribute a) {
  return static_cast<int>(std::find(kAllAttributes.begin(), kAllAttributes.end(), a) -
                          kAllAttributes.begin());
}

auto RowKey(const EvalResult &r) {
  return std::make_tuple(r.external, r.features, ModelRank(r.model), r.model, TrainKey(r.train));
}

bool CanonicalLess(const EvalResult &a, const EvalResult &b) {
  return std::make_tuple(a.test, RowKey(a), AttributeRank(a.attribute), a.metric) <
         std::make_tuple(b.test, RowKey(b), AttributeRank(b.attribute), b.metric);
}

std::string DisplayAttribute(Attribute a) {
  switch (a) {
    case Attribute::kAge: return "Age";
    case Attribute::kGender: return "Gender";
    case Attribute::kNativeLanguage: return "Native language";
    case Attribute::kCountry: return "Country";
    case Attribute::kEducation: return "Education";
  }
  return "?";
}

std::string DisplayMetric(MetricKind m) {
  switch (m) {
    case MetricKind::kMae: return "MAE";
    case MetricKind::kAccuracy: return "Acc";
    case MetricKind::kF1: return "F1";
  }
  return "?";
}

std::string RenderCsv(std::vector<EvalResult> results) {
  std::sort(results.begin(), results.end(), CanonicalLess);
  std::ostringstream out;
  out << kReportHeader << '\n';
  for (const EvalResult &r : results) {
    if (r.external) continue;
    out << r.features << ',' << r.model << ',' << r.train << ',' << r.test << ','
        << AttributeName(r.attribute) << ',' << MetricName(r.metric) << ','
        << FormatFixed(r.value, 2) << '\n';
  }
  return out.str();
}

using Column = std::pair<Attribute, MetricKind>;

bool ColumnLess(const Column &a, const Column &b) {
  return std::make_tuple(AttributeRank(a.first), a.second) <
         std::make_tuple(AttributeRank(b.first), b.second);
}

std::string RenderMarkdown(std::vector<EvalResult> results) {
  std::sort(results.begin(), results.end(), CanonicalLess);
  std::vector<Column> columns;
  for (const EvalResult &r : results) {
    Column c{r.attribute, r.metric};
    if (std::find(columns.begin(), columns.end(), c) == columns.end()) columns.push_back(c);
  }
  std::sort(columns.begin(), columns.end(), ColumnLess);

  std::ostringstream out;
  out << "# Results\n";
  std::size_t i = 0;
  while (i < results.size()) {
    const std::string test = results[i].test;
    std::size_t end = i;
    while (end < results.size() && results[end].test == test) ++end;

    // Rows in canonical order; cells keyed by column.  Later duplicates win.
    std::vector<std::tuple<bool, std::string, std::string, std::string>> rows;
    std::map<std::pair<std::size_t, std::size_t>, double> cells;
    for (std::size_t j = i; j < end; ++j) {
      const EvalResult &r = results[j];
      auto row = std::make_tuple(r.external, r.features, r.model, r.train);
      auto it = std::find(rows.begin(), rows.end(), row);
      const std::size_t ri = it - rows.begin();
      if (it == rows.end()) rows.push_back(row);
      const std::size_t ci =
          std::find(columns.begin(), columns.end(), Column{r.attribute, r.metric}) -
          columns.begin();
      cells[{ri, ci}] = std::round(r.value * 100.0) / 100.0;
    }
    std::vector<std::optional<double>> best(columns.size());
    for (const auto &[key, v] : cells) {
      if (std::get<0>(rows[key.first])) continue;
      std::optional<double> &b = best[key.second];
      const bool lower = LowerIsBetter(columns[key.second].second);
      if (!b || (lower ? v < *b : v > *b)) b = v;
    }

    out << "\n## Test: " << test << "\n\n| Features | Model | Train |";
    for (const Column &c : columns)
      out << ' ' << DisplayAttribute(c.first) << ' ' << DisplayMetric(c.second) << " |";
    out << "\n|---|---|---|";
    for (std::size_t c = 0; c < columns.size(); ++c) out << "---:|";
    out << '\n';
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto &[external, features, model, train] = rows[r];
      out << "| " << features << " | " << model << (external ? " (external)" : "") << " | "
          << train << " |";
      for (std::size_t c = 0; c < columns.size(); ++c) {
        auto it = cells.find({r, c});
        if (it == cells.end()) {
          out << " - |";
          continue;
        }
        const std::string text = FormatFixed(it->second, 2);
        const bool bold = !external && best[c] && *best[c] == it->second;
        out << ' ' << (bold ? "**" + text + "**" : text) << " |";
      }
      out << '\n';
    }
    i = end;
  }
  return out.str();
}

}  // namespace

std::string RenderReport(const std::vector<EvalResult> &results, ReportLayout layout) {
  for (const EvalResult &r : results) r.Validate();
  return layout == ReportLayout::kCsv ? RenderCsv(results) : RenderMarkdown(results);
}

std::vector<EvalResult> ParseResultsCsv(const std::string &text, bool external) {
  std::istringstream in(text);
  std::string line;
  std::vector<EvalResult> out;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (TrimView(line) != kReportHeader)
        throw Error("results csv: expected header '" + std::string(kReportHeader) + "'");
      continue;
    }
    if (TrimView(line).empty()) continue;
    std::vector<std::string> f = SplitCsvLine(line);
    if (f.size() != 7)
      throw Error("results csv line " + std::to_string(line_no) + ": expected 7 fields");
    EvalResult r;
    r.features = f[0];
    r.model = f[1];
    r.train = f[2];
    r.test = f[3];
    r.attribute = ParseAttribute(TrimView(f[4]));
    r.metric = ParseMetric(f[5]);
    auto v = ParseDouble(TrimView(f[6]));
    if (!v) throw Error("results csv line " + std::to_string(line_no) + ": bad value");
    r.value = *v;
    r.external = external;
    r.Validate();
    out.push_back(std::move(r));
  }
  if (line_no == 0) throw Error("results csv: missing header");
  return out;
}

std::vector<EvalResult> ReadResultsCsv(const std::filesystem::path &path, bool external) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open results file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseResultsCsv(ss.str(), external);
}

}  // namespace satt
