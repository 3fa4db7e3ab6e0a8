// metrics_test.cc

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

#include <chrono>
#include <random>
#include <string>

#include "doctest.h"
#include "satt/metrics.h"
#include "support/metric_oracle.h"
#include "support/temp_dir.h"

namespace satt {
namespace {

using testing::MakeClassification;
using testing::MakeRegression;

EvalResult Cell(std::string model, std::string train, std::string test, Attribute a,
                MetricKind m, double v) {
  return EvalResult{"wavlm", std::move(model), std::move(train), std::move(test), a, m, v, false};
}

int Count(const std::string &s, const std::string &needle) {
  int n = 0;
  for (std::size_t p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

std::string LineWith(const std::string &text, const std::string &needle) {
  std::size_t p = text.find(needle);
  if (p == std::string::npos) return {};
  std::size_t b = text.rfind('\n', p) + 1, e = text.find('\n', p);
  return text.substr(b, e - b);
}

TEST_SUITE("metrics") {

TEST_CASE("mae worked values") {
  CHECK(Mae(MakeRegression({20, 30, 40}, {25, 27, 40})) == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
  CHECK(Mae(MakeRegression({33, 44}, {33, 44})) == 0.0);
  CHECK(Mae(MakeRegression({40, 20, 30}, {40, 25, 27})) ==
        Mae(MakeRegression({20, 30, 40}, {25, 27, 40})));
  CHECK_THROWS_AS(Mae(MakeRegression({}, {})), Error);
  CHECK_THROWS_AS(Mae(MakeClassification({0}, {0})), Error);
}

TEST_CASE("accuracy worked values") {
  CHECK(Accuracy(MakeClassification({0, 1, 1, 0}, {0, 1, 0, 1})) == 0.5);
  CHECK(Accuracy(MakeClassification({2, 1}, {2, 1})) == 1.0);
  CHECK(Accuracy(MakeClassification({1}, {0})) == 0.0);
  CHECK_THROWS_AS(Accuracy(MakeClassification({}, {})), Error);
}

TEST_CASE("confusion worked values") {
  ConfusionMatrix c = Confusion(MakeClassification({0, 0, 1, 1}, {0, 1, 0, 1}), 2);
  CHECK(c == ConfusionMatrix{{1, 1}, {1, 1}});
  CHECK(Confusion(MakeClassification({0, 1, 2}, {0, 1, 2}), 3) ==
        ConfusionMatrix{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  CHECK(Confusion(MakeClassification({0, 0}, {0, 2}), 3)[1] == std::vector<std::int64_t>{0, 0, 0});
  CHECK_THROWS_AS(Confusion(MakeClassification({0, 3}, {0, 1}), 3), Error);
}

TEST_CASE("macro f1 worked values") {
  CHECK(MacroF1(ConfusionMatrix{{1, 1}, {1, 1}}) == 0.5);
  CHECK(MacroF1(MakeClassification({0, 1, 2}, {0, 1, 2}), 3) == 1.0);
  // Class 2 has neither support nor predictions: left out.
  CHECK(MacroF1(MakeClassification({0, 1}, {0, 1}), 3) == 1.0);
  // Class 1 is predicted but absent: counts with F1 = 0.
  CHECK(MacroF1(MakeClassification({0, 0}, {0, 1}), 2) == doctest::Approx((2.0 / 3.0) / 2));
  CHECK_THROWS_AS(MacroF1(MakeClassification({}, {}), 2), Error);
}

TEST_CASE("metrics agree with brute-force oracles on 1000 random instances") {
  auto start = std::chrono::steady_clock::now();
  testing::OracleComparison cmp = testing::CompareWithOracles(1000, 2026);
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(cmp.instances == 1000);
  CHECK(cmp.max_abs_error <= 1e-12);
  CHECK(seconds < 10.0);
}

TEST_CASE("metric properties on random instances") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 300; ++t) {
    const int n = std::uniform_int_distribution<int>(1, 30)(rng);
    const int k = std::uniform_int_distribution<int>(2, 5)(rng);
    std::uniform_int_distribution<int> cls(0, k - 1);
    std::vector<int> y(n), y_hat(n);
    std::vector<double> a(n), a_hat(n), a_shift(n), a_hat_shift(n);
    const double c = std::uniform_real_distribution<double>(-50, 50)(rng);
    for (int i = 0; i < n; ++i) {
      y[i] = cls(rng);
      y_hat[i] = cls(rng);
      a[i] = std::uniform_real_distribution<double>(1, 100)(rng);
      a_hat[i] = std::uniform_real_distribution<double>(1, 100)(rng);
      a_shift[i] = a[i] + c;
      a_hat_shift[i] = a_hat[i] + c;
    }
    PredictionSet p = MakeClassification(y, y_hat);
    ConfusionMatrix conf = Confusion(p, k);
    std::int64_t trace = 0, total = 0;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        total += conf[i][j];
        if (i == j) trace += conf[i][j];
      }
    CHECK(total == n);
    CHECK(Accuracy(p) == double(trace) / n);
    const double f1 = MacroF1(p, k);
    CHECK(f1 >= 0.0);
    CHECK(f1 <= 1.0);
    CHECK(MacroF1(conf) == f1);
    const double mae = Mae(MakeRegression(a, a_hat));
    CHECK(mae >= 0.0);
    CHECK(Mae(MakeRegression(a_shift, a_hat_shift)) == doctest::Approx(mae).epsilon(1e-12));
  }
}

TEST_CASE("symmetric binary confusions give macro f1 equal to accuracy") {
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; b <= 6; ++b) {
      if (a + b == 0) continue;
      // Balanced support (a + b per class) and mirrored errors.
      ConfusionMatrix c{{a, b}, {b, a}};
      std::vector<int> y, y_hat;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (std::int64_t r = 0; r < c[i][j]; ++r) {
            y.push_back(i);
            y_hat.push_back(j);
          }
      PredictionSet p = MakeClassification(y, y_hat);
      CHECK(MacroF1(p, 2) == doctest::Approx(Accuracy(p)).epsilon(1e-12));
    }
}

TEST_CASE("score reports percentages") {
  auto acc = Score(MakeClassification({0, 1, 1, 0}, {0, 1, 0, 1}), 2, "f", "mlp", "a", "b");
  REQUIRE(acc.size() == 2);
  CHECK(acc[0].metric == MetricKind::kAccuracy);
  CHECK(acc[0].value == 50.0);
  CHECK(acc[1].metric == MetricKind::kF1);
  CHECK(acc[1].value == 50.0);
  auto mae = Score(MakeRegression({20, 30, 40}, {25, 27, 40}), 0, "f", "mlp", "a", "b");
  REQUIRE(mae.size() == 1);
  CHECK(mae[0].value == doctest::Approx(8.0 / 3.0));
}

TEST_CASE("eval results validate metric applicability") {
  CHECK_THROWS_AS(Cell("mlp", "t", "t", Attribute::kAge, MetricKind::kAccuracy, 1).Validate(),
                  Error);
  CHECK_THROWS_AS(Cell("mlp", "t", "t", Attribute::kGender, MetricKind::kMae, 1).Validate(),
                  Error);
  CHECK_NOTHROW(Cell("mlp", "t", "t", Attribute::kGender, MetricKind::kF1, 1).Validate());
  for (MetricKind m : {MetricKind::kMae, MetricKind::kAccuracy, MetricKind::kF1})
    CHECK(ParseMetric(MetricName(m)) == m);
}

TEST_CASE("empty result list renders a header-only csv") {
  CHECK(RenderReport({}, ReportLayout::kCsv) == std::string(kReportHeader) + "\n");
  CHECK(ParseResultsCsv(RenderReport({}, ReportLayout::kCsv)).empty());
}

TEST_CASE("csv report: canonical order, two decimals, round-trip") {
  std::vector<EvalResult> rs = {
      Cell("bilstm", "timit", "timit", Attribute::kAge, MetricKind::kMae, 5.123),
      Cell("mlp", "All", "timit", Attribute::kAge, MetricKind::kMae, 5.0),
      Cell("mlp", "timit", "timit", Attribute::kAge, MetricKind::kMae, 4.94),
      Cell("mlp", "saa", "saa", Attribute::kGender, MetricKind::kAccuracy, 97.456),
  };
  std::string csv = RenderReport(rs, ReportLayout::kCsv);
  CHECK(csv == std::string(kReportHeader) + "\n" +
                   "wavlm,mlp,saa,saa,gender,accuracy,97.46\n"
                   "wavlm,mlp,timit,timit,age,mae,4.94\n"
                   "wavlm,mlp,All,timit,age,mae,5.00\n"
                   "wavlm,bilstm,timit,timit,age,mae,5.12\n");
  std::vector<EvalResult> back = ParseResultsCsv(csv);
  CHECK(back.size() == 4);
  CHECK(RenderReport(back, ReportLayout::kCsv) == csv);
  CHECK_THROWS_AS(ParseResultsCsv("bad,header\n"), Error);
  CHECK_THROWS_AS(ParseResultsCsv(""), Error);
}

TEST_CASE("markdown report places the worked value in its section") {
  std::vector<EvalResult> rs = {
      Cell("mlp", "timit", "timit", Attribute::kAge, MetricKind::kMae, 4.94),
      Cell("mlp", "saa", "saa", Attribute::kAge, MetricKind::kMae, 6.5),
  };
  std::string md = RenderReport(rs, ReportLayout::kMarkdown);
  const std::size_t timit = md.find("## Test: timit");
  const std::size_t saa = md.find("## Test: saa");
  REQUIRE(timit != std::string::npos);
  REQUIRE(saa != std::string::npos);
  CHECK(saa < timit);
  const std::size_t value = md.find("4.94");
  CHECK(value > timit);
  CHECK(LineWith(md, "4.94") == "| wavlm | mlp | timit | **4.94** |");
}

TEST_CASE("markdown report bolds every tied best and dashes missing cells") {
  std::vector<EvalResult> rs = {
      Cell("mlp", "timit", "timit", Attribute::kAge, MetricKind::kMae, 5.001),
      Cell("resnet32", "timit", "timit", Attribute::kAge, MetricKind::kMae, 4.999),
      Cell("bilstm", "timit", "timit", Attribute::kAge, MetricKind::kMae, 6.0),
      Cell("mlp", "timit", "timit", Attribute::kGender, MetricKind::kAccuracy, 98.0),
      Cell("resnet32", "timit", "timit", Attribute::kGender, MetricKind::kAccuracy, 97.0),
      Cell("mlp", "timit", "timit", Attribute::kEducation, MetricKind::kF1, 40.0),
      Cell("mlp", "All", "timit", Attribute::kAge, MetricKind::kMae, 7.0),
  };
  EvalResult external = Cell("x-vector", "timit", "timit", Attribute::kAge, MetricKind::kMae, 1.0);
  external.features = "mfcc";
  external.external = true;
  rs.push_back(external);
  std::string md = RenderReport(rs, ReportLayout::kMarkdown);
  // 5.00 and 5.00 tie after rounding; the external 1.00 is never bold.
  CHECK(Count(md, "**5.00**") == 2);
  CHECK(Count(md, "**98.00**") == 1);
  CHECK(Count(md, "**40.00**") == 1);
  CHECK(md.find("**1.00**") == std::string::npos);
  CHECK(md.find("x-vector (external)") != std::string::npos);
  CHECK(LineWith(md, "| bilstm |") == "| wavlm | bilstm | timit | 6.00 | - | - |");
  CHECK(LineWith(md, "| Features |") ==
        "| Features | Model | Train | Age MAE | Gender Acc | Education F1 |");
  // Row order: mlp timit, mlp All, resnet32, bilstm, then external rows.
  CHECK(md.find("| mlp | timit") < md.find("| mlp | All"));
  CHECK(md.find("| mlp | All") < md.find("| resnet32 |"));
  CHECK(md.find("| resnet32 |") < md.find("| bilstm |"));
  CHECK(md.find("| bilstm |") < md.find("(external)"));
  // External rows stay out of the csv.
  CHECK(RenderReport(rs, ReportLayout::kCsv).find("x-vector") == std::string::npos);
}

TEST_CASE("higher is better for accuracy and f1") {
  std::vector<EvalResult> rs = {
      Cell("mlp", "a", "a", Attribute::kGender, MetricKind::kF1, 80),
      Cell("bilstm", "a", "a", Attribute::kGender, MetricKind::kF1, 90),
  };
  std::string md = RenderReport(rs, ReportLayout::kMarkdown);
  CHECK(md.find("**90.00**") != std::string::npos);
  CHECK(md.find("**80.00**") == std::string::npos);
}

TEST_CASE("results file reading") {
  testing::TempDir dir;
  testing::WriteText(dir / "r.csv", std::string(kReportHeader) +
                                         "\nmfcc,i-vector,timit,timit,age,mae,5.53\n");
  auto rs = ReadResultsCsv(dir / "r.csv", true);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].external);
  CHECK(rs[0].value == 5.53);
  CHECK_THROWS_AS(ReadResultsCsv(dir / "none.csv"), Error);
}

}  // TEST_SUITE

}  // namespace
}  // namespace satt
