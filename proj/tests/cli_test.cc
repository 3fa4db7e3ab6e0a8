// cli_test.cc

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

#include <sys/wait.h>

#include <cstdio>
#include <string>

#include "doctest.h"
#include "satt/corpus.h"
#include "satt/embed_store.h"
#include "support/standard_corpora.h"
#include "support/temp_dir.h"

namespace satt {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int status = -1;
  std::string output;  // stdout and stderr
};

Outcome Satt(const std::string &args) {
  const std::string cmd = std::string(SATT_CLI_PATH) + " " + args + " 2>&1";
  Outcome out;
  FILE *pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) out.output.append(buf, n);
  const int raw = ::pclose(pipe);
  out.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return out;
}

std::string Q(const fs::path &p) { return "'" + p.string() + "'"; }

bool Contains(const std::string &s, const std::string &needle) {
  return s.find(needle) != std::string::npos;
}

TEST_SUITE("cli") {

TEST_CASE("usage errors exit nonzero") {
  Outcome unknown = Satt("frobnicate");
  CHECK(unknown.status != 0);
  CHECK(Contains(unknown.output, "Usage"));
  Outcome flag = Satt("synth --bogus-flag");
  CHECK(flag.status != 0);
  CHECK(Satt("--help").status == 0);
}

TEST_CASE("runtime errors carry a diagnostic") {
  testing::TempDir dir;
  Outcome o = Satt("manifest-summary --manifests " + Q(dir / "missing.csv"));
  CHECK(o.status != 0);
  CHECK(Contains(o.output, "satt: error:"));
  Outcome v = Satt("ingest --kind voxceleb2 --root " + Q(dir.path()) + " --out " + Q(dir / "m.csv"));
  CHECK(v.status != 0);
  CHECK(Contains(v.output, "aux"));
}

TEST_CASE("ingest writes a manifest") {
  testing::TempDir dir;
  const std::string header = "client_id\tpath\tsentence\tgender\taccent\n";
  testing::WriteText(dir / "cv" / "train.tsv", header + "c1\ta.mp3\thi\tmale\tus\n");
  testing::WriteText(dir / "cv" / "dev.tsv", header + "c2\tb.mp3\thi\tfemale\tindia\n");
  testing::WriteText(dir / "cv" / "test.tsv", header + "c3\tc.mp3\thi\tfemale\t\n");
  Outcome o = Satt("ingest --kind common_voice --root " + Q(dir / "cv") + " --out " +
                   Q(dir / "cv.csv"));
  CHECK(o.status == 0);
  DatasetManifest m = ParseManifest(dir / "cv.csv");
  CHECK(m.records.size() == 3);
  CHECK(m.dataset_id == "common_voice");
  Outcome s = Satt("manifest-summary --manifests " + Q(dir / "cv.csv"));
  CHECK(s.status == 0);
  CHECK(Contains(s.output, "common_voice,dev,2,2"));
}

TEST_CASE("synth is deterministic for a seed") {
  testing::TempDir dir;
  REQUIRE(Satt("synth-manifest --speakers 10 --segments 2 --seed 3 --out " + Q(dir / "m.csv"))
              .status == 0);
  const std::string base = "synth --manifest " + Q(dir / "m.csv") + " --dim 32 --separation 2.0 ";
  CHECK(Satt(base + "--seed 7 --out " + Q(dir / "a.embs")).status == 0);
  CHECK(Satt(base + "--seed 7 --out " + Q(dir / "b.embs")).status == 0);
  CHECK(Satt(base + "--seed 8 --out " + Q(dir / "c.embs")).status == 0);
  const std::string a = testing::ReadText(dir / "a.embs");
  CHECK(a == testing::ReadText(dir / "b.embs"));
  CHECK(a != testing::ReadText(dir / "c.embs"));
  CHECK(EmbeddingStore::Open(dir / "a.embs").dim() == 32);
}

TEST_CASE("matrix dry run on the standard datasets plans 51 runs") {
  testing::TempDir dir;
  std::string args;
  for (const DatasetManifest &m : testing::StandardManifests()) {
    const fs::path p = dir / (m.dataset_id + ".csv");
    WriteManifest(m, p);
    args += " " + Q(p);
  }
  Outcome o = Satt("matrix --dry-run --arch mlp,lstm,resnet32 --manifests" + args);
  CHECK(o.status == 0);
  CHECK(Contains(o.output, "\n51 runs\n"));
  CHECK(Contains(o.output, "attribute=education architecture=mlp train=timit test=timit\n"));
}

TEST_CASE("train, evaluate, matrix and report") {
  testing::TempDir dir;
  REQUIRE(Satt("synth-manifest --dataset-id toy --speakers 30 --segments 3 --seed 2 --out " +
               Q(dir / "toy.csv"))
              .status == 0);
  REQUIRE(Satt("synth --manifest " + Q(dir / "toy.csv") +
               " --dim 8 --frames-min 2 --frames-max 3 --seed 2 --out " + Q(dir / "toy.embs"))
              .status == 0);
  const std::string data = " --manifests " + Q(dir / "toy.csv") + " --stores " + Q(dir / "toy.embs");

  Outcome t = Satt("train --attribute gender --arch mlp --epochs 5" + data + " --out " +
                   Q(dir / "run") + " --seed 4");
  CHECK(t.status == 0);
  CHECK(fs::exists(dir / "run" / "checkpoint.satt"));
  CHECK(fs::exists(dir / "run" / "train_log.csv"));
  CHECK(Contains(t.output, "features,model,train,test,attribute,metric,value"));

  Outcome e = Satt("evaluate --checkpoint " + Q(dir / "run" / "checkpoint.satt") + data);
  CHECK(e.status == 0);
  CHECK(Contains(e.output, ",mlp,toy,toy,gender,accuracy,"));
  // Evaluation reproduces the training-time scores exactly.
  CHECK(e.output == testing::ReadText(dir / "run" / "results.csv"));

  testing::WriteText(dir / "cfg.txt", "max_epochs = 3\nbatch_size = 16\n");
  const std::string matrix = "matrix --arch mlp --config " + Q(dir / "cfg.txt") + data +
                             " --out " + Q(dir / "out") + " --seed 1";
  Outcome m1 = Satt(matrix);
  CHECK(m1.status == 0);
  CHECK(Contains(m1.output, "2 runs: 2 trained, 0 reused, 0 failed"));
  Outcome m2 = Satt(matrix + " --workers 2");
  CHECK(Contains(m2.output, "2 runs: 0 trained, 2 reused, 0 failed"));
  CHECK(fs::exists(dir / "out" / "run_index.csv"));

  Outcome r = Satt("report --results " + Q(dir / "out") + " --layout markdown");
  CHECK(r.status == 0);
  CHECK(Contains(r.output, "## Test: toy"));
  Outcome c = Satt("report --results " + Q(dir / "out" / "report.csv") + " --layout csv");
  CHECK(c.output == testing::ReadText(dir / "out" / "report.csv"));

  testing::WriteText(dir / "bad.txt", "learning_speed = 3\n");
  Outcome bad = Satt("matrix --arch mlp --config " + Q(dir / "bad.txt") + data + " --out " +
                     Q(dir / "out2"));
  CHECK(bad.status != 0);
  CHECK(Contains(bad.output, "learning_speed"));
}

}  // TEST_SUITE

}  // namespace
}  // namespace satt
