// heads/model.cc

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

#include "satt/heads/model.h"

#include "satt/heads/bilstm.h"
#include "satt/heads/mlp.h"
#include "satt/heads/resnet.h"

namespace satt {

std::string_view ArchitectureName(Architecture arch) {
  switch (arch) {
    case Architecture::kMlp: return "mlp";
    case Architecture::kResNet32: return "resnet32";
    case Architecture::kBiLstm: return "bilstm";
  }
  throw Error("unknown architecture");
}

Architecture ParseArchitecture(std::string_view name) {
  const std::string n = ToLower(TrimView(name));
  if (n == "mlp") return Architecture::kMlp;
  if (n == "resnet32" || n == "resnet") return Architecture::kResNet32;
  if (n == "bilstm" || n == "lstm") return Architecture::kBiLstm;
  throw Error("unknown architecture '" + std::string(name) + "' (expected mlp, resnet32, bilstm)");
}

InputKind InputKindFor(Architecture arch) {
  return arch == Architecture::kBiLstm ? InputKind::kSequence : InputKind::kPooled;
}

void TaskSpec::Validate() const {
  const bool regression = attribute == Attribute::kAge;
  if (regression != (kind == TaskKind::kRegression))
    throw Error("age is the only regression attribute");
  if (kind == TaskKind::kClassification && num_classes < 2)
    throw Error("classification needs at least 2 classes, got " + std::to_string(num_classes));
}

template <typename T>
Model<T>::Model(Architecture arch, int input_dim, const TaskSpec &task, const HeadConfig &hyper,
                std::unique_ptr<Head<T>> head)
    : arch_(arch), input_dim_(input_dim), task_(task), hyper_(hyper), head_(std::move(head)) {}

template <typename T>
Matrix<T> Model<T>::Forward(const HeadInput<T> &in, bool training, std::mt19937_64 *rng) {
  if (in.kind != task_.input_kind)
    throw Error(std::string(ArchitectureName(arch_)) + " expects " +
                (task_.input_kind == InputKind::kPooled ? "pooled vectors" : "frame sequences"));
  if (in.kind == InputKind::kPooled) {
    if (in.pooled.cols() != input_dim_)
      throw Error("input width " + std::to_string(in.pooled.cols()) + " does not match model " +
                  std::to_string(input_dim_));
  } else {
    for (const Matrix<T> &s : in.sequences)
      if (s.cols() != input_dim_ || s.rows() < 1)
        throw Error("sequence of shape " + std::to_string(s.rows()) + "x" +
                    std::to_string(s.cols()) + " does not match model width " +
                    std::to_string(input_dim_));
  }
  return head_->Forward(in, training, rng);
}

namespace {

void CheckTask(const TaskSpec &task, Architecture arch, int input_dim) {
  task.Validate();
  if (task.input_kind != InputKindFor(arch))
    throw Error(std::string(ArchitectureName(arch)) + " needs " +
                (InputKindFor(arch) == InputKind::kPooled ? "pooled" : "sequence") + " input");
  if (input_dim <= 0) throw Error("input dimension must be positive");
}

void CheckDropout(double p) {
  if (!(p >= 0 && p < 1)) throw Error("dropout must lie in [0, 1)");
}

}  // namespace

template <typename T>
Model<T> BuildMlp(int input_dim, const TaskSpec &task, double dropout, std::uint64_t seed) {
  CheckTask(task, Architecture::kMlp, input_dim);
  CheckDropout(dropout);
  HeadConfig hyper;
  hyper.mlp_dropout = dropout;
  return Model<T>(Architecture::kMlp, input_dim, task, hyper,
                  std::make_unique<MlpHead<T>>(input_dim, task.OutputWidth(), dropout, seed));
}

template <typename T>
Model<T> BuildResNet32(int input_dim, const TaskSpec &task, const HeadConfig &hyper,
                       std::uint64_t seed) {
  CheckTask(task, Architecture::kResNet32, input_dim);
  if (hyper.resnet_blocks < 1) throw Error("resnet blocks per stage must be >= 1");
  HeadConfig h = hyper;
  if (h.map_height <= 0 || h.map_width <= 0) {
    auto [mh, mw] = SquarestFactorization(input_dim);
    h.map_height = mh;
    h.map_width = mw;
  }
  if (h.map_height * h.map_width != input_dim)
    throw Error("input dimension " + std::to_string(input_dim) + " does not factor into a " +
                std::to_string(h.map_height) + "x" + std::to_string(h.map_width) + " map");
  return Model<T>(Architecture::kResNet32, input_dim, task, h,
                  std::make_unique<ResNetHead<T>>(input_dim, task.OutputWidth(), h.resnet_blocks,
                                                  h.map_height, h.map_width, seed));
}

template <typename T>
Model<T> BuildBiLstm(int input_dim, const TaskSpec &task, int hidden, double dropout,
                     std::uint64_t seed) {
  CheckTask(task, Architecture::kBiLstm, input_dim);
  CheckDropout(dropout);
  if (hidden <= 0) throw Error("LSTM hidden size must be positive");
  HeadConfig hyper;
  hyper.lstm_hidden = hidden;
  hyper.lstm_dropout = dropout;
  return Model<T>(
      Architecture::kBiLstm, input_dim, task, hyper,
      std::make_unique<BiLstmHead<T>>(input_dim, task.OutputWidth(), hidden, dropout, seed));
}

template <typename T>
Model<T> BuildModel(Architecture arch, int input_dim, const TaskSpec &task,
                    const HeadConfig &hyper, std::uint64_t seed) {
  switch (arch) {
    case Architecture::kMlp: return BuildMlp<T>(input_dim, task, hyper.mlp_dropout, seed);
    case Architecture::kResNet32: return BuildResNet32<T>(input_dim, task, hyper, seed);
    case Architecture::kBiLstm:
      return BuildBiLstm<T>(input_dim, task, hyper.lstm_hidden, hyper.lstm_dropout, seed);
  }
  throw Error("unknown architecture");
}

#define SATT_INSTANTIATE(T)                                                                 \
  template class Model<T>;                                                                  \
  template Model<T> BuildMlp<T>(int, const TaskSpec &, double, std::uint64_t);              \
  template Model<T> BuildResNet32<T>(int, const TaskSpec &, const HeadConfig &,             \
                                     std::uint64_t);                                        \
  template Model<T> BuildBiLstm<T>(int, const TaskSpec &, int, double, std::uint64_t);      \
  template Model<T> BuildModel<T>(Architecture, int, const TaskSpec &, const HeadConfig &, \
                                  std::uint64_t);
SATT_INSTANTIATE(float)
SATT_INSTANTIATE(double)
#undef SATT_INSTANTIATE

}  // namespace satt
