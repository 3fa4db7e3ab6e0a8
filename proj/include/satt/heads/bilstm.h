// satt/heads/bilstm.h

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

#ifndef SATT_HEADS_BILSTM_H_
#define SATT_HEADS_BILSTM_H_

#include <vector>

#include "satt/heads/head.h"
#include "satt/heads/layers.h"

namespace satt {

/// Three bidirectional LSTM layers (H units per direction).  Each layer's
/// 2H output goes through layer normalization and dropout and is added to
/// the layer input (through a learned projection when the widths differ).
/// Additive attention pools the top layer over time; a linear layer maps the
/// pooled 2H vector to the task output.  Sequences in a batch may differ in
/// length and are processed one at a time.
template <typename T>
class BiLstmHead : public Head<T> {
 public:
  static constexpr int kLayers = 3;

  BiLstmHead(int input_dim, int output_dim, int hidden, double dropout, std::uint64_t seed);

  Matrix<T> Forward(const HeadInput<T> &in, bool training, std::mt19937_64 *rng) override;
  void Backward(const Matrix<T> &grad_out) override;
  ArchitectureSummary Summary() const override { return {kLayers + 1, 0, {2 * hidden_}}; }

  /// Top-layer features (T x 2H) fed to the attention, evaluation mode.
  Matrix<T> Encode(const Matrix<T> &sequence) const;
  /// Attended vector and attention weights, evaluation mode.
  RowVector<T> Attend(const Matrix<T> &sequence, Vector<T> *weights) const;
  AdditiveAttention<T> &attention() { return attention_; }

 private:
  struct LayerCache {
    typename LstmDirection<T>::Cache fwd, bwd;
    typename LayerNorm<T>::Cache norm;
    Matrix<T> mask;
    Matrix<T> input;
  };
  struct SequenceCache {
    LayerCache layers[kLayers];
    typename AdditiveAttention<T>::Cache attention;
    RowVector<T> pooled;
  };

  Matrix<T> EncodeImpl(const Matrix<T> &x, bool training, std::mt19937_64 *rng,
                       SequenceCache *cache) const;

  int input_dim_, hidden_;
  double dropout_;
  LstmDirection<T> fwd_[kLayers], bwd_[kLayers];
  LayerNorm<T> norm_[kLayers];
  Linear<T> input_proj_;
  bool has_input_proj_ = false;
  AdditiveAttention<T> attention_;
  Linear<T> out_;
  std::vector<SequenceCache> caches_;
};

}  // namespace satt

#endif  // SATT_HEADS_BILSTM_H_
