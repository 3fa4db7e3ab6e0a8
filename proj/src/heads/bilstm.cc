// heads/bilstm.cc

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

#include "satt/heads/bilstm.h"

namespace satt {

template <typename T>
BiLstmHead<T>::BiLstmHead(int input_dim, int output_dim, int hidden, double dropout,
                          std::uint64_t seed)
    : input_dim_(input_dim), hidden_(hidden), dropout_(dropout) {
  if (hidden <= 0) throw Error("LSTM hidden size must be positive");
  ParameterSet<T> &p = this->params_;
  const int width = 2 * hidden;
  for (int l = 0; l < kLayers; ++l) {
    const int in = l == 0 ? input_dim : width;
    const std::string name = "lstm" + std::to_string(l + 1);
    fwd_[l] = LstmDirection<T>(p, name + ".fwd", in, hidden, false);
    bwd_[l] = LstmDirection<T>(p, name + ".bwd", in, hidden, true);
    norm_[l] = LayerNorm<T>(p, name + ".norm", width);
  }
  has_input_proj_ = input_dim != width;
  if (has_input_proj_) input_proj_ = Linear<T>(p, "lstm1.skip", input_dim, width, false);
  attention_ = AdditiveAttention<T>(p, "attention", width, hidden);
  out_ = Linear<T>(p, "out", width, output_dim);

  std::mt19937_64 rng(seed);
  for (int l = 0; l < kLayers; ++l) {
    fwd_[l].Init(rng);
    bwd_[l].Init(rng);
    norm_[l].Init();
  }
  if (has_input_proj_) input_proj_.Init(rng);
  attention_.Init(rng);
  out_.Init(rng);
}

template <typename T>
Matrix<T> BiLstmHead<T>::EncodeImpl(const Matrix<T> &x, bool training, std::mt19937_64 *rng,
                                    SequenceCache *cache) const {
  const int width = 2 * hidden_;
  Matrix<T> cur = x;
  for (int l = 0; l < kLayers; ++l) {
    LayerCache *lc = cache ? &cache->layers[l] : nullptr;
    Matrix<T> both(cur.rows(), width);
    both.leftCols(hidden_) = fwd_[l].Forward(cur, lc ? &lc->fwd : nullptr);
    both.rightCols(hidden_) = bwd_[l].Forward(cur, lc ? &lc->bwd : nullptr);
    Matrix<T> y = norm_[l].Forward(both, lc ? &lc->norm : nullptr);
    if (training && dropout_ > 0) {
      Matrix<T> mask = DropoutMask<T>(y.rows(), y.cols(), dropout_, *rng);
      y = y.cwiseProduct(mask);
      if (lc) lc->mask = std::move(mask);
    }
    if (l == 0 && has_input_proj_) y += input_proj_.Apply(cur);
    else y += cur;
    if (lc) lc->input = std::move(cur);
    cur = std::move(y);
  }
  return cur;
}

template <typename T>
Matrix<T> BiLstmHead<T>::Encode(const Matrix<T> &sequence) const {
  return EncodeImpl(sequence, false, nullptr, nullptr);
}

template <typename T>
RowVector<T> BiLstmHead<T>::Attend(const Matrix<T> &sequence, Vector<T> *weights) const {
  return attention_.Forward(Encode(sequence), nullptr, weights);
}

template <typename T>
Matrix<T> BiLstmHead<T>::Forward(const HeadInput<T> &in, bool training, std::mt19937_64 *rng) {
  if (in.kind != InputKind::kSequence)
    throw Error("BiLSTM expects frame sequences, not pooled vectors");
  if (training && dropout_ > 0 && !rng)
    throw Error("training-mode forward needs a random generator");
  const int batch = in.batch_size();
  Matrix<T> pooled(batch, 2 * hidden_);
  if (training) caches_.assign(batch, SequenceCache{});
  for (int b = 0; b < batch; ++b) {
    const Matrix<T> &seq = in.sequences[b];
    if (seq.rows() < 1 || seq.cols() != input_dim_)
      throw Error("BiLSTM expects T >= 1 frames of width " + std::to_string(input_dim_));
    SequenceCache *cache = training ? &caches_[b] : nullptr;
    Matrix<T> top = EncodeImpl(seq, training, rng, cache);
    pooled.row(b) = attention_.Forward(top, cache ? &cache->attention : nullptr);
  }
  return out_.Forward(pooled, training);
}

template <typename T>
void BiLstmHead<T>::Backward(const Matrix<T> &grad_out) {
  Matrix<T> dpooled = out_.Backward(grad_out);
  for (std::size_t b = 0; b < caches_.size(); ++b) {
    SequenceCache &cache = caches_[b];
    Matrix<T> g = attention_.Backward(cache.attention, dpooled.row(b));
    for (int l = kLayers - 1; l >= 0; --l) {
      LayerCache &lc = cache.layers[l];
      Matrix<T> dskip;
      if (l == 0 && has_input_proj_) dskip = input_proj_.Backward(lc.input, g);
      else dskip = g;
      Matrix<T> dy = lc.mask.size() ? Matrix<T>(g.cwiseProduct(lc.mask)) : g;
      Matrix<T> dboth = norm_[l].Backward(lc.norm, dy);
      Matrix<T> dx = fwd_[l].Backward(lc.fwd, dboth.leftCols(hidden_));
      dx += bwd_[l].Backward(lc.bwd, dboth.rightCols(hidden_));
      g = dx + dskip;
    }
  }
}

template class BiLstmHead<float>;
template class BiLstmHead<double>;

}  // namespace satt
