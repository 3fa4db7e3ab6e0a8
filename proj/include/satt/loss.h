// satt/loss.h

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

#ifndef SATT_LOSS_H_
#define SATT_LOSS_H_

#include <cmath>
#include <string>
#include <vector>

#include "satt/heads/tensor.h"

namespace satt {

/// Mean absolute deviation over a B x 1 prediction column.  `grad`, when
/// given, receives d(loss)/d(pred) using sign(0) = 0.
template <typename T>
T L1Loss(const Matrix<T> &pred, const std::vector<T> &target, Matrix<T> *grad = nullptr) {
  const Eigen::Index n = pred.rows();
  if (n == 0) throw Error("loss of an empty batch");
  if (pred.cols() != 1 || static_cast<std::size_t>(n) != target.size())
    throw Error("regression loss needs B x 1 predictions and B targets");
  double sum = 0;
  if (grad) grad->resize(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = double(pred(i, 0)) - double(target[i]);
    if (!std::isfinite(d)) throw Error("non-finite regression input");
    sum += std::abs(d);
    if (grad) (*grad)(i, 0) = T((d > 0) - (d < 0)) / T(n);
  }
  return T(sum / double(n));
}

/// Weighted cross-entropy: sum_i w[y_i] * nll_i / sum_i w[y_i], the plain mean
/// when `weights` is empty.  Log-softmax is computed after subtracting the
/// row maximum.
template <typename T>
T CrossEntropyLoss(const Matrix<T> &logits, const std::vector<int> &target,
                   const std::vector<double> &weights = {}, Matrix<T> *grad = nullptr) {
  const Eigen::Index n = logits.rows(), k = logits.cols();
  if (n == 0) throw Error("loss of an empty batch");
  if (static_cast<std::size_t>(n) != target.size())
    throw Error("classification loss needs one target per row");
  if (!weights.empty() && static_cast<Eigen::Index>(weights.size()) != k)
    throw Error("class weight count does not match logits width");
  double total = 0, wsum = 0;
  Matrix<T> prob(n, k);
  std::vector<double> w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int y = target[i];
    if (y < 0 || y >= k)
      throw Error("target " + std::to_string(y) + " out of range for " + std::to_string(k) +
                  " classes");
    const double m = logits.row(i).maxCoeff();
    double z = 0;
    for (Eigen::Index j = 0; j < k; ++j) z += std::exp(double(logits(i, j)) - m);
    const double lse = m + std::log(z);
    for (Eigen::Index j = 0; j < k; ++j) prob(i, j) = T(std::exp(double(logits(i, j)) - lse));
    w[i] = weights.empty() ? 1.0 : weights[y];
    total += w[i] * (lse - double(logits(i, y)));
    wsum += w[i];
  }
  if (!(wsum > 0)) throw Error("class weights of the batch sum to zero");
  if (grad) {
    *grad = prob;
    for (Eigen::Index i = 0; i < n; ++i) {
      (*grad)(i, target[i]) -= T(1);
      grad->row(i) *= T(w[i] / wsum);
    }
  }
  return T(total / wsum);
}

/// Row-wise softmax.
template <typename T>
Matrix<T> Softmax(const Matrix<T> &logits) {
  Matrix<T> p(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const T m = logits.row(i).maxCoeff();
    p.row(i) = (logits.row(i).array() - m).exp();
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

/// Index of the largest entry of each row; the first one on ties.
template <typename T>
std::vector<int> ArgmaxRows(const Matrix<T> &logits) {
  std::vector<int> out(logits.rows());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    Eigen::Index j;
    logits.row(i).maxCoeff(&j);
    out[i] = static_cast<int>(j);
  }
  return out;
}

}  // namespace satt

#endif  // SATT_LOSS_H_
