// support/gradcheck.h

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

#ifndef SATT_TESTS_SUPPORT_GRADCHECK_H_
#define SATT_TESTS_SUPPORT_GRADCHECK_H_

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "satt/trainer.h"

namespace satt::testing {

struct GradCheckResult {
  double max_rel_error = 0;
  std::size_t coordinates = 0;
  std::size_t kinks = 0;  // coordinates scored against a one-sided slope
};

inline double RelError(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

// Central differences over trainable coordinates.  Every loss evaluation uses
// a generator freshly seeded with `dropout_seed`, so dropout masks agree with
// the analytic pass.  `per_tensor` > 0 samples that many coordinates from each
// tensor instead of visiting all of them.  With `kink_aware`, a coordinate
// whose forward and backward slopes differ by more than `kink_gap` (relative)
// may have a ReLU kink inside [w - h, w + h]; it is scored against the
// closest of the central and one-sided slopes.
template <typename T>
GradCheckResult CheckGradients(Model<T> &model, const HeadInput<T> &in,
                               const BatchTargets &targets, const std::vector<double> &weights,
                               std::uint64_t dropout_seed, double h = 1e-5, int per_tensor = 0,
                               std::uint64_t sample_seed = 0, bool kink_aware = false,
                               double kink_gap = 1e-2) {
  std::mt19937_64 rng(dropout_seed);
  ComputeGradient(model, in, targets, weights, &rng);
  std::vector<std::vector<T>> analytic;
  for (auto &t : model.params().tensors()) analytic.push_back(t.grad);

  auto loss_at = [&]() {
    std::mt19937_64 r(dropout_seed);
    return double(ComputeGradient(model, in, targets, weights, &r));
  };

  GradCheckResult res;
  std::mt19937_64 pick(sample_seed);
  auto &tensors = model.params().tensors();
  for (std::size_t k = 0; k < tensors.size(); ++k) {
    if (!tensors[k].trainable) continue;
    std::vector<std::size_t> coords;
    if (per_tensor <= 0 || tensors[k].size() <= std::size_t(per_tensor)) {
      for (std::size_t i = 0; i < tensors[k].size(); ++i) coords.push_back(i);
    } else {
      std::uniform_int_distribution<std::size_t> u(0, tensors[k].size() - 1);
      for (int s = 0; s < per_tensor; ++s) coords.push_back(u(pick));
    }
    for (std::size_t i : coords) {
      T &w = tensors[k].value[i];
      const T orig = w;
      w = orig + T(h);
      const double lp = loss_at();
      w = orig - T(h);
      const double lm = loss_at();
      w = orig;
      const double numeric = (lp - lm) / (2 * h);
      const double a = double(analytic[k][i]);
      double rel = RelError(a, numeric);
      if (kink_aware) {
        const double l0 = loss_at();
        const double fwd = (lp - l0) / h, bwd = (l0 - lm) / h;
        if (RelError(fwd, bwd) > kink_gap) {
          rel = std::min({rel, RelError(a, fwd), RelError(a, bwd)});
          ++res.kinks;
        }
      }
      res.max_rel_error = std::max(res.max_rel_error, rel);
      ++res.coordinates;
    }
  }
  return res;
}

}  // namespace satt::testing

#endif  // SATT_TESTS_SUPPORT_GRADCHECK_H_
