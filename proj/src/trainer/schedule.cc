// trainer/schedule.cc

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

#include "satt/schedule.h"

#include <algorithm>

namespace satt {

double PlateauScheduler::Step(double metric) {
  if (metric < best - tolerance) {
    best = metric;
    bad_epochs = 0;
  } else if (++bad_epochs >= patience) {
    lr = std::max(lr * factor, min_lr);
    bad_epochs = 0;
  }
  return lr;
}

bool EarlyStopper::Step(double metric) {
  ++epoch;
  improved = metric < best - tolerance;
  if (improved) {
    best = metric;
    best_epoch = epoch;
    bad_epochs = 0;
  } else {
    ++bad_epochs;
  }
  return bad_epochs >= patience;
}

}  // namespace satt
