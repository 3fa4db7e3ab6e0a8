// satt/schedule.h

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

#ifndef SATT_SCHEDULE_H_
#define SATT_SCHEDULE_H_

#include <limits>

namespace satt {

// Both trackers see one lower-is-better validation value per epoch.  A value
// improves on the best when it is below best - tolerance.

/// Learning-rate decay on plateaus: after `patience` consecutive epochs
/// without improvement, lr <- max(lr * factor, min_lr) and the count resets.
struct PlateauScheduler {
  double lr = 1e-3;
  int patience = 5;
  double factor = 0.5;
  double min_lr = 1e-6;
  double tolerance = 1e-8;
  double best = std::numeric_limits<double>::infinity();
  int bad_epochs = 0;

  /// Returns the learning rate for the next epoch.
  double Step(double metric);
};

/// Early stopping: Step() returns true once `patience` consecutive epochs
/// have passed without improvement.  `best_epoch` is 1-based.
struct EarlyStopper {
  int patience = 20;
  double tolerance = 1e-8;
  double best = std::numeric_limits<double>::infinity();
  int best_epoch = 0;
  int epoch = 0;
  int bad_epochs = 0;
  bool improved = false;  // whether the last Step() improved

  bool Step(double metric);
};

}  // namespace satt

#endif  // SATT_SCHEDULE_H_
