// Copyright 2026 The cpkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>

#include "cpkit/prob_core.hpp"

namespace cpkit {

struct DistributionShift {
  /// Subtracted from target_accuracy for the test half.
  double accuracy_drop = 0.0;
  /// The test half's sharpness is divided by (1 + noise_scale).
  double noise_scale = 0.0;
};

/// A simulated classifier with known accuracy.
///
/// Each sample draws its label uniformly over K. With probability
/// target_accuracy the "intended" class is the label, otherwise a uniformly
/// chosen wrong class. The probability row is a Dirichlet draw with unit
/// concentration everywhere, plus `sharpness` on the intended class and, in
/// misclassified rows, `confusion * sharpness` on the true label. The largest
/// entry is then swapped onto the intended class so that it is the argmax.
struct SyntheticSpec {
  std::size_t num_classes = 10;
  std::size_t n = 1000;
  double target_accuracy = 0.7;
  double sharpness = 200.0;
  double confusion = 0.5;
  std::optional<DistributionShift> shift;
  /// Size of the shifted test half of generate_pair; 0 means n.
  std::size_t n_test = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Labeled probabilities, deterministic given spec.seed.
LogitDataset generate(const SyntheticSpec& spec);

/// Calibration half from the base spec and a test half with the shift
/// applied, drawn from independent streams of the same seed. Requires
/// spec.shift.
std::pair<LogitDataset, LogitDataset> generate_pair(const SyntheticSpec& spec);

}  // namespace cpkit
