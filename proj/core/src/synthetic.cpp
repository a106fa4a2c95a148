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

#include "cpkit/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "cpkit/error.hpp"
#include "cpkit/rng.hpp"

namespace cpkit {

void SyntheticSpec::validate() const {
  if (num_classes < 1) raise(ErrorKind::kInvalidParameter, "K must be >= 1");
  if (n < 1) raise(ErrorKind::kInvalidParameter, "n must be >= 1");
  if (!(target_accuracy > 0.0 && target_accuracy <= 1.0)) {
    raise(ErrorKind::kInvalidParameter, "target accuracy must lie in (0, 1]");
  }
  if (!(sharpness > 0.0) || !std::isfinite(sharpness)) {
    raise(ErrorKind::kInvalidParameter, "sharpness must be positive");
  }
  if (!(confusion >= 0.0) || !std::isfinite(confusion)) {
    raise(ErrorKind::kInvalidParameter, "confusion must be >= 0");
  }
  if (shift) {
    if (!(shift->accuracy_drop >= 0.0 &&
          shift->accuracy_drop < target_accuracy)) {
      raise(ErrorKind::kInvalidParameter,
            "accuracy drop must lie in [0, target accuracy)");
    }
    if (!(shift->noise_scale >= 0.0) || !std::isfinite(shift->noise_scale)) {
      raise(ErrorKind::kInvalidParameter, "noise scale must be >= 0");
    }
  }
}

namespace {

LogitDataset draw(std::size_t num_classes, std::size_t n, double accuracy,
                  double sharpness, double confusion, std::uint64_t seed,
                  Stream stream) {
  const std::size_t k = num_classes;
  std::vector<double> values(n * k);
  std::vector<std::int32_t> labels(n);
  std::vector<double> concentration(k);

  for (std::size_t i = 0; i < n; ++i) {
    auto gen = keyed_generator(seed, stream, i);
    const auto label = static_cast<std::size_t>(gen.bounded(k));
    std::size_t intended = label;
    const bool correct = gen.uniform() < accuracy;
    if (!correct && k > 1) {
      intended = (label + 1 + static_cast<std::size_t>(gen.bounded(k - 1))) % k;
    }

    std::fill(concentration.begin(), concentration.end(), 1.0);
    concentration[intended] += sharpness;
    if (intended != label) concentration[label] += confusion * sharpness;

    double* row = values.data() + i * k;
    double total = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      std::gamma_distribution<double> gamma(concentration[c], 1.0);
      row[c] = gamma(gen);
      total += row[c];
    }
    for (std::size_t c = 0; c < k; ++c) row[c] /= total;
    std::swap(row[intended], *std::max_element(row, row + k));
    labels[i] = static_cast<std::int32_t>(label);
  }
  return LogitDataset(k, ValueKind::kProbabilities, std::move(values),
                      std::move(labels));
}

}  // namespace

LogitDataset generate(const SyntheticSpec& spec) {
  spec.validate();
  return draw(spec.num_classes, spec.n, spec.target_accuracy, spec.sharpness,
              spec.confusion, spec.seed, Stream::kSynthetic);
}

std::pair<LogitDataset, LogitDataset> generate_pair(const SyntheticSpec& spec) {
  spec.validate();
  if (!spec.shift) {
    raise(ErrorKind::kInvalidParameter, "generate_pair needs a shift");
  }
  const auto& shift = *spec.shift;
  const std::size_t n_test = spec.n_test == 0 ? spec.n : spec.n_test;
  auto cal = draw(spec.num_classes, spec.n, spec.target_accuracy,
                  spec.sharpness, spec.confusion, spec.seed, Stream::kSynthetic);
  auto test = draw(spec.num_classes, n_test,
                   spec.target_accuracy - shift.accuracy_drop,
                   spec.sharpness / (1.0 + shift.noise_scale), spec.confusion,
                   spec.seed, Stream::kSyntheticShifted);
  return {std::move(cal), std::move(test)};
}

}  // namespace cpkit
