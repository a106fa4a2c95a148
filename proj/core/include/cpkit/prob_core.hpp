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
#include <span>
#include <vector>

namespace cpkit {

enum class ValueKind : std::uint8_t { kLogits, kProbabilities };

/// Tolerance on row sums for datasets declared as probabilities.
inline constexpr double kSimplexTolerance = 1e-6;

/// Dense n x K matrix of classifier outputs plus integer labels.
///
/// The constructor enforces the invariants: K >= 1, every value finite,
/// labels in [0, K), and for probability datasets each row nonnegative and
/// summing to 1 within kSimplexTolerance. A dataset may be unlabeled (the file
/// format allows it) but every conformal operation requires labels.
class LogitDataset {
 public:
  LogitDataset(std::size_t num_classes, ValueKind kind,
               std::vector<double> values, std::vector<std::int32_t> labels);

  static LogitDataset unlabeled(std::size_t num_classes, ValueKind kind,
                                std::vector<double> values);

  std::size_t size() const noexcept { return n_; }
  std::size_t num_classes() const noexcept { return k_; }
  ValueKind kind() const noexcept { return kind_; }
  bool labeled() const noexcept { return labeled_; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * k_, k_};
  }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<std::int32_t>& labels() const noexcept { return labels_; }
  std::int32_t label(std::size_t i) const { return labels_[i]; }

  /// Rows at `indices`, in that order.
  LogitDataset select(std::span<const std::size_t> indices) const;

  /// Throws invalid-state if the dataset is not probabilities, and
  /// invalid-input if it is unlabeled.
  void require_labeled_probabilities() const;

  friend bool operator==(const LogitDataset&, const LogitDataset&) = default;

 private:
  LogitDataset(std::size_t num_classes, ValueKind kind,
               std::vector<double> values, std::vector<std::int32_t> labels,
               bool labeled);

  std::size_t n_ = 0;
  std::size_t k_ = 0;
  ValueKind kind_ = ValueKind::kLogits;
  std::vector<double> values_;
  std::vector<std::int32_t> labels_;
  bool labeled_ = true;
};

struct TemperatureConfig {
  double temperature = 1.0;
  std::vector<double> grid;

  /// T > 0 and grid strictly increasing with positive entries.
  void validate() const;
};

/// The 14-point sweep over [0.85, 2] used by the temperature study. Contains
/// both T = 1 and T = 1.1.
std::vector<double> default_temperature_grid();

/// `count` evenly spaced values from `first` to `last` inclusive.
std::vector<double> linear_grid(double first, double last, std::size_t count);

/// Lowest index of the maximum entry.
std::size_t argmax(std::span<const double> values);

bool on_simplex(std::span<const double> p, double tolerance);

/// Tempered softmax, max-subtracted before exponentiation.
std::vector<double> softmax(std::span<const double> logits, double temperature);

/// Softmax of every row at temperature T. Requires kind = logits.
LogitDataset apply_temperature(const LogitDataset& ds, double temperature);

/// Natural log of each probability (floored at the smallest normal double),
/// giving logits whose softmax at T = 1 recovers the input.
LogitDataset to_logits(const LogitDataset& ds);

/// Fraction of rows whose argmax equals the label.
double top1_accuracy(const LogitDataset& ds);

}  // namespace cpkit
