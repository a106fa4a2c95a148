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
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "cpkit/conformal.hpp"
#include "cpkit/prob_core.hpp"

namespace cpkit {

/// Per-class coverage over the classes that appear in the labels.
using ClassCoverage = std::map<std::int32_t, double>;

inline constexpr std::size_t kDefaultEceBins = 15;

struct MetricsReport {
  double avg_set_size = 0.0;
  double coverage = 0.0;
  double cov_gap = 0.0;
  double mccc = 0.0;
  double ece = 0.0;
  double accuracy = 0.0;
  double empty_set_fraction = 0.0;
  ClassCoverage per_class_coverage;
};

double avg_set_size(std::span<const PredictionSet> sets);

double empirical_coverage(std::span<const PredictionSet> sets,
                          std::span<const std::int32_t> labels);

/// Classes with no test sample are left out of the map.
ClassCoverage class_conditional_coverage(std::span<const PredictionSet> sets,
                                         std::span<const std::int32_t> labels,
                                         std::size_t num_classes);

/// Mean |coverage_k - (1 - alpha)| over the map.
double cov_gap(const ClassCoverage& per_class, double alpha);

/// Minimum class-conditional coverage.
double mccc(const ClassCoverage& per_class);

/// Top-label expected calibration error with `bins` equal-width confidence
/// bins on [0, 1]. Confidence 1.0 falls in the last bin.
double ece(const LogitDataset& probs, std::size_t bins = kDefaultEceBins);

double empty_set_fraction(std::span<const PredictionSet> sets);

/// Mean size of the sets whose true label is `label`; nullopt if none.
std::optional<double> class_mean_set_size(std::span<const PredictionSet> sets,
                                          std::span<const std::int32_t> labels,
                                          std::int32_t label);

/// Everything above for one run over `test` (probabilities, labeled).
MetricsReport evaluate(std::span<const PredictionSet> sets,
                       const LogitDataset& test, double alpha,
                       std::size_t ece_bins = kDefaultEceBins);

struct SetSizeDelta {
  /// size(a) - size(b) -> number of samples; zero differences excluded.
  std::map<std::int64_t, std::size_t> histogram;
  std::size_t zeros = 0;
};

SetSizeDelta set_size_delta(std::span<const PredictionSet> sets_a,
                            std::span<const PredictionSet> sets_b);

/// Worst class of run A compared against run B on the same test split.
struct WorstClassComparison {
  std::int32_t worst_class = 0;
  double a_coverage = 0.0;
  /// Set sizes are only available when sets and labels are supplied.
  std::optional<double> a_set_size;
  /// Missing when the class does not appear in run B's map.
  std::optional<double> b_coverage;
  std::optional<double> b_set_size;
  double b_min_coverage = 0.0;
};

/// The class minimizing A's coverage (lowest index on ties), A's and B's
/// coverage and mean set size there, and B's own minimum coverage.
WorstClassComparison worst_class_comparison(
    const ClassCoverage& a_per_class, std::span<const PredictionSet> a_sets,
    const ClassCoverage& b_per_class, std::span<const PredictionSet> b_sets,
    std::span<const std::int32_t> labels);

}  // namespace cpkit
