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
#include <string>
#include <vector>

#include "cpkit/conformal.hpp"
#include "cpkit/metrics.hpp"
#include "cpkit/prob_core.hpp"
#include "cpkit/scores.hpp"

namespace cpkit {

inline constexpr double kDefaultAlpha = 0.1;
inline constexpr double kCifar10Alpha = 0.05;
inline constexpr double kDefaultCalFraction = 0.5;

struct RunConfig {
  double alpha = kDefaultAlpha;
  ScoreSpec method = ScoreSpec::aps();
  double cal_fraction = kDefaultCalFraction;
  std::uint64_t seed = 0;
  /// Applied to logit inputs; logit inputs without one use T = 1.
  std::optional<double> temperature;
  std::vector<double> t_grid = default_temperature_grid();
  std::size_t ece_bins = kDefaultEceBins;

  /// alpha = 0.05, the setting used for CIFAR-10.
  static RunConfig cifar10_recipe();

  /// Raises configuration errors for out-of-range settings.
  void validate() const;
};

/// One conformal run: configuration echo, fitted threshold, sets and
/// metrics over the test rows.
struct RunResult {
  std::string model;
  RunConfig config;
  std::optional<double> temperature;  // the T actually applied, if any
  std::size_t num_classes = 0;
  std::size_t n_cal = 0;
  std::size_t n_test = 0;
  ConformalPredictor predictor;
  std::vector<PredictionSet> sets;
  std::vector<std::int32_t> labels;
  MetricsReport metrics;
};

/// Softmax at the configured temperature for logits; probabilities pass
/// through unchanged unless a temperature was requested (invalid state).
LogitDataset to_probabilities(const LogitDataset& ds, const RunConfig& cfg);

/// split -> temperature -> score -> calibrate -> predict -> metrics.
RunResult run_conformalize(const LogitDataset& ds, const RunConfig& cfg,
                           const std::string& model = "model");

/// Calibrate on all of `cal`, evaluate on all of `test` (no split).
RunResult run_shift_eval(const LogitDataset& cal, const LogitDataset& test,
                         const RunConfig& cfg,
                         const std::string& model = "model");

/// One run_conformalize per T in cfg.t_grid. Requires logits.
std::vector<RunResult> run_temperature_sweep(const LogitDataset& ds,
                                             const RunConfig& cfg,
                                             const std::string& model = "model");

struct NamedDataset {
  std::string name;
  LogitDataset data;
};

/// Runs are ordered model-major in input order; each is named
/// "<model>/<method>".
struct Comparison {
  std::vector<RunResult> runs;

  const RunResult& find(const std::string& run_name) const;
};

std::string run_name(const RunResult& run);

Comparison run_compare(const std::vector<NamedDataset>& models,
                       const std::vector<ScoreSpec>& methods,
                       const RunConfig& cfg);

/// Worst class of run A compared against run B; both must share a test split.
WorstClassComparison compare_worst_class(const RunResult& a,
                                         const RunResult& b);

SetSizeDelta compare_set_sizes(const RunResult& a, const RunResult& b);

}  // namespace cpkit
