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
#include <limits>
#include <span>
#include <vector>

#include "cpkit/prob_core.hpp"
#include "cpkit/scores.hpp"

namespace cpkit {

/// Threshold value meaning "too few calibration points for this alpha":
/// every class is admitted.
inline constexpr double kInfiniteThreshold =
    std::numeric_limits<double>::infinity();

/// Order-statistic index ceil((n + 1)(1 - alpha)), 1-based. A product within
/// 1e-9 (relative) of an integer is snapped to it first, so that decimal
/// alphas like 0.1 do not gain an extra rank from binary rounding.
std::size_t quantile_rank(std::size_t n, double alpha);

/// Split-conformal threshold: the quantile_rank-th smallest score, or
/// kInfiniteThreshold when that rank exceeds n.
double calibrate(std::span<const double> cal_scores, double alpha);

struct ConformalPredictor {
  ScoreSpec spec;
  double alpha = 0.1;
  double q_alpha = kInfiniteThreshold;
  std::size_t n_cal = 0;

  bool degenerate() const noexcept { return q_alpha == kInfiniteThreshold; }
};

/// Fits a predictor from observed-label calibration scores.
ConformalPredictor fit_predictor(const ScoreSpec& spec,
                                 std::span<const double> cal_scores,
                                 double alpha);

/// Sorted class indices admitted by a threshold. May be empty.
class PredictionSet {
 public:
  PredictionSet() = default;
  /// Members must be strictly increasing.
  explicit PredictionSet(std::vector<std::int32_t> members);

  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  bool contains(std::int32_t label) const;
  const std::vector<std::int32_t>& members() const noexcept { return members_; }

  friend bool operator==(const PredictionSet&, const PredictionSet&) = default;

 private:
  std::vector<std::int32_t> members_;
};

/// {y : score(p, y) <= q}. With the infinite sentinel every class is a member.
PredictionSet predict_set(std::span<const double> p,
                          const ConformalPredictor& predictor, double u);

/// Sets from precomputed all-class scores of one sample.
PredictionSet threshold_scores(std::span<const double> class_scores,
                               double q_alpha);

struct ConformalResult {
  ConformalPredictor predictor;
  std::vector<PredictionSet> sets;
};

/// Calibrate on `cal` (observed labels, calibration stream) and build a set
/// for every row of `test` (test stream). Deterministic given seed.
ConformalResult conformalize(const LogitDataset& cal, const LogitDataset& test,
                             const ScoreSpec& spec, double alpha,
                             std::uint64_t seed);

}  // namespace cpkit
