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

#include "cpkit/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cpkit/error.hpp"

namespace cpkit {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    raise(ErrorKind::kInvalidParameter, "alpha must lie in (0, 1)");
  }
}

}  // namespace

std::size_t quantile_rank(std::size_t n, double alpha) {
  check_alpha(alpha);
  const double x = static_cast<double>(n + 1) * (1.0 - alpha);
  const double nearest = std::nearbyint(x);
  double k = std::ceil(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, x)) k = nearest;
  return static_cast<std::size_t>(std::max(1.0, k));
}

double calibrate(std::span<const double> cal_scores, double alpha) {
  if (cal_scores.empty()) {
    raise(ErrorKind::kInvalidInput, "no calibration scores");
  }
  const std::size_t k = quantile_rank(cal_scores.size(), alpha);
  if (k > cal_scores.size()) return kInfiniteThreshold;
  std::vector<double> sorted(cal_scores.begin(), cal_scores.end());
  std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
  return sorted[k - 1];
}

ConformalPredictor fit_predictor(const ScoreSpec& spec,
                                 std::span<const double> cal_scores,
                                 double alpha) {
  spec.validate();
  return {spec, alpha, calibrate(cal_scores, alpha), cal_scores.size()};
}

PredictionSet::PredictionSet(std::vector<std::int32_t> members)
    : members_(std::move(members)) {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i] < 0 || (i > 0 && members_[i] <= members_[i - 1])) {
      raise(ErrorKind::kInvalidInput,
            "prediction set members must be nonnegative and increasing");
    }
  }
}

bool PredictionSet::contains(std::int32_t label) const {
  return std::binary_search(members_.begin(), members_.end(), label);
}

PredictionSet threshold_scores(std::span<const double> class_scores,
                               double q_alpha) {
  std::vector<std::int32_t> members;
  for (std::size_t y = 0; y < class_scores.size(); ++y) {
    if (class_scores[y] <= q_alpha) members.push_back(static_cast<std::int32_t>(y));
  }
  return PredictionSet(std::move(members));
}

PredictionSet predict_set(std::span<const double> p,
                          const ConformalPredictor& predictor, double u) {
  return threshold_scores(score_all_classes(predictor.spec, p, u),
                          predictor.q_alpha);
}

ConformalResult conformalize(const LogitDataset& cal, const LogitDataset& test,
                             const ScoreSpec& spec, double alpha,
                             std::uint64_t seed) {
  if (cal.num_classes() != test.num_classes()) {
    raise(ErrorKind::kSchema,
          "calibration has K=" + std::to_string(cal.num_classes()) +
              " but test has K=" + std::to_string(test.num_classes()));
  }
  cal.require_labeled_probabilities();
  if (test.kind() != ValueKind::kProbabilities) {
    raise(ErrorKind::kInvalidState, "test dataset holds logits");
  }
  check_alpha(alpha);

  const auto cal_scores =
      score_batch(cal, spec, LabelsMode::kObserved, seed, Stream::kCalibration);
  ConformalResult result{fit_predictor(spec, cal_scores, alpha), {}};

  result.sets.reserve(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    const double u = draw_u(spec.u_mode, seed, Stream::kTest, i);
    result.sets.push_back(predict_set(test.row(i), result.predictor, u));
  }
  return result;
}

}  // namespace cpkit
