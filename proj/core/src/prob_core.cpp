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

#include "cpkit/prob_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cpkit/error.hpp"

namespace cpkit {

LogitDataset::LogitDataset(std::size_t num_classes, ValueKind kind,
                           std::vector<double> values,
                           std::vector<std::int32_t> labels)
    : LogitDataset(num_classes, kind, std::move(values), std::move(labels),
                   true) {}

LogitDataset LogitDataset::unlabeled(std::size_t num_classes, ValueKind kind,
                                     std::vector<double> values) {
  return LogitDataset(num_classes, kind, std::move(values), {}, false);
}

LogitDataset::LogitDataset(std::size_t num_classes, ValueKind kind,
                           std::vector<double> values,
                           std::vector<std::int32_t> labels, bool labeled)
    : k_(num_classes),
      kind_(kind),
      values_(std::move(values)),
      labels_(std::move(labels)),
      labeled_(labeled) {
  if (k_ < 1) raise(ErrorKind::kInvalidInput, "class count must be >= 1");
  if (values_.size() % k_ != 0) {
    raise(ErrorKind::kInvalidInput,
          "value count " + std::to_string(values_.size()) +
              " is not a multiple of K=" + std::to_string(k_));
  }
  n_ = values_.size() / k_;
  if (labeled_ && labels_.size() != n_) {
    raise(ErrorKind::kInvalidInput, "expected " + std::to_string(n_) +
                                        " labels, got " +
                                        std::to_string(labels_.size()));
  }
  if (!labeled_ && !labels_.empty()) {
    raise(ErrorKind::kInvalidInput, "unlabeled dataset carries labels");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      raise(ErrorKind::kValidation,
            "non-finite value at row " + std::to_string(i / k_));
    }
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] < 0 || static_cast<std::size_t>(labels_[i]) >= k_) {
      raise(ErrorKind::kValidation, "label " + std::to_string(labels_[i]) +
                                        " at row " + std::to_string(i) +
                                        " outside [0, K)");
    }
  }
  if (kind_ == ValueKind::kProbabilities) {
    for (std::size_t i = 0; i < n_; ++i) {
      if (!on_simplex(row(i), kSimplexTolerance)) {
        raise(ErrorKind::kValidation,
              "row " + std::to_string(i) + " is not a probability vector");
      }
    }
  }
}

LogitDataset LogitDataset::select(std::span<const std::size_t> indices) const {
  std::vector<double> values;
  values.reserve(indices.size() * k_);
  std::vector<std::int32_t> labels;
  if (labeled_) labels.reserve(indices.size());
  for (std::size_t idx : indices) {
    if (idx >= n_) raise(ErrorKind::kIndex, "row " + std::to_string(idx));
    auto r = row(idx);
    values.insert(values.end(), r.begin(), r.end());
    if (labeled_) labels.push_back(labels_[idx]);
  }
  return LogitDataset(k_, kind_, std::move(values), std::move(labels),
                      labeled_);
}

void LogitDataset::require_labeled_probabilities() const {
  if (kind_ != ValueKind::kProbabilities) {
    raise(ErrorKind::kInvalidState,
          "dataset holds logits; apply a temperature or declare probabilities");
  }
  if (!labeled_) raise(ErrorKind::kInvalidInput, "dataset has no labels");
}

void TemperatureConfig::validate() const {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    raise(ErrorKind::kInvalidParameter, "temperature must be positive");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
      raise(ErrorKind::kInvalidParameter, "grid temperatures must be positive");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      raise(ErrorKind::kInvalidParameter,
            "temperature grid must be strictly increasing");
    }
  }
}

std::vector<double> default_temperature_grid() {
  return {0.85, 0.9, 0.95, 1.0, 1.05, 1.1, 1.15,
          1.2,  1.3, 1.4,  1.5, 1.6,  1.8, 2.0};
}

std::vector<double> linear_grid(double first, double last, std::size_t count) {
  if (count == 0) raise(ErrorKind::kInvalidParameter, "grid count must be >= 1");
  if (count == 1) return {first};
  std::vector<double> grid(count);
  const double step = (last - first) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = first + step * static_cast<double>(i);
  }
  grid.back() = last;
  return grid;
}

std::size_t argmax(std::span<const double> values) {
  if (values.empty()) raise(ErrorKind::kInvalidInput, "argmax of empty vector");
  return static_cast<std::size_t>(
      std::max_element(values.begin(), values.end()) - values.begin());
}

bool on_simplex(std::span<const double> p, double tolerance) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tolerance;
}

namespace {

void check_temperature(double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    raise(ErrorKind::kInvalidParameter,
          "temperature must be positive and finite");
  }
}

void softmax_into(std::span<const double> logits, double temperature,
                  std::span<double> out) {
  const double top = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    out[k] = std::exp((logits[k] - top) / temperature);
    total += out[k];
  }
  for (double& v : out) v /= total;
}

}  // namespace

std::vector<double> softmax(std::span<const double> logits, double temperature) {
  check_temperature(temperature);
  if (logits.empty()) raise(ErrorKind::kInvalidInput, "empty logit vector");
  for (double v : logits) {
    if (!std::isfinite(v)) raise(ErrorKind::kInvalidInput, "non-finite logit");
  }
  std::vector<double> out(logits.size());
  softmax_into(logits, temperature, out);
  return out;
}

LogitDataset apply_temperature(const LogitDataset& ds, double temperature) {
  check_temperature(temperature);
  if (ds.kind() != ValueKind::kLogits) {
    raise(ErrorKind::kInvalidState, "temperature applies to logits only");
  }
  const std::size_t k = ds.num_classes();
  std::vector<double> probs(ds.values().size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    softmax_into(ds.row(i), temperature,
                 std::span<double>(probs.data() + i * k, k));
  }
  if (!ds.labeled()) {
    return LogitDataset::unlabeled(k, ValueKind::kProbabilities,
                                   std::move(probs));
  }
  return LogitDataset(k, ValueKind::kProbabilities, std::move(probs),
                      ds.labels());
}

LogitDataset to_logits(const LogitDataset& ds) {
  if (ds.kind() != ValueKind::kProbabilities) {
    raise(ErrorKind::kInvalidState, "dataset already holds logits");
  }
  std::vector<double> logits(ds.values().size());
  std::transform(ds.values().begin(), ds.values().end(), logits.begin(),
                 [](double p) {
                   return std::log(
                       std::max(p, std::numeric_limits<double>::min()));
                 });
  if (!ds.labeled()) {
    return LogitDataset::unlabeled(ds.num_classes(), ValueKind::kLogits,
                                   std::move(logits));
  }
  return LogitDataset(ds.num_classes(), ValueKind::kLogits, std::move(logits),
                      ds.labels());
}

double top1_accuracy(const LogitDataset& ds) {
  if (!ds.labeled()) raise(ErrorKind::kInvalidInput, "dataset has no labels");
  if (ds.size() == 0) raise(ErrorKind::kInvalidInput, "empty dataset");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (argmax(ds.row(i)) == static_cast<std::size_t>(ds.label(i))) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(ds.size());
}

}  // namespace cpkit
