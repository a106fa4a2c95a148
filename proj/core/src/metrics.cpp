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

#include "cpkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cpkit/error.hpp"

namespace cpkit {

namespace {

void check_aligned(std::size_t sets, std::size_t labels) {
  if (sets != labels) {
    raise(ErrorKind::kSchema, std::to_string(sets) + " sets but " +
                                  std::to_string(labels) + " labels");
  }
}

}  // namespace

double avg_set_size(std::span<const PredictionSet> sets) {
  if (sets.empty()) raise(ErrorKind::kInvalidInput, "no prediction sets");
  std::size_t total = 0;
  for (const auto& s : sets) total += s.size();
  return static_cast<double>(total) / static_cast<double>(sets.size());
}

double empirical_coverage(std::span<const PredictionSet> sets,
                          std::span<const std::int32_t> labels) {
  check_aligned(sets.size(), labels.size());
  if (sets.empty()) raise(ErrorKind::kInvalidInput, "no prediction sets");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].contains(labels[i])) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(sets.size());
}

ClassCoverage class_conditional_coverage(std::span<const PredictionSet> sets,
                                         std::span<const std::int32_t> labels,
                                         std::size_t num_classes) {
  check_aligned(sets.size(), labels.size());
  std::vector<std::size_t> count(num_classes, 0);
  std::vector<std::size_t> hits(num_classes, 0);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto y = labels[i];
    if (y < 0 || static_cast<std::size_t>(y) >= num_classes) {
      raise(ErrorKind::kIndex, "label " + std::to_string(y));
    }
    ++count[y];
    if (sets[i].contains(y)) ++hits[y];
  }
  ClassCoverage out;
  for (std::size_t k = 0; k < num_classes; ++k) {
    if (count[k] > 0) {
      out.emplace(static_cast<std::int32_t>(k),
                  static_cast<double>(hits[k]) / static_cast<double>(count[k]));
    }
  }
  return out;
}

double cov_gap(const ClassCoverage& per_class, double alpha) {
  if (per_class.empty()) raise(ErrorKind::kInvalidInput, "empty class map");
  const double target = 1.0 - alpha;
  double total = 0.0;
  for (const auto& [cls, cov] : per_class) total += std::abs(cov - target);
  return total / static_cast<double>(per_class.size());
}

double mccc(const ClassCoverage& per_class) {
  if (per_class.empty()) raise(ErrorKind::kInvalidInput, "empty class map");
  double lowest = 1.0;
  for (const auto& [cls, cov] : per_class) lowest = std::min(lowest, cov);
  return lowest;
}

double ece(const LogitDataset& probs, std::size_t bins) {
  probs.require_labeled_probabilities();
  if (probs.size() == 0) raise(ErrorKind::kInvalidInput, "empty dataset");
  if (bins == 0) raise(ErrorKind::kInvalidParameter, "bin count must be >= 1");

  std::vector<double> conf_sum(bins, 0.0);
  std::vector<double> correct(bins, 0.0);
  std::vector<std::size_t> count(bins, 0);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const auto row = probs.row(i);
    const std::size_t top = argmax(row);
    const double confidence = row[top];
    const auto b = std::min(
        bins - 1, static_cast<std::size_t>(confidence * static_cast<double>(bins)));
    conf_sum[b] += confidence;
    if (top == static_cast<std::size_t>(probs.label(i))) correct[b] += 1.0;
    ++count[b];
  }
  const auto n = static_cast<double>(probs.size());
  double total = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    if (count[b] == 0) continue;
    const auto m = static_cast<double>(count[b]);
    total += (m / n) * std::abs(correct[b] / m - conf_sum[b] / m);
  }
  return total;
}

double empty_set_fraction(std::span<const PredictionSet> sets) {
  if (sets.empty()) raise(ErrorKind::kInvalidInput, "no prediction sets");
  const auto empties = std::count_if(sets.begin(), sets.end(),
                                     [](const auto& s) { return s.empty(); });
  return static_cast<double>(empties) / static_cast<double>(sets.size());
}

std::optional<double> class_mean_set_size(std::span<const PredictionSet> sets,
                                          std::span<const std::int32_t> labels,
                                          std::int32_t label) {
  check_aligned(sets.size(), labels.size());
  std::size_t total = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (labels[i] != label) continue;
    total += sets[i].size();
    ++count;
  }
  if (count == 0) return std::nullopt;
  return static_cast<double>(total) / static_cast<double>(count);
}

MetricsReport evaluate(std::span<const PredictionSet> sets,
                       const LogitDataset& test, double alpha,
                       std::size_t ece_bins) {
  test.require_labeled_probabilities();
  const auto& labels = test.labels();
  MetricsReport r;
  r.avg_set_size = avg_set_size(sets);
  r.coverage = empirical_coverage(sets, labels);
  r.per_class_coverage =
      class_conditional_coverage(sets, labels, test.num_classes());
  r.cov_gap = cov_gap(r.per_class_coverage, alpha);
  r.mccc = mccc(r.per_class_coverage);
  r.ece = ece(test, ece_bins);
  r.accuracy = top1_accuracy(test);
  r.empty_set_fraction = empty_set_fraction(sets);
  return r;
}

SetSizeDelta set_size_delta(std::span<const PredictionSet> sets_a,
                            std::span<const PredictionSet> sets_b) {
  if (sets_a.size() != sets_b.size()) {
    raise(ErrorKind::kSchema, "runs have different sample counts");
  }
  SetSizeDelta out;
  for (std::size_t i = 0; i < sets_a.size(); ++i) {
    const auto d = static_cast<std::int64_t>(sets_a[i].size()) -
                   static_cast<std::int64_t>(sets_b[i].size());
    if (d == 0) {
      ++out.zeros;
    } else {
      ++out.histogram[d];
    }
  }
  return out;
}

WorstClassComparison worst_class_comparison(
    const ClassCoverage& a_per_class, std::span<const PredictionSet> a_sets,
    const ClassCoverage& b_per_class, std::span<const PredictionSet> b_sets,
    std::span<const std::int32_t> labels) {
  if (a_per_class.empty() || b_per_class.empty()) {
    raise(ErrorKind::kInvalidInput, "empty class map");
  }
  // std::map iterates in increasing class order, so strict < keeps the
  // lowest index on ties.
  auto worst = a_per_class.begin();
  for (auto it = a_per_class.begin(); it != a_per_class.end(); ++it) {
    if (it->second < worst->second) worst = it;
  }
  WorstClassComparison out;
  out.worst_class = worst->first;
  out.a_coverage = worst->second;
  const bool with_sets = !labels.empty();
  if (with_sets) {
    out.a_set_size = class_mean_set_size(a_sets, labels, out.worst_class);
  }
  if (auto it = b_per_class.find(out.worst_class); it != b_per_class.end()) {
    out.b_coverage = it->second;
    if (with_sets) {
      out.b_set_size = class_mean_set_size(b_sets, labels, out.worst_class);
    }
  }
  out.b_min_coverage = mccc(b_per_class);
  return out;
}

}  // namespace cpkit
