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

#include "cpkit/harness.hpp"

#include <cmath>

#include "cpkit/error.hpp"
#include "cpkit/io.hpp"

namespace cpkit {

RunConfig RunConfig::cifar10_recipe() {
  RunConfig cfg;
  cfg.alpha = kCifar10Alpha;
  return cfg;
}

void RunConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    raise(ErrorKind::kConfig, "alpha must lie in (0, 1)");
  }
  if (!(cal_fraction > 0.0 && cal_fraction <= 1.0)) {
    raise(ErrorKind::kConfig, "cal fraction must lie in (0, 1]");
  }
  if (ece_bins == 0) raise(ErrorKind::kConfig, "ece bins must be >= 1");
  try {
    method.validate();
    TemperatureConfig{temperature.value_or(1.0), t_grid}.validate();
  } catch (const Error& e) {
    raise(ErrorKind::kConfig, e.what());
  }
}

LogitDataset to_probabilities(const LogitDataset& ds, const RunConfig& cfg) {
  if (ds.kind() == ValueKind::kLogits) {
    return apply_temperature(ds, cfg.temperature.value_or(1.0));
  }
  if (cfg.temperature) {
    raise(ErrorKind::kInvalidState,
          "temperature requested but the input already holds probabilities");
  }
  return ds;
}

namespace {

RunResult evaluate_run(const LogitDataset& cal, const LogitDataset& test,
                       const RunConfig& cfg, const std::string& model,
                       std::optional<double> temperature) {
  if (test.size() == 0) raise(ErrorKind::kInvalidInput, "test set is empty");
  if (!test.labeled()) raise(ErrorKind::kInvalidInput, "test set has no labels");
  auto conformal = conformalize(cal, test, cfg.method, cfg.alpha, cfg.seed);

  RunResult run;
  run.model = model;
  run.config = cfg;
  run.temperature = temperature;
  run.num_classes = test.num_classes();
  run.n_cal = cal.size();
  run.n_test = test.size();
  run.predictor = conformal.predictor;
  run.sets = std::move(conformal.sets);
  run.labels = test.labels();
  run.metrics = evaluate(run.sets, test, cfg.alpha, cfg.ece_bins);
  return run;
}

std::optional<double> applied_temperature(const LogitDataset& ds,
                                          const RunConfig& cfg) {
  if (ds.kind() == ValueKind::kLogits) return cfg.temperature.value_or(1.0);
  return std::nullopt;
}

}  // namespace

RunResult run_conformalize(const LogitDataset& ds, const RunConfig& cfg,
                           const std::string& model) {
  cfg.validate();
  const auto probs = to_probabilities(ds, cfg);
  auto [cal, test] = split(probs, cfg.cal_fraction, cfg.seed);
  return evaluate_run(cal, test, cfg, model, applied_temperature(ds, cfg));
}

RunResult run_shift_eval(const LogitDataset& cal, const LogitDataset& test,
                         const RunConfig& cfg, const std::string& model) {
  cfg.validate();
  if (cal.num_classes() != test.num_classes()) {
    raise(ErrorKind::kSchema,
          "calibration file has K=" + std::to_string(cal.num_classes()) +
              ", test file has K=" + std::to_string(test.num_classes()));
  }
  if (cal.kind() != test.kind()) {
    raise(ErrorKind::kSchema,
          "calibration and test files disagree on logits vs probabilities");
  }
  return evaluate_run(to_probabilities(cal, cfg), to_probabilities(test, cfg),
                      cfg, model, applied_temperature(test, cfg));
}

std::vector<RunResult> run_temperature_sweep(const LogitDataset& ds,
                                             const RunConfig& cfg,
                                             const std::string& model) {
  if (ds.kind() != ValueKind::kLogits) {
    raise(ErrorKind::kInvalidState, "temperature sweeps need logits");
  }
  if (cfg.t_grid.empty()) raise(ErrorKind::kConfig, "empty temperature grid");
  std::vector<RunResult> runs;
  runs.reserve(cfg.t_grid.size());
  for (double t : cfg.t_grid) {
    RunConfig at = cfg;
    at.temperature = t;
    runs.push_back(run_conformalize(ds, at, model));
  }
  return runs;
}

std::string run_name(const RunResult& run) {
  return run.model + "/" + std::string(to_string(run.config.method.method));
}

const RunResult& Comparison::find(const std::string& name) const {
  for (const auto& run : runs) {
    if (run_name(run) == name) return run;
  }
  raise(ErrorKind::kConfig, "no run named '" + name + "'");
}

Comparison run_compare(const std::vector<NamedDataset>& models,
                       const std::vector<ScoreSpec>& methods,
                       const RunConfig& cfg) {
  if (models.empty()) raise(ErrorKind::kConfig, "no models to compare");
  if (methods.empty()) raise(ErrorKind::kConfig, "no methods to compare");
  Comparison out;
  for (const auto& model : models) {
    for (const auto& method : methods) {
      RunConfig at = cfg;
      at.method = method;
      out.runs.push_back(run_conformalize(model.data, at, model.name));
    }
  }
  return out;
}

namespace {

void check_same_split(const RunResult& a, const RunResult& b) {
  if (a.labels != b.labels) {
    raise(ErrorKind::kSchema, "runs " + run_name(a) + " and " + run_name(b) +
                                  " do not share a test split");
  }
}

}  // namespace

WorstClassComparison compare_worst_class(const RunResult& a,
                                         const RunResult& b) {
  check_same_split(a, b);
  return worst_class_comparison(a.metrics.per_class_coverage, a.sets,
                                b.metrics.per_class_coverage, b.sets, a.labels);
}

SetSizeDelta compare_set_sizes(const RunResult& a, const RunResult& b) {
  check_same_split(a, b);
  return set_size_delta(a.sets, b.sets);
}

}  // namespace cpkit
