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

#include "cpkit/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace cpkit {

namespace {

std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

nlohmann::json optional_number(std::optional<double> v) {
  if (!v) return nullptr;
  return *v;
}

}  // namespace

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> columns = {
      "model",    "alpha",    "method",       "lambda",   "kreg",
      "u_mode",   "T",        "seed",         "cal_fraction",
      "K",        "n_cal",    "n_test",       "q_alpha",  "coverage",
      "avg_set_size", "cov_gap", "mccc",      "ece",      "accuracy",
      "empty_set_fraction"};
  return columns;
}

nlohmann::json to_json(const RunResult& run) {
  const auto& cfg = run.config;
  const auto& m = run.metrics;
  nlohmann::json j;
  j["model"] = run.model;
  j["alpha"] = cfg.alpha;
  j["method"] = std::string(to_string(cfg.method.method));
  j["lambda"] = cfg.method.lambda;
  j["kreg"] = cfg.method.k_reg;
  j["u_mode"] = cfg.method.u_mode.to_string();
  j["T"] = optional_number(run.temperature);
  j["seed"] = cfg.seed;
  j["cal_fraction"] = cfg.cal_fraction;
  j["K"] = run.num_classes;
  j["n_cal"] = run.n_cal;
  j["n_test"] = run.n_test;
  j["q_alpha"] = run.predictor.degenerate()
                     ? nlohmann::json(nullptr)
                     : nlohmann::json(run.predictor.q_alpha);
  j["coverage"] = m.coverage;
  j["avg_set_size"] = m.avg_set_size;
  j["cov_gap"] = m.cov_gap;
  j["mccc"] = m.mccc;
  j["ece"] = m.ece;
  j["accuracy"] = m.accuracy;
  j["empty_set_fraction"] = m.empty_set_fraction;
  nlohmann::json per_class = nlohmann::json::object();
  for (const auto& [cls, cov] : m.per_class_coverage) {
    per_class[std::to_string(cls)] = cov;
  }
  j["per_class_coverage"] = std::move(per_class);
  return j;
}

std::string csv_header() {
  std::string out;
  for (const auto& c : report_columns()) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out;
}

std::string csv_row(const RunResult& run) {
  const auto& cfg = run.config;
  const auto& m = run.metrics;
  const std::vector<std::string> fields = {
      run.model,
      fmt_double(cfg.alpha),
      std::string(to_string(cfg.method.method)),
      fmt_double(cfg.method.lambda),
      std::to_string(cfg.method.k_reg),
      cfg.method.u_mode.to_string(),
      run.temperature ? fmt_double(*run.temperature) : std::string(),
      std::to_string(cfg.seed),
      fmt_double(cfg.cal_fraction),
      std::to_string(run.num_classes),
      std::to_string(run.n_cal),
      std::to_string(run.n_test),
      fmt_double(run.predictor.q_alpha),
      fmt_double(m.coverage),
      fmt_double(m.avg_set_size),
      fmt_double(m.cov_gap),
      fmt_double(m.mccc),
      fmt_double(m.ece),
      fmt_double(m.accuracy),
      fmt_double(m.empty_set_fraction)};
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    out += fields[i];
  }
  return out;
}

std::string to_csv(std::span<const RunResult> runs) {
  std::string out = csv_header() + "\n";
  for (const auto& run : runs) out += csv_row(run) + "\n";
  return out;
}

nlohmann::json to_json(const SetSizeDelta& delta) {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [d, count] : delta.histogram) {
    hist[std::to_string(d)] = count;
  }
  return {{"histogram", std::move(hist)}, {"zeros", delta.zeros}};
}

nlohmann::json to_json(const WorstClassComparison& cmp) {
  return {{"worst_class", cmp.worst_class},
          {"a_coverage", cmp.a_coverage},
          {"a_set_size", optional_number(cmp.a_set_size)},
          {"b_coverage", optional_number(cmp.b_coverage)},
          {"b_set_size", optional_number(cmp.b_set_size)},
          {"b_min_coverage", cmp.b_min_coverage}};
}

std::string set_sizes_csv(const RunResult& run) {
  std::ostringstream out;
  out << "index,label,set_size\n";
  for (std::size_t i = 0; i < run.sets.size(); ++i) {
    out << i << ',' << run.labels[i] << ',' << run.sets[i].size() << '\n';
  }
  return out.str();
}

std::string per_class_csv(const ClassCoverage& per_class) {
  std::string out = "class,coverage\n";
  for (const auto& [cls, cov] : per_class) {
    out += std::to_string(cls) + "," + fmt_double(cov) + "\n";
  }
  return out;
}

}  // namespace cpkit
