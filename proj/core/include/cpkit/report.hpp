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

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cpkit/harness.hpp"
#include "cpkit/metrics.hpp"

namespace cpkit {

/// Flat keys present in every emitted record, in CSV column order.
const std::vector<std::string>& report_columns();

/// Flat record plus "per_class_coverage" ({"<class>": coverage}).
nlohmann::json to_json(const RunResult& run);

/// Header line and one row per run, no trailing newline on rows.
std::string csv_header();
std::string csv_row(const RunResult& run);
std::string to_csv(std::span<const RunResult> runs);

nlohmann::json to_json(const SetSizeDelta& delta);
nlohmann::json to_json(const WorstClassComparison& cmp);

/// "index,label,set_size" lines for every test sample.
std::string set_sizes_csv(const RunResult& run);

/// "class,coverage" lines.
std::string per_class_csv(const ClassCoverage& per_class);

}  // namespace cpkit
