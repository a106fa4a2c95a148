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
#include <string>
#include <string_view>
#include <vector>

#include "cpkit/prob_core.hpp"
#include "cpkit/rng.hpp"

namespace cpkit {

enum class ScoreMethod { kLac, kAps, kRaps };

std::string_view to_string(ScoreMethod method) noexcept;
ScoreMethod parse_score_method(std::string_view name);

/// How the tie-breaking draw u is obtained for APS and RAPS.
struct UMode {
  enum class Kind { kUniform, kFixed } kind = Kind::kUniform;
  double value = 0.0;  // used when kind == kFixed

  static UMode uniform() { return {}; }
  static UMode fixed(double v) { return {Kind::kFixed, v}; }

  /// "uniform" or "fixed:<v>".
  static UMode parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const UMode&, const UMode&) = default;
};

inline constexpr double kDefaultRapsLambda = 0.1;
inline constexpr std::int64_t kDefaultRapsKReg = 2;

struct ScoreSpec {
  ScoreMethod method = ScoreMethod::kAps;
  double lambda = kDefaultRapsLambda;
  std::int64_t k_reg = kDefaultRapsKReg;
  UMode u_mode = UMode::uniform();

  static ScoreSpec lac() { return {ScoreMethod::kLac}; }
  static ScoreSpec aps(UMode u = UMode::uniform()) {
    return {ScoreMethod::kAps, kDefaultRapsLambda, kDefaultRapsKReg, u};
  }
  static ScoreSpec raps(double lambda = kDefaultRapsLambda,
                        std::int64_t k_reg = kDefaultRapsKReg,
                        UMode u = UMode::uniform()) {
    return {ScoreMethod::kRaps, lambda, k_reg, u};
  }

  /// lambda >= 0, k_reg >= 0, fixed u in [0, 1].
  void validate() const;

  friend bool operator==(const ScoreSpec&, const ScoreSpec&) = default;
};

double score_lac(std::span<const double> p, std::size_t y);
double score_aps(std::span<const double> p, std::size_t y, double u);
double score_raps(std::span<const double> p, std::size_t y, double u,
                  double lambda, std::int64_t k_reg);

/// Dispatch on spec.method. LAC ignores u.
double score(const ScoreSpec& spec, std::span<const double> p, std::size_t y,
             double u);

/// Scores of every candidate class for one sample. Bit-identical to calling
/// score() once per class.
std::vector<double> score_all_classes(const ScoreSpec& spec,
                                      std::span<const double> p, double u);

/// The u used for sample `index`: the fixed value, or a uniform draw from
/// the keyed generator for (seed, stream, index).
double draw_u(const UMode& mode, std::uint64_t seed, Stream stream,
              std::size_t index);

enum class LabelsMode { kObserved, kAllClasses };

/// Row-major scores. Observed mode yields n entries (score of the true
/// label); all-classes mode yields n x K entries. One u per sample, shared
/// across that sample's candidates. Requires kind = probabilities.
std::vector<double> score_batch(const LogitDataset& ds, const ScoreSpec& spec,
                                LabelsMode mode, std::uint64_t seed,
                                Stream stream = Stream::kDefault);

}  // namespace cpkit
