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

#include "cpkit/scores.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <numeric>

#include "cpkit/error.hpp"

namespace cpkit {

std::string_view to_string(ScoreMethod method) noexcept {
  switch (method) {
    case ScoreMethod::kLac:
      return "lac";
    case ScoreMethod::kAps:
      return "aps";
    case ScoreMethod::kRaps:
      return "raps";
  }
  return "?";
}

ScoreMethod parse_score_method(std::string_view name) {
  if (name == "lac" || name == "LAC") return ScoreMethod::kLac;
  if (name == "aps" || name == "APS") return ScoreMethod::kAps;
  if (name == "raps" || name == "RAPS") return ScoreMethod::kRaps;
  raise(ErrorKind::kConfig, "unknown method '" + std::string(name) + "'");
}

UMode UMode::parse(std::string_view text) {
  if (text == "uniform") return uniform();
  constexpr std::string_view kPrefix = "fixed:";
  if (text.starts_with(kPrefix)) {
    const std::string number(text.substr(kPrefix.size()));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(number, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != number.size()) {
      raise(ErrorKind::kConfig, "bad u value '" + number + "'");
    }
    if (!(v >= 0.0 && v <= 1.0)) {
      raise(ErrorKind::kConfig, "fixed u must lie in [0, 1]");
    }
    return fixed(v);
  }
  raise(ErrorKind::kConfig,
        "u mode must be 'uniform' or 'fixed:<v>', got '" + std::string(text) +
            "'");
}

std::string UMode::to_string() const {
  if (kind == Kind::kUniform) return "uniform";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return "fixed:" + std::string(buf.data(), end);
}

void ScoreSpec::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    raise(ErrorKind::kInvalidParameter, "lambda must be >= 0");
  }
  if (k_reg < 0) raise(ErrorKind::kInvalidParameter, "k_reg must be >= 0");
  if (u_mode.kind == UMode::Kind::kFixed &&
      !(u_mode.value >= 0.0 && u_mode.value <= 1.0)) {
    raise(ErrorKind::kInvalidParameter, "fixed u must lie in [0, 1]");
  }
}

namespace {

void check_label(std::span<const double> p, std::size_t y) {
  if (y >= p.size()) {
    raise(ErrorKind::kIndex, "class " + std::to_string(y) + " outside [0, " +
                                 std::to_string(p.size()) + ")");
  }
}

void check_u(double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    raise(ErrorKind::kInvalidParameter, "u must lie in [0, 1]");
  }
}

// Mass of the classes strictly more probable than y, summed from the largest
// down, together with y's rank (1 for the top class).
struct Ranked {
  double mass_above = 0.0;
  std::int64_t rank = 1;
};

Ranked rank_of(std::span<const double> p, std::size_t y) {
  std::vector<double> above;
  for (double v : p) {
    if (v > p[y]) above.push_back(v);
  }
  std::sort(above.begin(), above.end(), std::greater<>());
  Ranked r;
  for (double v : above) r.mass_above += v;
  r.rank = static_cast<std::int64_t>(above.size()) + 1;
  return r;
}

double penalty(double lambda, std::int64_t rank, std::int64_t k_reg) {
  return lambda * static_cast<double>(std::max<std::int64_t>(0, rank - k_reg));
}

}  // namespace

double score_lac(std::span<const double> p, std::size_t y) {
  check_label(p, y);
  return 1.0 - p[y];
}

double score_aps(std::span<const double> p, std::size_t y, double u) {
  check_label(p, y);
  check_u(u);
  const Ranked r = rank_of(p, y);
  return r.mass_above + p[y] * u;
}

double score_raps(std::span<const double> p, std::size_t y, double u,
                  double lambda, std::int64_t k_reg) {
  check_label(p, y);
  check_u(u);
  if (!(lambda >= 0.0)) raise(ErrorKind::kInvalidParameter, "lambda < 0");
  if (k_reg < 0) raise(ErrorKind::kInvalidParameter, "k_reg < 0");
  const Ranked r = rank_of(p, y);
  return r.mass_above + p[y] * u + penalty(lambda, r.rank, k_reg);
}

double score(const ScoreSpec& spec, std::span<const double> p, std::size_t y,
             double u) {
  switch (spec.method) {
    case ScoreMethod::kLac:
      return score_lac(p, y);
    case ScoreMethod::kAps:
      return score_aps(p, y, u);
    case ScoreMethod::kRaps:
      return score_raps(p, y, u, spec.lambda, spec.k_reg);
  }
  return 0.0;
}

std::vector<double> score_all_classes(const ScoreSpec& spec,
                                      std::span<const double> p, double u) {
  const std::size_t k = p.size();
  std::vector<double> out(k);
  if (spec.method == ScoreMethod::kLac) {
    for (std::size_t y = 0; y < k; ++y) out[y] = 1.0 - p[y];
    return out;
  }
  check_u(u);

  // Walk classes from most to least probable. Every member of a group of
  // equal probabilities sees the same strictly-greater mass and rank; the
  // running sum adds values in descending order, matching rank_of().
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });
  double running = 0.0;
  std::size_t i = 0;
  while (i < k) {
    std::size_t j = i;
    while (j < k && p[order[j]] == p[order[i]]) ++j;
    const auto rank = static_cast<std::int64_t>(i) + 1;
    for (std::size_t g = i; g < j; ++g) {
      const std::size_t y = order[g];
      double s = running + p[y] * u;
      if (spec.method == ScoreMethod::kRaps) {
        s += penalty(spec.lambda, rank, spec.k_reg);
      }
      out[y] = s;
    }
    for (std::size_t g = i; g < j; ++g) running += p[order[g]];
    i = j;
  }
  return out;
}

double draw_u(const UMode& mode, std::uint64_t seed, Stream stream,
              std::size_t index) {
  if (mode.kind == UMode::Kind::kFixed) return mode.value;
  return keyed_generator(seed, stream, index).uniform();
}

std::vector<double> score_batch(const LogitDataset& ds, const ScoreSpec& spec,
                                LabelsMode mode, std::uint64_t seed,
                                Stream stream) {
  ds.require_labeled_probabilities();
  spec.validate();
  const std::size_t n = ds.size();
  const std::size_t k = ds.num_classes();
  std::vector<double> out;
  if (mode == LabelsMode::kObserved) {
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = draw_u(spec.u_mode, seed, stream, i);
      out[i] = score(spec, ds.row(i), static_cast<std::size_t>(ds.label(i)), u);
    }
  } else {
    out.resize(n * k);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = draw_u(spec.u_mode, seed, stream, i);
      const auto row = score_all_classes(spec, ds.row(i), u);
      std::copy(row.begin(), row.end(), out.begin() + i * k);
    }
  }
  return out;
}

}  // namespace cpkit
