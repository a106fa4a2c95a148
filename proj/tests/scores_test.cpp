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

#include <gtest/gtest.h>

#include <algorithm>
#include <cstring>
#include <random>

#include "test_util.hpp"

namespace cpkit {
namespace {

using testing::kind_of;

const std::vector<double> kP3{0.5, 0.3, 0.2};

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

// Random rows with deliberate ties so the strict-inequality path is exercised.
std::vector<double> tied_simplex(std::mt19937_64& rng, std::size_t k) {
  std::uniform_int_distribution<int> level(1, 4);
  std::vector<double> p(k);
  double total = 0.0;
  for (auto& v : p) {
    v = level(rng);
    total += v;
  }
  for (auto& v : p) v /= total;
  return p;
}

TEST(ScoreLacTest, OneMinusLabelProbability) {
  const std::vector<double> p{0.7, 0.2, 0.1};
  EXPECT_NEAR(score_lac(p, 0), 0.3, 1e-15);
  EXPECT_NEAR(score_lac(p, 2), 0.9, 1e-15);
  const std::vector<double> uniform(4, 0.25);
  for (std::size_t y = 0; y < 4; ++y) EXPECT_DOUBLE_EQ(score_lac(uniform, y), 0.75);
  EXPECT_EQ(kind_of([&] { score_lac(p, 3); }), ErrorKind::kIndex);
}

TEST(ScoreApsTest, Examples) {
  EXPECT_DOUBLE_EQ(score_aps(kP3, 1, 1.0), 0.8);
  EXPECT_DOUBLE_EQ(score_aps(kP3, 0, 0.0), 0.0);
  // The tied 0.4 is not strictly greater, so it contributes nothing.
  EXPECT_DOUBLE_EQ(score_aps(std::vector<double>{0.4, 0.4, 0.2}, 0, 1.0), 0.4);
  EXPECT_DOUBLE_EQ(score_aps(std::vector<double>{0.4, 0.4, 0.2}, 1, 1.0), 0.4);
}

TEST(ScoreApsTest, RejectsBadArguments) {
  EXPECT_EQ(kind_of([] { score_aps(kP3, 0, 1.5); }), ErrorKind::kInvalidParameter);
  EXPECT_EQ(kind_of([] { score_aps(kP3, 0, -0.1); }), ErrorKind::kInvalidParameter);
  EXPECT_EQ(kind_of([] { score_aps(kP3, 5, 0.5); }), ErrorKind::kIndex);
}

TEST(ScoreRapsTest, Examples) {
  EXPECT_NEAR(score_raps(kP3, 2, 0.0, 0.1, 2), 0.9, 1e-15);
  EXPECT_DOUBLE_EQ(score_raps(kP3, 2, 0.0, 0.0, 2), 0.8);
  EXPECT_DOUBLE_EQ(score_raps(kP3, 0, 1.0, 0.1, 2), 0.5);
  EXPECT_EQ(kind_of([] { score_raps(kP3, 0, 0.5, -0.1, 2); }),
            ErrorKind::kInvalidParameter);
  EXPECT_EQ(kind_of([] { score_raps(kP3, 0, 0.5, 0.1, -1); }),
            ErrorKind::kInvalidParameter);
}

TEST(ScorePropertiesTest, RapsWithZeroLambdaIsApsBitForBit) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t k = 1 + trial % 20;
    const auto p = trial % 2 ? testing::random_simplex(rng, k) : tied_simplex(rng, k);
    const double u = unit(rng);
    const auto k_reg = static_cast<std::int64_t>(trial % 5);
    for (std::size_t y = 0; y < k; ++y) {
      ASSERT_TRUE(same_bits(score_raps(p, y, u, 0.0, k_reg), score_aps(p, y, u)));
    }
  }
}

TEST(ScorePropertiesTest, ApsMonotoneInU) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = testing::random_simplex(rng, 8);
    double u1 = unit(rng);
    double u2 = unit(rng);
    if (u1 > u2) std::swap(u1, u2);
    for (std::size_t y = 0; y < p.size(); ++y) {
      ASSERT_LE(score_aps(p, y, u1), score_aps(p, y, u2));
    }
  }
}

TEST(ScorePropertiesTest, ApsOfUniqueArgmaxWithFullUIsMax) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = testing::random_simplex(rng, 1 + trial % 30);
    const auto top = static_cast<std::size_t>(
        std::max_element(p.begin(), p.end()) - p.begin());
    ASSERT_EQ(std::count(p.begin(), p.end(), p[top]), 1);
    ASSERT_EQ(score_aps(p, top, 1.0), p[top]);
  }
}

TEST(ScorePropertiesTest, RapsDominatesAps) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = tied_simplex(rng, 12);
    const double u = unit(rng);
    const double lambda = unit(rng);
    for (std::size_t y = 0; y < p.size(); ++y) {
      ASSERT_GE(score_raps(p, y, u, lambda, trial % 4), score_aps(p, y, u));
    }
  }
}

TEST(ScorePropertiesTest, InvariantUnderPermutingOtherClasses) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    auto p = trial % 2 ? testing::random_simplex(rng, 10) : tied_simplex(rng, 10);
    const std::size_t y = trial % 10;
    const double u = unit(rng);
    const double lac = score_lac(p, y);
    const double aps = score_aps(p, y, u);
    const double raps = score_raps(p, y, u, 0.1, 2);
    // Shuffle every class except y.
    std::vector<double> others;
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (k != y) others.push_back(p[k]);
    }
    std::shuffle(others.begin(), others.end(), rng);
    for (std::size_t k = 0, j = 0; k < p.size(); ++k) {
      if (k != y) p[k] = others[j++];
    }
    ASSERT_TRUE(same_bits(score_lac(p, y), lac));
    ASSERT_TRUE(same_bits(score_aps(p, y, u), aps));
    ASSERT_TRUE(same_bits(score_raps(p, y, u, 0.1, 2), raps));
  }
}

TEST(ScoreAllClassesTest, MatchesPerClassScoresBitForBit) {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::vector<ScoreSpec> specs{ScoreSpec::lac(), ScoreSpec::aps(),
                                     ScoreSpec::raps(), ScoreSpec::raps(0.3, 0)};
  for (int trial = 0; trial < 500; ++trial) {
    const auto p = trial % 2 ? testing::random_simplex(rng, 1 + trial % 40)
                             : tied_simplex(rng, 1 + trial % 40);
    const double u = unit(rng);
    for (const auto& spec : specs) {
      const auto all = score_all_classes(spec, p, u);
      for (std::size_t y = 0; y < p.size(); ++y) {
        ASSERT_TRUE(same_bits(all[y], score(spec, p, y, u)));
      }
    }
  }
}

TEST(ScoreBatchTest, Examples) {
  const LogitDataset one(3, ValueKind::kProbabilities, {0.7, 0.2, 0.1}, {0});
  const auto lac = score_batch(one, ScoreSpec::lac(), LabelsMode::kObserved, 0);
  ASSERT_EQ(lac.size(), 1u);
  EXPECT_NEAR(lac[0], 0.3, 1e-15);

  const LogitDataset row(3, ValueKind::kProbabilities, kP3, {0});
  const auto aps = score_batch(row, ScoreSpec::aps(UMode::fixed(1.0)),
                               LabelsMode::kAllClasses, 0);
  ASSERT_EQ(aps.size(), 3u);
  EXPECT_DOUBLE_EQ(aps[0], 0.5);
  EXPECT_DOUBLE_EQ(aps[1], 0.8);
  EXPECT_DOUBLE_EQ(aps[2], 1.0);
}

TEST(ScoreBatchTest, RapsZeroLambdaEqualsApsOnRandomRows) {
  std::mt19937_64 rng(17);
  const auto ds = testing::random_probabilities(rng, 100, 9);
  for (auto mode : {LabelsMode::kObserved, LabelsMode::kAllClasses}) {
    const auto aps = score_batch(ds, ScoreSpec::aps(), mode, 99);
    const auto raps = score_batch(ds, ScoreSpec::raps(0.0, 3), mode, 99);
    ASSERT_EQ(aps.size(), raps.size());
    EXPECT_EQ(std::memcmp(aps.data(), raps.data(), aps.size() * sizeof(double)), 0);
  }
}

TEST(ScoreBatchTest, UIsSharedWithinSampleAndKeyedBySeed) {
  std::mt19937_64 rng(18);
  const auto ds = testing::random_probabilities(rng, 20, 5);
  const auto spec = ScoreSpec::aps();
  const auto all = score_batch(ds, spec, LabelsMode::kAllClasses, 4);
  const auto observed = score_batch(ds, spec, LabelsMode::kObserved, 4);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double u = draw_u(spec.u_mode, 4, Stream::kDefault, i);
    for (std::size_t y = 0; y < 5; ++y) {
      ASSERT_TRUE(same_bits(all[i * 5 + y], score_aps(ds.row(i), y, u)));
    }
    ASSERT_TRUE(same_bits(observed[i], all[i * 5 + ds.label(i)]));
  }
  EXPECT_EQ(all, score_batch(ds, spec, LabelsMode::kAllClasses, 4));
  EXPECT_NE(all, score_batch(ds, spec, LabelsMode::kAllClasses, 5));
}

TEST(ScoreBatchTest, RequiresProbabilities) {
  const LogitDataset logits(2, ValueKind::kLogits, {2.0, 0.0}, {0});
  EXPECT_EQ(kind_of([&] { score_batch(logits, ScoreSpec::lac(), LabelsMode::kObserved, 0); }),
            ErrorKind::kInvalidState);
}

TEST(ScoreSpecTest, DefaultsAndValidation) {
  const auto raps = ScoreSpec::raps();
  EXPECT_DOUBLE_EQ(raps.lambda, 0.1);
  EXPECT_EQ(raps.k_reg, 2);
  EXPECT_EQ(raps.u_mode, UMode::uniform());
  EXPECT_EQ(kind_of([] { ScoreSpec::raps(-1.0).validate(); }), ErrorKind::kInvalidParameter);
  EXPECT_EQ(kind_of([] { ScoreSpec::raps(0.1, -2).validate(); }), ErrorKind::kInvalidParameter);
  EXPECT_EQ(kind_of([] { ScoreSpec::aps(UMode::fixed(2.0)).validate(); }),
            ErrorKind::kInvalidParameter);
}

TEST(UModeTest, ParsesAndPrints) {
  EXPECT_EQ(UMode::parse("uniform"), UMode::uniform());
  EXPECT_EQ(UMode::parse("fixed:1"), UMode::fixed(1.0));
  EXPECT_EQ(UMode::parse("fixed:0.25"), UMode::fixed(0.25));
  EXPECT_EQ(UMode::fixed(0.25).to_string(), "fixed:0.25");
  EXPECT_EQ(kind_of([] { UMode::parse("fixed:abc"); }), ErrorKind::kConfig);
  EXPECT_EQ(kind_of([] { UMode::parse("fixed:1.5"); }), ErrorKind::kConfig);
  EXPECT_EQ(kind_of([] { UMode::parse("binary"); }), ErrorKind::kConfig);
  EXPECT_EQ(parse_score_method("RAPS"), ScoreMethod::kRaps);
  EXPECT_EQ(kind_of([] { parse_score_method("thr"); }), ErrorKind::kConfig);
}

}  // namespace
}  // namespace cpkit
