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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>

#include "cpkit/io.hpp"
#include "cpkit/report.hpp"

namespace cpkit {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run_cli(const std::string& args) {
  const std::string cmd = std::string(CPKIT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {};
  Outcome result;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    result.out.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cpkit_cli_" + std::string(::testing::UnitTest::GetInstance()
                                           ->current_test_info()
                                           ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, GenerateThenConformalizeWritesReports) {
  ASSERT_EQ(run_cli("generate --out " + path("m.cpl") + " --classes 10 --n 600 --seed 1").code,
            0);
  const auto info = run_cli("info " + path("m.cpl"));
  ASSERT_EQ(info.code, 0);
  const auto header = nlohmann::json::parse(info.out);
  EXPECT_EQ(header["n"], 600);
  EXPECT_EQ(header["K"], 10);
  EXPECT_EQ(header["kind"], "probabilities");

  const auto res = run_cli("conformalize " + path("m.cpl") + " --method raps --out " +
                           path("out") + " --seed 4");
  ASSERT_EQ(res.code, 0);
  const auto report = nlohmann::json::parse(res.out);
  EXPECT_EQ(report["method"], "raps");
  EXPECT_EQ(report["model"], "m");
  EXPECT_EQ(report["n_cal"], 300);
  EXPECT_EQ(report["n_test"], 300);
  EXPECT_EQ(nlohmann::json::parse(slurp(path("out/report.json"))), report);
  EXPECT_EQ(slurp(path("out/report.csv")).rfind(csv_header() + "\n", 0), 0u);
  EXPECT_TRUE(fs::exists(path("out/set_sizes.csv")));
  EXPECT_TRUE(fs::exists(path("out/per_class_coverage.csv")));
}

TEST_F(CliTest, SweepAndShiftAndCompare) {
  ASSERT_EQ(run_cli("generate --logits --out " + path("l.cpl") + " --n 400").code, 0);
  const auto sweep = run_cli("sweep-temperature " + path("l.cpl") + " --t-grid 0.5:2:4");
  ASSERT_EQ(sweep.code, 0);
  const auto runs = nlohmann::json::parse(sweep.out);
  ASSERT_EQ(runs.size(), 4u);
  EXPECT_EQ(runs[0]["T"], 0.5);
  EXPECT_EQ(runs[3]["T"], 2.0);

  ASSERT_EQ(run_cli("generate --out " + path("test.cpl") + " --cal-out " + path("cal.cpl") +
                    " --n 300 --shift-drop 0.3 --shift-noise 1")
                .code,
            0);
  const auto shift = run_cli("shift-eval --cal " + path("cal.cpl") + " --test " +
                             path("test.cpl") + " --method lac");
  ASSERT_EQ(shift.code, 0);
  EXPECT_EQ(nlohmann::json::parse(shift.out)["n_cal"], 300);

  const auto cmp = run_cli("compare a=" + path("cal.cpl") + " b=" + path("cal.cpl") +
                           " --worst-class a/lac,b/aps --delta a/aps,b/aps --out " +
                           path("cmp"));
  ASSERT_EQ(cmp.code, 0);
  const auto doc = nlohmann::json::parse(cmp.out);
  EXPECT_EQ(doc["runs"].size(), 6u);
  EXPECT_EQ(doc["set_size_delta"]["zeros"], 150);
  EXPECT_TRUE(doc["set_size_delta"]["histogram"].empty());
  EXPECT_TRUE(doc["worst_class"].contains("b_min_coverage"));
  EXPECT_TRUE(fs::exists(path("cmp/compare.json")));
  EXPECT_TRUE(fs::exists(path("cmp/compare.csv")));
}

// A file laid out by hand the way an external exporter would write it:
// one-hot probabilities, so every set is exactly the label.
TEST_F(CliTest, AcceptsExternallyWrittenFile) {
  constexpr std::uint64_t n = 40;
  constexpr std::uint32_t k = 4;
  std::vector<std::uint8_t> bytes{'C', 'P', 'L', '1', 1, 0, 0, 0};
  for (int b = 0; b < 8; ++b) bytes.push_back(static_cast<std::uint8_t>(n >> (8 * b)));
  for (int b = 0; b < 4; ++b) bytes.push_back(static_cast<std::uint8_t>(k >> (8 * b)));
  bytes.push_back(kFlagLabels | kFlagProbabilities);
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::uint32_t c = 0; c < k; ++c) {
      const float v = c == i % k ? 1.0f : 0.0f;
      std::array<std::uint8_t, 4> raw{};
      std::memcpy(raw.data(), &v, 4);
      bytes.insert(bytes.end(), raw.begin(), raw.end());
    }
  }
  for (std::uint64_t i = 0; i < n; ++i) {
    bytes.push_back(static_cast<std::uint8_t>(i % k));
    bytes.insert(bytes.end(), 3, 0);
  }
  std::ofstream(path("onehot.cpl"), std::ios::binary)
      .write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));

  for (const char* method : {"lac", "aps", "raps"}) {
    const auto res = run_cli("conformalize " + path("onehot.cpl") + " --method " + method +
                             " --u-mode fixed:0");
    ASSERT_EQ(res.code, 0) << method;
    const auto report = nlohmann::json::parse(res.out);
    EXPECT_EQ(report["coverage"], 1.0) << method;
    EXPECT_EQ(report["avg_set_size"], 1.0) << method;
    EXPECT_EQ(report["accuracy"], 1.0) << method;
  }
}

TEST_F(CliTest, ExitCodes) {
  // Missing file and malformed file: input errors.
  EXPECT_EQ(run_cli("conformalize " + path("missing.cpl")).code, 2);
  std::ofstream(path("junk.cpl")) << "XXXXnot a logits file at all";
  EXPECT_EQ(run_cli("conformalize " + path("junk.cpl")).code, 2);
  EXPECT_EQ(run_cli("info " + path("junk.cpl")).code, 2);

  ASSERT_EQ(run_cli("generate --out " + path("p.cpl") + " --n 50").code, 0);
  // Bad parameters: configuration errors.
  EXPECT_EQ(run_cli("conformalize " + path("p.cpl") + " --alpha 1.5").code, 3);
  EXPECT_EQ(run_cli("conformalize " + path("p.cpl") + " --method nope").code, 3);
  EXPECT_EQ(run_cli("conformalize " + path("p.cpl") + " --u-mode sometimes").code, 3);
  EXPECT_EQ(run_cli("conformalize " + path("p.cpl") + " --unknown-flag").code, 3);
  EXPECT_EQ(run_cli("sweep-temperature " + path("p.cpl") + " --t-grid 1:2").code, 3);
  EXPECT_EQ(run_cli("generate --out " + path("q.cpl") + " --accuracy 0").code, 3);
  EXPECT_EQ(run_cli("").code, 3);

  // Temperature on probabilities is a state error on the input.
  EXPECT_EQ(run_cli("conformalize " + path("p.cpl") + " --temperature 1.5").code, 2);
  EXPECT_EQ(run_cli("conformalize " + path("p.cpl") + " --format csv").code, 0);
}

}  // namespace
}  // namespace cpkit
