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
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "cpkit/prob_core.hpp"

namespace cpkit {

// CPL1 layout, all fields little-endian:
//
//   offset  size  field
//   0       4     magic "CPL1"
//   4       4     version (uint32) = 1
//   8       8     n (uint64)
//   16      4     K (uint32)
//   20      1     flags: bit0 labels present, bit1 values are probabilities
//   21      4nK   values, float32 row-major
//   ...     4n    labels, int32 (only if bit0)
inline constexpr std::uint32_t kLogitsFormatVersion = 1;
inline constexpr std::size_t kLogitsHeaderSize = 21;
inline constexpr std::uint8_t kFlagLabels = 0x1;
inline constexpr std::uint8_t kFlagProbabilities = 0x2;

/// Values are narrowed to float32; a value that does not fit raises a
/// validation error.
std::vector<std::uint8_t> encode_logits(const LogitDataset& ds);

/// Bad magic, version, flags or K = 0 raise format errors; a byte count that
/// disagrees with the header raises a corruption error; bad values or labels
/// raise validation errors.
LogitDataset decode_logits(std::span<const std::uint8_t> bytes);

void write_logits(const LogitDataset& ds, const std::filesystem::path& path);
LogitDataset read_logits(const std::filesystem::path& path);

/// Fisher-Yates permutation of [0, n) driven by xoshiro256** seeded through
/// splitmix64(seed), swapping from the last index down.
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

/// The first floor(n * cal_fraction) shuffled rows form the calibration set,
/// the rest the test set. cal_fraction = 1 returns ds unchanged as the
/// calibration set and an empty test set.
std::pair<LogitDataset, LogitDataset> split(const LogitDataset& ds,
                                            double cal_fraction,
                                            std::uint64_t seed);

}  // namespace cpkit
