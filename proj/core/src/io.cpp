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

#include "cpkit/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>
#include <string>

#include "cpkit/error.hpp"
#include "cpkit/rng.hpp"

namespace cpkit {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {'C', 'P', 'L', '1'};

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  for (std::size_t b = 0; b < sizeof(T); ++b) {
    out.push_back(static_cast<std::uint8_t>(value >> (8 * b)));
  }
}

template <typename T>
T get_le(std::span<const std::uint8_t> bytes, std::size_t offset) {
  T value = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) {
    value |= static_cast<T>(bytes[offset + b]) << (8 * b);
  }
  return value;
}

}  // namespace

std::vector<std::uint8_t> encode_logits(const LogitDataset& ds) {
  const std::size_t n = ds.size();
  const std::size_t k = ds.num_classes();
  if (k > 0xffffffffu) raise(ErrorKind::kValidation, "K does not fit in 32 bits");

  std::vector<std::uint8_t> out;
  out.reserve(kLogitsHeaderSize + 4 * n * k + (ds.labeled() ? 4 * n : 0));
  for (std::uint8_t c : kMagic) out.push_back(c);
  put_le<std::uint32_t>(out, kLogitsFormatVersion);
  put_le<std::uint64_t>(out, n);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(k));
  std::uint8_t flags = 0;
  if (ds.labeled()) flags |= kFlagLabels;
  if (ds.kind() == ValueKind::kProbabilities) flags |= kFlagProbabilities;
  out.push_back(flags);

  for (double v : ds.values()) {
    const auto f = static_cast<float>(v);
    if (!std::isfinite(f)) {
      raise(ErrorKind::kValidation, "value does not fit in float32");
    }
    put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(f));
  }
  if (ds.labeled()) {
    for (std::int32_t y : ds.labels()) {
      put_le<std::uint32_t>(out, static_cast<std::uint32_t>(y));
    }
  }
  return out;
}

LogitDataset decode_logits(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kLogitsHeaderSize) {
    raise(ErrorKind::kFormat, "file shorter than the CPL1 header");
  }
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    raise(ErrorKind::kFormat, "bad magic, expected CPL1");
  }
  const auto version = get_le<std::uint32_t>(bytes, 4);
  if (version != kLogitsFormatVersion) {
    raise(ErrorKind::kFormat, "unsupported version " + std::to_string(version));
  }
  const auto n = get_le<std::uint64_t>(bytes, 8);
  const auto k = get_le<std::uint32_t>(bytes, 16);
  const std::uint8_t flags = bytes[20];
  if ((flags & ~(kFlagLabels | kFlagProbabilities)) != 0) {
    raise(ErrorKind::kFormat, "unknown flag bits");
  }
  if (k == 0) raise(ErrorKind::kFormat, "K must be >= 1");
  const bool labeled = (flags & kFlagLabels) != 0;

  // Compare sizes in a way that cannot overflow for hostile headers.
  const std::size_t body = bytes.size() - kLogitsHeaderSize;
  const std::uint64_t per_row = 4ull * k + (labeled ? 4u : 0u);
  if (n > body / per_row || n * per_row != body) {
    raise(ErrorKind::kCorruption,
          "payload is " + std::to_string(body) + " bytes, header implies " +
              (n > body / per_row ? std::string("more")
                                  : std::to_string(n * per_row)));
  }

  std::vector<double> values(n * k);
  std::size_t offset = kLogitsHeaderSize;
  for (auto& v : values) {
    v = std::bit_cast<float>(get_le<std::uint32_t>(bytes, offset));
    offset += 4;
  }
  const auto kind = (flags & kFlagProbabilities) != 0 ? ValueKind::kProbabilities
                                                      : ValueKind::kLogits;
  if (!labeled) return LogitDataset::unlabeled(k, kind, std::move(values));

  std::vector<std::int32_t> labels(n);
  for (auto& y : labels) {
    y = static_cast<std::int32_t>(get_le<std::uint32_t>(bytes, offset));
    offset += 4;
  }
  return LogitDataset(k, kind, std::move(values), std::move(labels));
}

void write_logits(const LogitDataset& ds, const std::filesystem::path& path) {
  const auto bytes = encode_logits(ds);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorKind::kInvalidInput, "cannot open " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) raise(ErrorKind::kInvalidInput, "write failed for " + path.string());
}

LogitDataset read_logits(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::kInvalidInput, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                  std::istreambuf_iterator<char>()};
  return decode_logits(bytes);
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Xoshiro256StarStar gen(seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(gen.bounded(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

std::pair<LogitDataset, LogitDataset> split(const LogitDataset& ds,
                                            double cal_fraction,
                                            std::uint64_t seed) {
  if (!(cal_fraction > 0.0 && cal_fraction <= 1.0)) {
    raise(ErrorKind::kInvalidParameter, "cal fraction must lie in (0, 1]");
  }
  if (cal_fraction == 1.0) return {ds, ds.select({})};
  const std::size_t n = ds.size();
  if (n < 2) {
    raise(ErrorKind::kInvalidInput, "need at least 2 samples to split");
  }
  const auto perm = shuffled_indices(n, seed);
  const auto n_cal = std::min(
      n, static_cast<std::size_t>(std::floor(static_cast<double>(n) * cal_fraction)));
  const std::span<const std::size_t> all(perm);
  return {ds.select(all.first(n_cal)), ds.select(all.subspan(n_cal))};
}

}  // namespace cpkit
