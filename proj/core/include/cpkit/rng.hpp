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

#include <array>
#include <cstdint>
#include <limits>

namespace cpkit {

/// SplitMix64, used only to expand a 64-bit seed into generator state.
/// See https://prng.di.unimi.it
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t operator()() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

__extension__ using uint128_t = unsigned __int128;

/// xoshiro256** 1.0. Satisfies UniformRandomBitGenerator so it can drive the
/// standard distributions.

class Xoshiro256StarStar {
 public:
  using result_type = std::uint64_t;

  /// State is four successive SplitMix64 outputs of `seed`.
  explicit constexpr Xoshiro256StarStar(std::uint64_t seed) noexcept {
    SplitMix64 sm(seed);
    for (auto& word : s_) word = sm();
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 bits of resolution.
  constexpr double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Unbiased integer in [0, bound) by Lemire's multiply-and-reject method.
  /// bound must be nonzero.
  std::uint64_t bounded(std::uint64_t bound) noexcept {
    std::uint64_t x = (*this)();
    uint128_t m = static_cast<uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = (*this)();
        m = static_cast<uint128_t>(x) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
};

/// Stream identifiers so that independent consumers of one user seed never
/// share draws.
enum class Stream : std::uint64_t {
  kDefault = 0,
  kCalibration = 1,
  kTest = 2,
  kSynthetic = 3,
  kSyntheticShifted = 4,
};

/// Generator for item `index` of `stream` under `seed`. Each (seed, stream,
/// index) triple gets its own generator, so per-item draws do not depend on
/// the order items are processed in.
inline Xoshiro256StarStar keyed_generator(std::uint64_t seed, Stream stream,
                                          std::uint64_t index) noexcept {
  SplitMix64 base(seed ^ (static_cast<std::uint64_t>(stream) *
                          0xd1b54a32d192ed03ull));
  const std::uint64_t key = base() ^ (index * 0xd2b74407b1ce6e93ull);
  return Xoshiro256StarStar(key);
}

}  // namespace cpkit
