// Copyright 2026 The ssdrbm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SSDRBM_RNG_HPP
#define SSDRBM_RNG_HPP

#include <cstdint>
#include <limits>

namespace ssdrbm {

/// SplitMix64 bit generator. Satisfies UniformRandomBitGenerator so it can
/// drive the standard <random> distributions. Construction is free, which
/// makes it suitable for one-generator-per-chain substreams.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

/// Hash two words into one (SplitMix64 finaliser over a combined word).
std::uint64_t mix64(std::uint64_t a, std::uint64_t b) noexcept;

/// Counter-based random stream.
///
/// Every sampling call draws one key from the stream; chain i of that call
/// uses the generator substream(key, i). Chains therefore never share a
/// generator, and results do not depend on the order in which chains are
/// processed. Two streams with the same seed and counter produce identical
/// output.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) noexcept : seed_(seed) {}

  /// Independent stream derived from this one's seed and a tag. Does not
  /// advance this stream.
  RngStream fork(std::uint64_t tag) const noexcept;

  /// Returns the key for the next sampling call and advances the counter.
  std::uint64_t next_key() noexcept;

  /// Generator for a single consumer (the next key, substream 0).
  SplitMix64 next_engine() noexcept { return substream(next_key(), 0); }

  static SplitMix64 substream(std::uint64_t key, std::uint64_t index) noexcept {
    return SplitMix64(mix64(key, index));
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// Tags for purpose-specific forks so unrelated consumers never overlap.
namespace stream_tag {
inline constexpr std::uint64_t kInit = 0x696e6974;
inline constexpr std::uint64_t kTrain = 0x74726e;
inline constexpr std::uint64_t kShuffle = 0x736866;
inline constexpr std::uint64_t kEvalTrain = 0x65747231;
inline constexpr std::uint64_t kEvalTest = 0x65747332;
inline constexpr std::uint64_t kTruth = 0x7472757468;
inline constexpr std::uint64_t kSynthTrain = 0x73796e31;
inline constexpr std::uint64_t kSynthTest = 0x73796e32;
inline constexpr std::uint64_t kBinarize = 0x62696e;
}  // namespace stream_tag

}  // namespace ssdrbm

#endif  // SSDRBM_RNG_HPP
