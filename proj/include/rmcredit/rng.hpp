// Copyright 2026 The rmcredit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Counter-based random streams. Every draw is a pure function of
// (seed, stream id, position), so a Monte-Carlo trial keyed by its index
// produces the same numbers whether it runs serially or on any worker.

#include <array>
#include <cstdint>
#include <limits>

namespace rmcredit {

/// Philox4x32 with 10 rounds (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;
  static Counter generate(Counter counter, Key key) noexcept;
};

/// Stream identifiers are built from a small tag and an index so that
/// independent purposes (trial draws, parameter draws, tie jitter) never
/// share a stream under the same master seed.
enum class StreamTag : std::uint64_t {
  kTrial = 1,
  kParameters = 2,
  kMarket = 3,
  kTies = 4,
  kSample = 5,
};

constexpr std::uint64_t stream_id(StreamTag tag, std::uint64_t index) noexcept {
  return (static_cast<std::uint64_t>(tag) << 56) ^ (index & 0x00FFFFFFFFFFFFFFull);
}

class RandomStream {
 public:
  using result_type = std::uint32_t;

  RandomStream(std::uint64_t seed, std::uint64_t stream) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept;

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() noexcept;
  double normal() noexcept;
  /// Gamma(shape, scale = 1), shape > 0.
  double gamma(double shape) noexcept;
  /// Chi-squared with real degrees of freedom > 0.
  double chi_squared(double dof) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Philox4x32::Counter buffer_{};
  int position_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace rmcredit
