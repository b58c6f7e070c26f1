// Copyright 2026 The scenesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace scenesim {

/// Mixes a base seed with stream identifiers (track index, couple index, ...)
/// into an independent 64-bit seed. Pure function; used to give every track
/// and every corpus scene its own schedule-independent stream.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> stream_ids);

/// Seeded generator. The engine is std::mt19937_64, whose output sequence is
/// fixed by the standard; the distribution transforms are implemented here
/// rather than taken from <random>, whose distributions are
/// implementation-defined and would break cross-toolchain reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform01();

  /// Uniform integer in [0, n). Unbiased (rejection). n must be > 0.
  std::size_t uniform_index(std::size_t n);

  /// Standard normal via the Box-Muller transform.
  double standard_normal();

 private:
  std::mt19937_64 engine_;
};

/// Gaussian draw with the given mean and standard deviation. std == 0 returns
/// mean exactly. Throws std::invalid_argument for std < 0.
double draw_normal(Rng& rng, double mean, double std);

/// Smallest admissible inter-onset interval, in seconds.
inline constexpr double kMinInterval = 1e-3;
inline constexpr int kMaxIntervalRedraws = 1000;

/// Inter-onset interval draw: Normal(mean, std) redrawn until the value is
/// strictly greater than kMinInterval. Throws ConfigError after
/// kMaxIntervalRedraws failed attempts.
double draw_interval(Rng& rng, double mean, double std);

}  // namespace scenesim
