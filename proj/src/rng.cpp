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

#include "scenesim/rng.hpp"

#include "scenesim/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace scenesim {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> stream_ids) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t id : stream_ids) {
    h = splitmix64(h ^ splitmix64(id + 0x632be59bd9b4e019ULL));
  }
  return h;
}

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::uniform_index(std::size_t n) {
  if (n == 0) {
    throw std::invalid_argument("uniform_index: empty range");
  }
  const std::uint64_t range = n;
  // Largest multiple of range representable; values at or above it are rejected.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x = engine_();
  while (x >= limit) {
    x = engine_();
  }
  return static_cast<std::size_t>(x % range);
}

double Rng::standard_normal() {
  // u1 in (0, 1] keeps the logarithm finite.
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double draw_normal(Rng& rng, double mean, double std) {
  if (!(std >= 0.0)) {
    throw std::invalid_argument("draw_normal: negative standard deviation");
  }
  if (std == 0.0) {
    return mean;
  }
  return mean + std * rng.standard_normal();
}

double draw_interval(Rng& rng, double mean, double std) {
  for (int attempt = 0; attempt < kMaxIntervalRedraws; ++attempt) {
    const double value = draw_normal(rng, mean, std);
    if (value > kMinInterval) {
      return value;
    }
  }
  throw ConfigError("draw_interval: no interval above " + std::to_string(kMinInterval) +
                           " s after " + std::to_string(kMaxIntervalRedraws) +
                           " draws (mean=" + std::to_string(mean) + ", std=" + std::to_string(std) + ")");
}

}  // namespace scenesim
