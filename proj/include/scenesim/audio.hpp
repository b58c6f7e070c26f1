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

/**
 * @file audio.hpp
 * @brief Sample-level primitives: mono clips, RMS and event-to-background
 * ratio math, gain, fades, equal-power crossfade concatenation and mixing.
 *
 * All processing is done in double precision. Functions are pure: they take
 * clips by const reference and return new clips.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace scenesim {

/// Mono sample buffer at a fixed sample rate. Samples are nominally in
/// [-1, 1] but values outside that range are allowed before normalization.
class AudioClip {
 public:
  AudioClip() = default;
  AudioClip(std::vector<double> samples, int sample_rate);
  /// Silent clip of `length` samples.
  static AudioClip silence(std::size_t length, int sample_rate);

  [[nodiscard]] std::span<const double> samples() const { return samples_; }
  [[nodiscard]] std::size_t size() const { return samples_.size(); }
  [[nodiscard]] bool empty() const { return samples_.empty(); }
  [[nodiscard]] int sample_rate() const { return sample_rate_; }
  [[nodiscard]] double duration() const {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }
  double operator[](std::size_t i) const { return samples_[i]; }

  /// Samples [start, start + length), clamped to the clip end.
  [[nodiscard]] AudioClip slice(std::size_t start, std::size_t length) const;
  /// Copy scaled by a linear factor.
  [[nodiscard]] AudioClip scaled(double factor) const;

  std::vector<double> release() && { return std::move(samples_); }

  friend bool operator==(const AudioClip&, const AudioClip&) = default;

 private:
  std::vector<double> samples_;
  int sample_rate_ = 44100;
};

/// Number of samples closest to `seconds` at `sample_rate` (round half away
/// from zero). Negative durations are rejected.
std::size_t seconds_to_samples(double seconds, int sample_rate);

/// Level or level ratio in decibels.
struct GainDb {
  double value = 0.0;

  GainDb() = default;
  explicit GainDb(double db);

  /// 10^(value / 20).
  [[nodiscard]] double linear() const { return std::pow(10.0, value / 20.0); }

  friend auto operator<=>(const GainDb&, const GainDb&) = default;
};

/// Root mean square over samples [start, start + length).
/// Throws std::invalid_argument when length == 0 and std::out_of_range when
/// the window leaves the clip.
double rms(const AudioClip& clip, std::size_t start, std::size_t length);
/// RMS over the whole clip.
double rms(const AudioClip& clip);

/// Event-to-background ratio 20 log10(event_rms / background_rms).
/// Both levels must be strictly positive (std::invalid_argument otherwise).
GainDb ebr_db(double event_rms, double background_rms);

/// Linear factor g such that ebr_db(g * clip_rms, background_rms) == target.
double gain_for_target_ebr(double clip_rms, double background_rms, GainDb target);

/// Raised-cosine amplitude envelope value for sample k of a fade of
/// `fade_length` samples: 0.5 (1 - cos(pi k / fade_length)).
double fade_envelope(std::size_t k, std::size_t fade_length);

/// Raised-cosine fade-in over `fade_in` seconds and fade-out over `fade_out`
/// seconds. The first and last samples of the faded regions are zero; the
/// interior is untouched.
AudioClip apply_fade(const AudioClip& clip, double fade_in, double fade_out);

/// Weights (outgoing, incoming) = (cos theta, sin theta) for overlap sample k
/// of `overlap_length`, with theta = (pi / 2) (k + 0.5) / overlap_length.
std::pair<double, double> equal_power_weights(std::size_t k, std::size_t overlap_length);

/// Concatenates clips back to back, each joint overlapping by `overlap`
/// seconds with an equal-power crossfade. Output length is
/// sum(lengths) - (n - 1) * overlap_samples.
AudioClip crossfade_concat(std::span<const AudioClip> clips, double overlap);

/// Sample-wise sum of stems, each zero-padded or truncated to `length`.
/// Summation runs left to right in stem order. No normalization is applied.
AudioClip mix(std::span<const AudioClip> stems, std::size_t length);

/// Adds `clip` into `target` starting at sample `offset`; samples that fall
/// past the end of `target` are dropped. Returns the number of samples written.
std::size_t add_into(std::vector<double>& target, const AudioClip& clip, std::size_t offset);

/// Largest absolute sample value (0 for an empty clip).
double peak(const AudioClip& clip);

}  // namespace scenesim
