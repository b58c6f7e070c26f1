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

#include "scenesim/audio.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <string>

namespace scenesim {

AudioClip::AudioClip(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (sample_rate <= 0) {
    throw std::invalid_argument("AudioClip: sample rate must be positive, got " +
                                std::to_string(sample_rate));
  }
}

AudioClip AudioClip::silence(std::size_t length, int sample_rate) {
  return AudioClip(std::vector<double>(length, 0.0), sample_rate);
}

AudioClip AudioClip::slice(std::size_t start, std::size_t length) const {
  const std::size_t begin = std::min(start, samples_.size());
  const std::size_t end = begin + std::min(length, samples_.size() - begin);
  return AudioClip(std::vector<double>(samples_.begin() + static_cast<std::ptrdiff_t>(begin),
                                       samples_.begin() + static_cast<std::ptrdiff_t>(end)),
                   sample_rate_);
}

AudioClip AudioClip::scaled(double factor) const {
  std::vector<double> out(samples_);
  for (double& x : out) {
    x *= factor;
  }
  return AudioClip(std::move(out), sample_rate_);
}

std::size_t seconds_to_samples(double seconds, int sample_rate) {
  if (!(seconds >= 0.0) || !std::isfinite(seconds)) {
    throw std::invalid_argument("seconds_to_samples: invalid duration " + std::to_string(seconds));
  }
  return static_cast<std::size_t>(std::llround(seconds * sample_rate));
}

GainDb::GainDb(double db) : value(db) {
  if (!std::isfinite(db) || !std::isfinite(linear()) || linear() <= 0.0) {
    throw std::invalid_argument("GainDb: value does not map to a finite positive factor: " +
                                std::to_string(db));
  }
}

double rms(const AudioClip& clip, std::size_t start, std::size_t length) {
  if (length == 0) {
    throw std::invalid_argument("rms: empty window");
  }
  if (start > clip.size() || length > clip.size() - start) {
    throw std::out_of_range("rms: window [" + std::to_string(start) + ", " +
                            std::to_string(start + length) + ") exceeds clip of " +
                            std::to_string(clip.size()) + " samples");
  }
  const auto window = clip.samples().subspan(start, length);
  double sum = 0.0;
  for (double x : window) {
    sum += x * x;
  }
  return std::sqrt(sum / static_cast<double>(length));
}

double rms(const AudioClip& clip) { return rms(clip, 0, clip.size()); }

GainDb ebr_db(double event_rms, double background_rms) {
  if (!(event_rms > 0.0) || !(background_rms > 0.0)) {
    throw std::invalid_argument("ebr_db: levels must be positive (event=" +
                                std::to_string(event_rms) +
                                ", background=" + std::to_string(background_rms) + ")");
  }
  return GainDb(20.0 * std::log10(event_rms / background_rms));
}

double gain_for_target_ebr(double clip_rms, double background_rms, GainDb target) {
  if (!(clip_rms > 0.0) || !(background_rms > 0.0)) {
    throw std::invalid_argument("gain_for_target_ebr: levels must be positive (clip=" +
                                std::to_string(clip_rms) +
                                ", background=" + std::to_string(background_rms) + ")");
  }
  return background_rms / clip_rms * target.linear();
}

double fade_envelope(std::size_t k, std::size_t fade_length) {
  if (k >= fade_length) {
    return 1.0;
  }
  const double phase = std::numbers::pi * static_cast<double>(k) / static_cast<double>(fade_length);
  return 0.5 * (1.0 - std::cos(phase));
}

AudioClip apply_fade(const AudioClip& clip, double fade_in, double fade_out) {
  if (fade_in < 0.0 || fade_out < 0.0) {
    throw std::invalid_argument("apply_fade: negative fade duration");
  }
  const std::size_t in_len = seconds_to_samples(fade_in, clip.sample_rate());
  const std::size_t out_len = seconds_to_samples(fade_out, clip.sample_rate());
  if (in_len + out_len > clip.size()) {
    throw std::invalid_argument("apply_fade: fades (" + std::to_string(fade_in) + " s + " +
                                std::to_string(fade_out) + " s) exceed clip duration " +
                                std::to_string(clip.duration()) + " s");
  }
  std::vector<double> out(clip.samples().begin(), clip.samples().end());
  for (std::size_t k = 0; k < in_len; ++k) {
    out[k] *= fade_envelope(k, in_len);
  }
  const std::size_t n = out.size();
  for (std::size_t k = 0; k < out_len; ++k) {
    out[n - 1 - k] *= fade_envelope(k, out_len);
  }
  return AudioClip(std::move(out), clip.sample_rate());
}

std::pair<double, double> equal_power_weights(std::size_t k, std::size_t overlap_length) {
  const double theta = 0.5 * std::numbers::pi * (static_cast<double>(k) + 0.5) /
                       static_cast<double>(overlap_length);
  return {std::cos(theta), std::sin(theta)};
}

AudioClip crossfade_concat(std::span<const AudioClip> clips, double overlap) {
  if (clips.empty()) {
    throw std::invalid_argument("crossfade_concat: no clips");
  }
  const int rate = clips.front().sample_rate();
  const std::size_t overlap_len = seconds_to_samples(overlap, rate);
  std::size_t total = 0;
  for (std::size_t i = 0; i < clips.size(); ++i) {
    if (clips[i].sample_rate() != rate) {
      throw std::invalid_argument("crossfade_concat: mixed sample rates (" + std::to_string(rate) +
                                  " vs " + std::to_string(clips[i].sample_rate()) + ")");
    }
    if (clips.size() > 1 && clips[i].size() <= overlap_len) {
      throw std::invalid_argument("crossfade_concat: clip " + std::to_string(i) + " (" +
                                  std::to_string(clips[i].duration()) +
                                  " s) is not longer than the overlap " + std::to_string(overlap) + " s");
    }
    total += clips[i].size();
  }
  if (clips.size() == 1) {
    return clips.front();
  }
  total -= (clips.size() - 1) * overlap_len;

  std::vector<double> out;
  out.reserve(total);
  const auto first = clips.front().samples();
  out.assign(first.begin(), first.end());
  for (std::size_t i = 1; i < clips.size(); ++i) {
    const auto next = clips[i].samples();
    const std::size_t joint = out.size() - overlap_len;
    for (std::size_t k = 0; k < overlap_len; ++k) {
      const auto [w_out, w_in] = equal_power_weights(k, overlap_len);
      out[joint + k] = w_out * out[joint + k] + w_in * next[k];
    }
    out.insert(out.end(), next.begin() + static_cast<std::ptrdiff_t>(overlap_len), next.end());
  }
  return AudioClip(std::move(out), rate);
}

AudioClip mix(std::span<const AudioClip> stems, std::size_t length) {
  if (stems.empty()) {
    throw std::invalid_argument("mix: no stems");
  }
  const int rate = stems.front().sample_rate();
  std::vector<double> out(length, 0.0);
  for (const AudioClip& stem : stems) {
    if (stem.sample_rate() != rate) {
      throw std::invalid_argument("mix: mixed sample rates (" + std::to_string(rate) + " vs " +
                                  std::to_string(stem.sample_rate()) + ")");
    }
    add_into(out, stem, 0);
  }
  return AudioClip(std::move(out), rate);
}

std::size_t add_into(std::vector<double>& target, const AudioClip& clip, std::size_t offset) {
  if (offset >= target.size()) {
    return 0;
  }
  const std::size_t n = std::min(clip.size(), target.size() - offset);
  const auto src = clip.samples();
  for (std::size_t k = 0; k < n; ++k) {
    target[offset + k] += src[k];
  }
  return n;
}

double peak(const AudioClip& clip) {
  double p = 0.0;
  for (double x : clip.samples()) {
    p = std::max(p, std::abs(x));
  }
  return p;
}

}  // namespace scenesim
