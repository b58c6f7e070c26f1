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

// Synthetic fixtures shared by the test binaries. Test-side randomness uses
// std::mt19937_64 and <random> distributions, independent of the library RNG.

#pragma once

#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "scenesim/audio.hpp"
#include "scenesim/collections.hpp"
#include "scenesim/hashing.hpp"
#include "scenesim/wav.hpp"

namespace testsupport {

namespace fs = std::filesystem;
using scenesim::AudioClip;
using scenesim::CollectionKind;

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("scenesim_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  [[nodiscard]] const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

inline AudioClip constant_clip(double value, std::size_t n, int rate = 8000) {
  return AudioClip(std::vector<double>(n, value), rate);
}

/// Gaussian noise scaled to the requested RMS exactly.
inline AudioClip noise_clip(std::mt19937_64& gen, double seconds, int rate, double target_rms = 0.1) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const auto n = static_cast<std::size_t>(std::llround(seconds * rate));
  std::vector<double> x(n);
  double ss = 0.0;
  for (auto& v : x) {
    v = nd(gen);
    ss += v * v;
  }
  const double scale = target_rms / std::sqrt(ss / static_cast<double>(n));
  for (auto& v : x) {
    v *= scale;
  }
  return AudioClip(std::move(x), rate);
}

inline AudioClip sine_clip(double freq, double seconds, int rate, double amplitude = 1.0) {
  const auto n = static_cast<std::size_t>(std::llround(seconds * rate));
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = amplitude * std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) / rate);
  }
  return AudioClip(std::move(x), rate);
}

/// Event collection of `count` noise bursts with durations in [min_s, max_s].
inline std::vector<AudioClip> event_clips(std::uint64_t seed, std::size_t count, int rate,
                                          double min_s = 0.3, double max_s = 0.8) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dur(min_s, max_s);
  std::uniform_real_distribution<double> level(0.02, 0.3);
  std::vector<AudioClip> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double d = dur(gen);
    out.push_back(noise_clip(gen, d, rate, level(gen)));
  }
  return out;
}

inline std::vector<AudioClip> texture_clips(std::uint64_t seed, std::size_t count, int rate,
                                            double seconds = 4.0) {
  std::mt19937_64 gen(seed);
  std::vector<AudioClip> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(noise_clip(gen, seconds, rate, 0.05));
  }
  return out;
}

/// Writes the clips as WAV files plus a manifest into <root>/<label>/ and
/// <root>/<label>.json. Returns the manifest path.
inline fs::path write_collection(const fs::path& root, const std::string& label, CollectionKind kind,
                                 const std::vector<AudioClip>& clips,
                                 scenesim::SampleFormat format = scenesim::SampleFormat::Float32) {
  const fs::path audio_dir = root / "audio" / label;
  fs::create_directories(audio_dir);
  for (std::size_t i = 0; i < clips.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "%03zu.wav", i);
    scenesim::write_audio(audio_dir / name, clips[i], format);
  }
  return scenesim::write_manifest_for_directory(audio_dir, label, kind, root / (label + ".json"));
}

inline std::string file_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testsupport
