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

#include <filesystem>
#include <string>
#include <string_view>

#include "scenesim/audio.hpp"

namespace scenesim {

// RIFF/WAVE reader and writer. See docs/formats.md for the exact header layout.

enum class SampleFormat { Pcm16, Float32 };

/// What to do with multichannel input.
enum class ChannelPolicy {
  Reject,   ///< FormatError
  Downmix,  ///< arithmetic mean of the channels
};

SampleFormat parse_sample_format(std::string_view name);
std::string_view to_string(SampleFormat format);

/// Reads PCM 8/16/24/32-bit integer or IEEE 32/64-bit float WAVE files
/// (including WAVE_FORMAT_EXTENSIBLE). Throws FormatError for anything else
/// and DataError when the file cannot be opened.
AudioClip read_audio(const std::filesystem::path& path,
                     ChannelPolicy channels = ChannelPolicy::Reject);

/// Writes a mono WAVE file. Pcm16 refuses samples outside [-1, 1]
/// (std::range_error) rather than clipping.
void write_audio(const std::filesystem::path& path, const AudioClip& clip,
                 SampleFormat format = SampleFormat::Float32);

}  // namespace scenesim
