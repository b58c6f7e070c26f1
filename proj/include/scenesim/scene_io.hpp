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

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "scenesim/sequencer.hpp"
#include "scenesim/wav.hpp"

namespace scenesim {

// Scene specifications as JSON, and the on-disk layout of a rendered scene:
//
//   <dir>/mix.wav
//   <dir>/stems/<stem>.wav
//   <dir>/annotation.txt     onset<TAB>offset<TAB>label
//   <dir>/annotation.json    sidecar with EBR and track per event
//   <dir>/meta.json          seed, spec hash, scaling, stems, resolved config

nlohmann::json to_json(const TrackSpec& track);
nlohmann::json to_json(const SceneSpec& spec);
/// Throws ConfigError on missing or mistyped fields.
TrackSpec track_spec_from_json(const nlohmann::json& j);
SceneSpec scene_spec_from_json(const nlohmann::json& j);
SceneSpec load_scene_spec(const std::filesystem::path& path);

/// SHA-256 over the canonical JSON of the spec with `seed` substituted.
std::string spec_hash(const SceneSpec& spec, std::uint64_t seed);

struct WrittenScene {
  std::filesystem::path dir;
  std::string mix_sha256;
  std::string annotation_sha256;
};

/// Writes every scene artifact into `dir` (created if needed). `extra_meta`
/// is merged into meta.json under "config".
WrittenScene write_scene(const std::filesystem::path& dir, const SceneOutput& scene,
                         SampleFormat format, const nlohmann::json& extra_meta = nlohmann::json::object());

/// File-system-safe stem file name.
std::string stem_file_name(const std::string& stem_name);

/// Reads a JSON document, mapping parse failures to DataError.
nlohmann::json read_json(const std::filesystem::path& path);
/// Writes `doc` pretty-printed with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace scenesim
