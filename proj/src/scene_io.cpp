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

#include "scenesim/scene_io.hpp"

#include <cctype>
#include <fstream>

#include "scenesim/errors.hpp"
#include "scenesim/hashing.hpp"
#include "scenesim/version.hpp"

namespace scenesim {

namespace fs = std::filesystem;
using nlohmann::json;

json to_json(const TrackSpec& t) {
  json j = {{"collection", t.collection_label},
            {"kind", std::string(to_string(t.kind))},
            {"ebr_mean", t.ebr_mean},
            {"ebr_std", t.ebr_std},
            {"start_time", t.start_time},
            {"end_time", t.end_time}};
  if (!t.name.empty()) {
    j["name"] = t.name;
  }
  if (t.kind == CollectionKind::Event) {
    j["interval_mean"] = t.interval_mean;
    j["interval_std"] = t.interval_std;
  }
  if (t.duration_limit) {
    j["duration_limit"] = {{"mean", t.duration_limit->mean},
                           {"std", t.duration_limit->std},
                           {"margin", t.duration_limit->margin}};
  }
  return j;
}

json to_json(const SceneSpec& s) {
  json tracks = json::array();
  for (const auto& t : s.tracks) {
    tracks.push_back(to_json(t));
  }
  return {{"schema_version", kSchemaVersion},
          {"duration", s.duration},
          {"sample_rate", s.sample_rate},
          {"seed", s.seed},
          {"background_ref", s.background_ref},
          {"event_fade", s.event_fade},
          {"texture_overlap", s.texture_overlap},
          {"track_fade", s.track_fade},
          {"normalize_on_clip", s.normalize_on_clip},
          {"tracks", std::move(tracks)}};
}

TrackSpec track_spec_from_json(const json& j) {
  try {
    TrackSpec t;
    t.collection_label = j.at("collection").get<std::string>();
    t.name = j.value("name", std::string{});
    t.kind = parse_collection_kind(j.value("kind", std::string("event")));
    t.ebr_mean = j.value("ebr_mean", 0.0);
    t.ebr_std = j.value("ebr_std", 0.0);
    t.interval_mean = j.value("interval_mean", 0.0);
    t.interval_std = j.value("interval_std", 0.0);
    t.start_time = j.value("start_time", 0.0);
    t.end_time = j.at("end_time").get<double>();
    if (j.contains("duration_limit")) {
      const json& d = j["duration_limit"];
      t.duration_limit = DurationLimit{d.at("mean").get<double>(), d.at("std").get<double>(),
                                       d.value("margin", 5.0)};
    }
    return t;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("track spec: ") + e.what());
  }
}

SceneSpec scene_spec_from_json(const json& j) {
  try {
    const int version = j.value("schema_version", kSchemaVersion);
    if (version != kSchemaVersion) {
      throw ConfigError("scene spec: unsupported schema_version " + std::to_string(version));
    }
    SceneSpec s;
    s.duration = j.at("duration").get<double>();
    s.sample_rate = j.value("sample_rate", 44100);
    s.seed = j.value("seed", std::uint64_t{0});
    s.background_ref = j.value("background_ref", std::string{});
    s.event_fade = j.value("event_fade", 0.005);
    s.texture_overlap = j.value("texture_overlap", 1.0);
    s.track_fade = j.value("track_fade", 0.005);
    s.normalize_on_clip = j.value("normalize_on_clip", false);
    for (const json& t : j.at("tracks")) {
      s.tracks.push_back(track_spec_from_json(t));
    }
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scene spec: ") + e.what());
  }
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  out << doc.dump(2) << '\n';
}

SceneSpec load_scene_spec(const fs::path& path) {
  const json doc = read_json(path);
  try {
    return scene_spec_from_json(doc);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string spec_hash(const SceneSpec& spec, std::uint64_t seed) {
  SceneSpec copy = spec;
  copy.seed = seed;
  return sha256_hex(to_json(copy).dump());
}

std::string stem_file_name(const std::string& stem_name) {
  std::string out;
  for (char c : stem_name) {
    const auto u = static_cast<unsigned char>(c);
    out.push_back(std::isalnum(u) || c == '-' || c == '_' || c == '.' ? c : '_');
  }
  return out + ".wav";
}

WrittenScene write_scene(const fs::path& dir, const SceneOutput& scene, SampleFormat format,
                         const json& extra_meta) {
  fs::create_directories(dir / "stems");
  write_audio(dir / "mix.wav", scene.mix, format);

  json stems = json::array();
  for (const Stem& s : scene.stems) {
    const std::string file = "stems/" + stem_file_name(s.name);
    write_audio(dir / file, s.audio, format);
    stems.push_back({{"name", s.name},
                     {"collection", s.collection_label},
                     {"kind", std::string(to_string(s.kind))},
                     {"file", file},
                     {"items", s.items}});
  }

  write_annotations(dir / "annotation.txt", scene.annotations);
  AnnotationSidecar sidecar;
  sidecar.events = scene.annotations;
  sidecar.duration = scene.mix.duration();
  write_sidecar(dir / "annotation.json", sidecar);

  json meta = {{"schema_version", kSchemaVersion},
               {"tool", kToolName},
               {"version", kVersion},
               {"seed", scene.metadata.seed},
               {"spec_hash", scene.metadata.spec_hash},
               {"sample_rate", scene.mix.sample_rate()},
               {"sample_format", std::string(to_string(format))},
               {"duration", scene.mix.duration()},
               {"background_stem", scene.metadata.background_stem},
               {"background_rms", scene.metadata.background_rms},
               {"global_scale", scene.metadata.global_scale ? json(*scene.metadata.global_scale) : json(nullptr)},
               {"stems", std::move(stems)},
               {"config", extra_meta}};
  write_json(dir / "meta.json", meta);

  return WrittenScene{dir, sha256_file(dir / "mix.wav"), sha256_file(dir / "annotation.txt")};
}

}  // namespace scenesim
