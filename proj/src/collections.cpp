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

#include "scenesim/collections.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <stdexcept>

#include <json.hpp>

#include "scenesim/errors.hpp"
#include "scenesim/log.hpp"

namespace scenesim {

namespace fs = std::filesystem;
using nlohmann::json;

CollectionKind parse_collection_kind(std::string_view name) {
  if (name == "event") {
    return CollectionKind::Event;
  }
  if (name == "texture") {
    return CollectionKind::Texture;
  }
  throw ConfigError("unknown collection kind '" + std::string(name) + "' (expected event or texture)");
}

std::string_view to_string(CollectionKind kind) {
  return kind == CollectionKind::Event ? "event" : "texture";
}

SoundCollection::SoundCollection(std::string label, CollectionKind kind,
                                 std::vector<SampleEntry> items)
    : label_(std::move(label)), kind_(kind), items_(std::move(items)) {
  if (label_.empty()) {
    throw DataError("collection label must not be empty");
  }
  if (items_.empty()) {
    throw DataError("collection '" + label_ + "' has no items");
  }
  const auto where = [&](const SampleEntry& e) {
    return "collection '" + label_ + "', item '" + e.path.string() + "'";
  };
  for (const SampleEntry& e : items_) {
    if (!e.clip) {
      throw DataError(where(e) + ": audio not loaded");
    }
    if (e.clip->empty()) {
      throw DataError(where(e) + ": zero duration");
    }
    if (e.clip->sample_rate() != items_.front().clip->sample_rate()) {
      throw DataError(where(e) + ": sample rate " + std::to_string(e.clip->sample_rate()) +
                      " differs from " + std::to_string(items_.front().clip->sample_rate()));
    }
    if (kind_ == CollectionKind::Texture && e.session_id.empty()) {
      throw DataError(where(e) + ": texture items need a session_id");
    }
  }
  static const std::regex source_action(R"([^-\s]+-[^-\s]+)");
  if (!std::regex_match(label_, source_action)) {
    log().warn("collection label '{}' is not of the form source-action", label_);
  }
}

std::vector<std::size_t> SoundCollection::session_items(std::string_view session_id) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (items_[i].session_id == session_id) {
      out.push_back(i);
    }
  }
  return out;
}

SoundCollection make_collection(std::string label, CollectionKind kind, std::vector<AudioClip> clips,
                                std::vector<std::string> session_ids) {
  std::vector<SampleEntry> items;
  items.reserve(clips.size());
  for (std::size_t i = 0; i < clips.size(); ++i) {
    SampleEntry e;
    e.path = "<memory>/" + std::to_string(i);
    e.session_id = i < session_ids.size() ? session_ids[i] : "s0";
    e.clip = std::make_shared<const AudioClip>(std::move(clips[i]));
    items.push_back(std::move(e));
  }
  return SoundCollection(std::move(label), kind, std::move(items));
}

SoundCollection load_collection(const fs::path& manifest_path, ChannelPolicy channels) {
  std::ifstream in(manifest_path);
  if (!in) {
    throw DataError("cannot open collection manifest " + manifest_path.string());
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(manifest_path.string() + ": " + e.what());
  }
  try {
    const std::string label = doc.at("label").get<std::string>();
    const CollectionKind kind = parse_collection_kind(doc.at("kind").get<std::string>());
    std::vector<SampleEntry> items;
    for (const json& entry : doc.at("items")) {
      SampleEntry e;
      e.path = entry.at("path").get<std::string>();
      if (e.path.is_relative()) {
        e.path = manifest_path.parent_path() / e.path;
      }
      e.session_id = entry.value("session_id", std::string{});
      if (!fs::exists(e.path)) {
        throw DataError(manifest_path.string() + ": missing audio file " + e.path.string());
      }
      e.clip = std::make_shared<const AudioClip>(read_audio(e.path, channels));
      items.push_back(std::move(e));
    }
    return SoundCollection(label, kind, std::move(items));
  } catch (const json::exception& e) {
    throw DataError(manifest_path.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw DataError(manifest_path.string() + ": " + e.what());
  }
}

CollectionSet load_collections_dir(const fs::path& dir, ChannelPolicy channels) {
  if (!fs::is_directory(dir)) {
    throw DataError("collections directory not found: " + dir.string());
  }
  std::vector<fs::path> manifests;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      manifests.push_back(entry.path());
    }
  }
  std::sort(manifests.begin(), manifests.end());
  CollectionSet out;
  for (const fs::path& m : manifests) {
    SoundCollection c = load_collection(m, channels);
    const std::string label = c.label();
    if (!out.emplace(label, std::move(c)).second) {
      throw DataError("duplicate collection label '" + label + "' in " + m.string());
    }
  }
  return out;
}

fs::path write_manifest_for_directory(const fs::path& audio_dir, const std::string& label,
                                      CollectionKind kind, const fs::path& manifest_path,
                                      const std::string& session_id) {
  std::vector<fs::path> wavs;
  for (const auto& entry : fs::directory_iterator(audio_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") {
      wavs.push_back(entry.path());
    }
  }
  if (wavs.empty()) {
    throw DataError("no .wav files in " + audio_dir.string());
  }
  std::sort(wavs.begin(), wavs.end());
  json items = json::array();
  const fs::path base = fs::absolute(manifest_path).parent_path();
  for (const fs::path& w : wavs) {
    items.push_back({{"path", fs::relative(fs::absolute(w), base).generic_string()},
                     {"session_id", session_id}});
  }
  const json doc = {{"schema_version", 1},
                    {"label", label},
                    {"kind", std::string(to_string(kind))},
                    {"items", items}};
  std::ofstream out(manifest_path);
  if (!out) {
    throw DataError("cannot write manifest " + manifest_path.string());
  }
  out << doc.dump(2) << '\n';
  return manifest_path;
}

std::size_t draw_index_from(std::span<const std::size_t> candidates, DrawState& state, Rng& rng,
                            std::string_view label) {
  if (candidates.empty()) {
    throw std::invalid_argument("draw_index: no candidates");
  }
  std::size_t chosen = 0;
  const bool excluded = state.last_index &&
                        std::find(candidates.begin(), candidates.end(), *state.last_index) !=
                            candidates.end();
  if (candidates.size() == 1) {
    chosen = candidates.front();
    if (excluded && !state.warned_singleton) {
      log().warn("collection '{}': only one candidate item, repeating it back to back", label);
      state.warned_singleton = true;
    }
  } else if (!excluded) {
    chosen = candidates[rng.uniform_index(candidates.size())];
  } else {
    std::vector<std::size_t> allowed;
    allowed.reserve(candidates.size() - 1);
    for (std::size_t c : candidates) {
      if (c != *state.last_index) {
        allowed.push_back(c);
      }
    }
    chosen = allowed[rng.uniform_index(allowed.size())];
  }
  state.last_index = chosen;
  return chosen;
}

std::size_t draw_index(const SoundCollection& collection, DrawState& state, Rng& rng) {
  std::vector<std::size_t> all(collection.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    all[i] = i;
  }
  return draw_index_from(all, state, rng, collection.label());
}

std::vector<SequencingViolation> validate_texture_sequencing(std::span<const std::size_t> plan,
                                                             const SoundCollection& collection) {
  if (plan.empty()) {
    throw std::invalid_argument("validate_texture_sequencing: empty plan");
  }
  for (std::size_t idx : plan) {
    if (idx >= collection.size()) {
      throw std::out_of_range("validate_texture_sequencing: item " + std::to_string(idx) +
                              " not in collection '" + collection.label() + "'");
    }
  }
  std::vector<SequencingViolation> out;
  for (std::size_t i = 1; i < plan.size(); ++i) {
    if (plan[i] == plan[i - 1]) {
      out.push_back({i, plan[i]});
    }
  }
  return out;
}

}  // namespace scenesim
