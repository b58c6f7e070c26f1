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
 * @file collections.hpp
 * @brief Sound collections (labeled groups of event or texture recordings),
 * their JSON manifests, and the no-immediate-repeat uniform sampler.
 *
 * Item indices are 0-based throughout the code base.
 */

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scenesim/audio.hpp"
#include "scenesim/rng.hpp"
#include "scenesim/wav.hpp"

namespace scenesim {

enum class CollectionKind { Event, Texture };

CollectionKind parse_collection_kind(std::string_view name);
std::string_view to_string(CollectionKind kind);

struct SampleEntry {
  std::filesystem::path path;
  std::string session_id;
  /// Loaded audio; shared so copies of a collection do not duplicate samples.
  std::shared_ptr<const AudioClip> clip;

  [[nodiscard]] double duration() const { return clip->duration(); }
};

/// Validated, immutable set of recordings sharing a label and a kind.
class SoundCollection {
 public:
  /// Validates: at least one item, positive durations, identical sample
  /// rates, non-empty session ids for textures. Throws DataError naming the
  /// offending entry. Labels not of the "source-action" form get a warning.
  SoundCollection(std::string label, CollectionKind kind, std::vector<SampleEntry> items);

  [[nodiscard]] const std::string& label() const { return label_; }
  [[nodiscard]] CollectionKind kind() const { return kind_; }
  [[nodiscard]] std::size_t size() const { return items_.size(); }
  [[nodiscard]] const SampleEntry& item(std::size_t i) const { return items_.at(i); }
  [[nodiscard]] std::span<const SampleEntry> items() const { return items_; }
  [[nodiscard]] int sample_rate() const { return items_.front().clip->sample_rate(); }

  /// Item indices recorded in the given session, ascending.
  [[nodiscard]] std::vector<std::size_t> session_items(std::string_view session_id) const;

 private:
  std::string label_;
  CollectionKind kind_;
  std::vector<SampleEntry> items_;
};

/// Builds a collection from in-memory clips (session ids default to "s0").
SoundCollection make_collection(std::string label, CollectionKind kind, std::vector<AudioClip> clips,
                                std::vector<std::string> session_ids = {});

/// Loads a collection manifest:
///   {"schema_version": 1, "label": "door-knock", "kind": "event",
///    "items": [{"path": "knock1.wav", "session_id": "a"}, ...]}
/// Relative item paths resolve against the manifest's directory.
SoundCollection load_collection(const std::filesystem::path& manifest_path,
                                ChannelPolicy channels = ChannelPolicy::Reject);

using CollectionSet = std::map<std::string, SoundCollection, std::less<>>;

/// Loads every *.json manifest in a directory, keyed by label. Duplicate
/// labels are a DataError.
CollectionSet load_collections_dir(const std::filesystem::path& dir,
                                   ChannelPolicy channels = ChannelPolicy::Reject);

/// Writes a manifest listing every *.wav file in `audio_dir` (sorted by file
/// name) with one shared session id. Returns the manifest path.
std::filesystem::path write_manifest_for_directory(const std::filesystem::path& audio_dir,
                                                   const std::string& label, CollectionKind kind,
                                                   const std::filesystem::path& manifest_path,
                                                   const std::string& session_id = "s0");

/// Per-track sampler memory. Never share one between tracks.
struct DrawState {
  std::optional<std::size_t> last_index;
  bool warned_singleton = false;
};

/// Uniform draw over the collection excluding the previously drawn item.
/// Singleton collections legally repeat (one warning per state).
std::size_t draw_index(const SoundCollection& collection, DrawState& state, Rng& rng);

/// Same rule restricted to a candidate subset of item indices.
std::size_t draw_index_from(std::span<const std::size_t> candidates, DrawState& state, Rng& rng,
                            std::string_view label = {});

struct SequencingViolation {
  std::size_t position;  ///< 0-based position of the repeated entry
  std::size_t item;
};

/// Adjacent equal indices in a texture plan. An empty result means the plan
/// is valid. Throws std::invalid_argument for an empty plan.
std::vector<SequencingViolation> validate_texture_sequencing(std::span<const std::size_t> plan,
                                                             const SoundCollection& collection);

}  // namespace scenesim
