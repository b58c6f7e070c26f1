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
 * @file sequencer.hpp
 * @brief Scene rendering from track specifications.
 *
 * A scene is the sample-wise sum of its tracks. An event track places clips
 * drawn from one collection at onsets produced by a Gaussian inter-onset
 * recursion, each clip scaled to a Gaussian-drawn event-to-background ratio
 * (in dB) against the background texture. A texture track chains clips back
 * to back with equal-power crossfades and applies a single gain.
 *
 * The background texture (SceneSpec::background_ref) is rendered first; its
 * RMS over the whole scene is the reference level for every EBR.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scenesim/annotation.hpp"
#include "scenesim/audio.hpp"
#include "scenesim/collections.hpp"
#include "scenesim/rng.hpp"

namespace scenesim {

/// Clip duration cap used by the abstract corpus process: a clip of duration D
/// is cut to mean + std + margin seconds when D - mean - std > margin.
struct DurationLimit {
  double mean = 0.0;
  double std = 0.0;
  double margin = 5.0;

  friend bool operator==(const DurationLimit&, const DurationLimit&) = default;
};

/// Duration a clip of `duration` seconds is cut to under `limit` (unchanged
/// when the rule does not fire).
double limited_duration(double duration, const DurationLimit& limit);

struct TrackSpec {
  std::string name;  ///< stem name; empty means collection_label
  std::string collection_label;
  CollectionKind kind = CollectionKind::Event;
  double ebr_mean = 0.0;  ///< dB
  double ebr_std = 0.0;   ///< dB; must be 0 for textures
  double interval_mean = 0.0;  ///< s, events only
  double interval_std = 0.0;   ///< s, events only
  double start_time = 0.0;
  double end_time = 0.0;
  std::optional<DurationLimit> duration_limit;

  [[nodiscard]] const std::string& stem_name() const {
    return name.empty() ? collection_label : name;
  }
  /// Throws ConfigError on violated invariants.
  void validate() const;

  friend bool operator==(const TrackSpec&, const TrackSpec&) = default;
};

struct SceneSpec {
  double duration = 0.0;  ///< s
  int sample_rate = 44100;
  std::uint64_t seed = 0;
  std::vector<TrackSpec> tracks;
  /// Stem name of the texture track whose RMS defines the background level.
  std::string background_ref;
  double event_fade = 0.005;      ///< s, raised-cosine in and out per event
  double texture_overlap = 1.0;   ///< s, crossfade length between texture clips
  double track_fade = 0.005;      ///< s, in and out at texture track boundaries
  /// When the mix peaks above 1: scale it by one global factor (recorded in
  /// the metadata) instead of leaving it untouched.
  bool normalize_on_clip = false;

  [[nodiscard]] std::size_t length_samples() const;
  /// Throws ConfigError on violated invariants.
  void validate() const;

  friend bool operator==(const SceneSpec&, const SceneSpec&) = default;
};

/// Output of a single track render.
struct TrackRender {
  AudioClip stem;  ///< scene-length
  std::vector<EventAnnotation> annotations;
  std::vector<std::size_t> items;  ///< collection items in placement order
  double gain_db = 0.0;            ///< textures: the single gain draw
};

struct Stem {
  std::string name;
  std::string collection_label;
  CollectionKind kind = CollectionKind::Event;
  AudioClip audio;
  std::vector<std::size_t> items;
};

struct SceneMetadata {
  std::uint64_t seed = 0;
  std::string spec_hash;
  std::optional<double> global_scale;
  std::string background_stem;
  double background_rms = 0.0;
};

struct SceneOutput {
  AudioClip mix;
  std::vector<Stem> stems;  ///< in track order
  std::vector<EventAnnotation> annotations;  ///< sorted by onset
  SceneMetadata metadata;

  /// Throws std::out_of_range for unknown names.
  [[nodiscard]] const Stem& stem(std::string_view name) const;
};

/// Places one event into a scene-length stem: cuts the clip at the stem end,
/// applies raised-cosine fades (`fade` seconds, shortened to half the placed
/// length for very short clips), scales it so that its RMS over the placed
/// window sits `target` dB relative to `background_rms`, and adds it at
/// `onset_sample`. Returns the realized annotation, or nothing when the onset
/// lies past the end of the stem.
std::optional<EventAnnotation> place_event(std::vector<double>& stem, const AudioClip& clip,
                                           std::size_t onset_sample, GainDb target,
                                           double background_rms, double fade);

/// Event track. Onsets start at spec.start_time and advance by draw_interval
/// while they stay strictly below spec.end_time.
TrackRender generate_event_track(const TrackSpec& spec, const SoundCollection& collection,
                                 double background_rms, const SceneSpec& scene, Rng& rng);

/// Texture track covering [start_time, min(end_time, scene duration)). With
/// `background_rms` set, ebr_mean is an EBR against that level; without it
/// (the background itself), ebr_mean is a plain gain in dB.
TrackRender generate_texture_track(const TrackSpec& spec, const SoundCollection& collection,
                                   const SceneSpec& scene, Rng& rng,
                                   std::optional<double> background_rms = std::nullopt);

/// Renders a full scene. Track i draws from the stream derive_seed(seed, {i}),
/// so the result depends only on (spec, collection contents, seed).
SceneOutput render_scene(const SceneSpec& spec, const CollectionSet& collections,
                         std::uint64_t seed);

/// Sums stems into the mix and applies the clipping policy. Fills
/// metadata.global_scale when a scale factor was applied.
void finalize_mix(SceneOutput& out, std::size_t length, bool normalize_on_clip);

}  // namespace scenesim
