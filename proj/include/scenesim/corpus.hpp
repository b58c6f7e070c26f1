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
 * @file corpus.hpp
 * @brief Corpus construction from an annotated reference corpus.
 *
 * Two processes are provided. The instance process keeps every reference
 * onset and event-to-background ratio and swaps in a random recording of the
 * same class. The abstract process estimates per-class Gaussian parameters
 * (level, inter-onset interval, duration) from each reference couple and
 * renders new structure from them.
 *
 * A reference directory holds one "couple" (a recording paired with one
 * annotation) per annotation text file:
 *
 *   <id>.txt    required, onset<TAB>offset<TAB>label
 *   <id>.json   optional sidecar: events with "ebr", "duration",
 *               "background_window": [start, end]
 *   <id>.wav    optional audio, needed only to estimate EBRs
 *
 * A rendered scene directory (annotation.txt, annotation.json, mix.wav) is
 * also accepted as a couple, with the directory path as its id.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "scenesim/annotation.hpp"
#include "scenesim/audio.hpp"
#include "scenesim/collections.hpp"
#include "scenesim/sequencer.hpp"
#include "scenesim/wav.hpp"

namespace scenesim {

struct ReferenceScene {
  std::string id;
  std::optional<AudioClip> audio;
  std::vector<EventAnnotation> annotations;  ///< sorted by onset; ebr may be unset
  std::optional<std::pair<double, double>> background_window;  ///< event-free span, s
  double duration = 0.0;
};

/// Loads one couple from its annotation text file (see file comment).
ReferenceScene load_reference_scene(const std::filesystem::path& annotation_path,
                                    const std::filesystem::path& root = {});
/// Loads every couple under `dir` (recursively), sorted by id.
std::vector<ReferenceScene> load_reference_dir(const std::filesystem::path& dir);

/// EBR of one annotated event estimated from the reference audio: RMS over
/// [onset, offset] against the RMS of the event-free background window. The
/// event window still contains background, so this is an approximation.
GainDb estimate_event_ebr(const ReferenceScene& scene, const EventAnnotation& annotation);

/// Fills unset annotation EBRs from the audio. Throws DataError when EBRs are
/// missing and cannot be estimated.
void fill_reference_ebrs(ReferenceScene& scene);

/// Instance process trimming: a recording is cut to the annotation length
/// when it is longer than the annotation by at least this much.
inline constexpr double kInstanceTrimMargin = 0.5;
/// Slack on the trimming comparison for annotation times printed with 6 decimals.
inline constexpr double kTrimSlack = 1e-9;
bool should_trim_to_annotation(double clip_duration, double annotation_duration);

/// Abstract process duration threshold (seconds above mean + std).
inline constexpr double kAbstractDurationMargin = 5.0;
/// Duration a clip of `duration` seconds is cut to for a class with duration
/// statistics (mean, std): mean + std + 5 when duration - mean - std > 5.
double abstract_clip_duration(double duration, double mean, double std);

/// Rendering settings shared by both processes.
struct SimulationOptions {
  std::string background_label;   ///< texture collection for the background bed
  double background_gain_db = 0.0;
  double event_fade = 0.005;
  double texture_overlap = 1.0;
  double track_fade = 0.005;
  bool normalize_on_clip = false;

  friend bool operator==(const SimulationOptions&, const SimulationOptions&) = default;
};

nlohmann::json to_json(const SimulationOptions& options);

/// Instance process for one couple: background regenerated from the
/// background collection, then every reference event replaced by a random
/// same-class recording at the reference onset, scaled to the reference EBR
/// plus `ebr_offset`. One stem per class plus "background".
SceneOutput build_instance_scene(const ReferenceScene& ref, const CollectionSet& collections,
                                 double ebr_offset, std::uint64_t seed,
                                 const SimulationOptions& options);

struct ClassParams {
  std::string label;
  double ebr_mean = 0.0;
  double ebr_std = 0.0;
  double interval_mean = 0.0;
  double interval_std = 0.0;
  double duration_mean = 0.0;
  double duration_std = 0.0;
  double start_time = 0.0;  ///< first onset of the class
  double end_time = 0.0;    ///< last offset of the class
  std::size_t count = 0;
  bool degenerate = false;  ///< single event: standard deviations forced to 0
};

struct CoupleParams {
  std::string id;
  double duration = 0.0;
  std::vector<ClassParams> classes;  ///< sorted by label
};

/// Sample mean and unbiased standard deviation (0 for fewer than 2 values).
std::pair<double, double> mean_and_std(std::span<const double> values);

/// Per-class parameter estimates for one couple. Intervals are differences
/// between consecutive onsets of the same class.
CoupleParams estimate_class_params(const ReferenceScene& ref);
std::vector<CoupleParams> estimate_class_params(std::span<const ReferenceScene> refs);

nlohmann::json to_json(const CoupleParams& params);
std::string format_params_table(std::span<const CoupleParams> params);

/// Scene specification for the abstract process: the background track plus
/// one event track per class, with `ebr_offset` added to every mean EBR.
SceneSpec abstract_scene_spec(const CoupleParams& params, const CollectionSet& collections,
                              double ebr_offset, const SimulationOptions& options);

/// Abstract process for one couple.
SceneOutput build_abstract_scene(const CoupleParams& params, const CollectionSet& collections,
                                 double ebr_offset, std::uint64_t seed,
                                 const SimulationOptions& options);

enum class CorpusMode { Instance, Abstract };
CorpusMode parse_corpus_mode(std::string_view name);
std::string_view to_string(CorpusMode mode);

struct CorpusPlan {
  CorpusMode mode = CorpusMode::Instance;
  std::vector<double> ebr_offsets{0.0};
  int replications = 1;
  std::uint64_t seed = 0;
  SimulationOptions options;
  SampleFormat format = SampleFormat::Float32;
  int jobs = 1;

  void validate() const;
};

struct CorpusSceneRecord {
  double ebr_offset = 0.0;
  std::string couple;
  int replication = 0;
  std::uint64_t seed = 0;
  std::string spec_hash;
  std::string dir;  ///< relative to the corpus root
  std::string mix_sha256;
  std::string annotation_sha256;
  std::size_t events = 0;
};

struct CorpusResult {
  std::vector<CorpusSceneRecord> scenes;
  std::filesystem::path manifest;
};

/// "ebr_+6", "ebr_0", "ebr_-12", "ebr_+2.5".
std::string offset_dir_name(double offset);

/// Fails fast (ConfigError) on anything that would stop a build midway:
/// missing class or background collections (all missing classes listed),
/// wrong collection kinds, unavailable EBRs.
void check_corpus_inputs(const CorpusPlan& plan, std::span<const ReferenceScene> refs,
                         const CollectionSet& collections);

/// Renders couples x replications x offsets scenes into
/// <out>/<offset>/<couple>/<replication>/ and writes <out>/manifest.json.
/// Scene (c, r, o) draws from derive_seed(plan.seed, {c, r, o}), so the output
/// does not depend on plan.jobs.
CorpusResult build_corpus(const CorpusPlan& plan, std::span<const ReferenceScene> refs,
                          const CollectionSet& collections, const std::filesystem::path& out_dir);

}  // namespace scenesim
