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

#include "scenesim/sequencer.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "scenesim/errors.hpp"
#include "scenesim/log.hpp"
#include "scenesim/scene_io.hpp"

namespace scenesim {

namespace {

std::string track_context(const TrackSpec& t) {
  return "track '" + t.stem_name() + "'";
}

/// Raised-cosine fade with both ramps capped at half the clip.
AudioClip fade_clamped(const AudioClip& clip, double fade) {
  const std::size_t half = clip.size() / 2;
  const double max_fade = static_cast<double>(half) / clip.sample_rate();
  const double f = std::min(fade, max_fade);
  if (f <= 0.0) {
    return clip;
  }
  return apply_fade(clip, f, f);
}

const SoundCollection& resolve(const CollectionSet& collections, const TrackSpec& t) {
  const auto it = collections.find(t.collection_label);
  if (it == collections.end()) {
    throw ConfigError(track_context(t) + ": unknown collection label '" + t.collection_label + "'");
  }
  return it->second;
}

}  // namespace

double limited_duration(double duration, const DurationLimit& limit) {
  if (duration - limit.mean - limit.std > limit.margin) {
    return limit.mean + limit.std + limit.margin;
  }
  return duration;
}

void TrackSpec::validate() const {
  const auto fail = [&](const std::string& why) { return ConfigError(track_context(*this) + ": " + why); };
  if (collection_label.empty()) {
    throw fail("missing collection label");
  }
  if (!(start_time >= 0.0) || !(end_time > start_time)) {
    throw fail("need 0 <= start_time < end_time");
  }
  if (!(ebr_std >= 0.0) || !(interval_std >= 0.0)) {
    throw fail("standard deviations must be non-negative");
  }
  if (!std::isfinite(ebr_mean)) {
    throw fail("ebr_mean must be finite");
  }
  if (kind == CollectionKind::Texture && ebr_std != 0.0) {
    throw fail("texture tracks draw their gain once; ebr_std must be 0");
  }
  if (kind == CollectionKind::Event && !(interval_mean > 0.0)) {
    throw fail("event tracks need interval_mean > 0");
  }
  if (duration_limit && (duration_limit->std < 0.0 || duration_limit->margin < 0.0)) {
    throw fail("duration limit needs std >= 0 and margin >= 0");
  }
}

std::size_t SceneSpec::length_samples() const { return seconds_to_samples(duration, sample_rate); }

void SceneSpec::validate() const {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw ConfigError("scene duration must be positive");
  }
  if (sample_rate <= 0) {
    throw ConfigError("scene sample rate must be positive");
  }
  if (tracks.empty()) {
    throw ConfigError("scene has no tracks");
  }
  if (event_fade < 0.0 || texture_overlap < 0.0 || track_fade < 0.0) {
    throw ConfigError("fade and overlap durations must be non-negative");
  }
  std::set<std::string, std::less<>> names;
  bool has_events = false;
  for (const TrackSpec& t : tracks) {
    t.validate();
    if (!names.insert(t.stem_name()).second) {
      throw ConfigError("duplicate track name '" + t.stem_name() + "'");
    }
    has_events = has_events || t.kind == CollectionKind::Event;
  }
  if (!background_ref.empty()) {
    const auto it = std::find_if(tracks.begin(), tracks.end(),
                                 [&](const TrackSpec& t) { return t.stem_name() == background_ref; });
    if (it == tracks.end()) {
      throw ConfigError("background_ref '" + background_ref + "' names no track");
    }
    if (it->kind != CollectionKind::Texture) {
      throw ConfigError("background_ref '" + background_ref + "' must be a texture track");
    }
  } else if (has_events) {
    throw ConfigError("scene has event tracks but no background_ref texture");
  }
}

const Stem& SceneOutput::stem(std::string_view name) const {
  for (const Stem& s : stems) {
    if (s.name == name) {
      return s;
    }
  }
  throw std::out_of_range("no stem named '" + std::string(name) + "'");
}

std::optional<EventAnnotation> place_event(std::vector<double>& stem, const AudioClip& clip,
                                           std::size_t onset_sample, GainDb target,
                                           double background_rms, double fade) {
  if (!(background_rms > 0.0)) {
    throw std::invalid_argument("place_event: background RMS must be positive");
  }
  if (onset_sample >= stem.size()) {
    return std::nullopt;
  }
  const AudioClip piece = fade_clamped(clip.slice(0, stem.size() - onset_sample), fade);
  const double piece_rms = rms(piece);
  if (!(piece_rms > 0.0)) {
    throw DataError("place_event: clip is silent over its placed window");
  }
  const double gain = gain_for_target_ebr(piece_rms, background_rms, target);
  add_into(stem, piece.scaled(gain), onset_sample);

  const double rate = clip.sample_rate();
  EventAnnotation a;
  a.onset = static_cast<double>(onset_sample) / rate;
  a.offset = static_cast<double>(onset_sample + piece.size()) / rate;
  a.ebr = target.value;
  return a;
}

TrackRender generate_event_track(const TrackSpec& spec, const SoundCollection& collection,
                                 double background_rms, const SceneSpec& scene, Rng& rng) {
  spec.validate();
  if (collection.kind() != CollectionKind::Event) {
    throw ConfigError(track_context(spec) + ": collection '" + collection.label() +
                      "' is not an event collection");
  }
  if (!(background_rms > 0.0)) {
    throw std::invalid_argument(track_context(spec) + ": background RMS must be positive");
  }
  if (collection.sample_rate() != scene.sample_rate) {
    throw ConfigError(track_context(spec) + ": collection sample rate " +
                      std::to_string(collection.sample_rate()) + " differs from scene rate " +
                      std::to_string(scene.sample_rate));
  }

  TrackRender out;
  std::vector<double> stem(scene.length_samples(), 0.0);
  DrawState draws;
  for (double onset = spec.start_time; onset < spec.end_time;
       onset += draw_interval(rng, spec.interval_mean, spec.interval_std)) {
    const std::size_t item = draw_index(collection, draws, rng);
    const GainDb target(draw_normal(rng, spec.ebr_mean, spec.ebr_std));
    const AudioClip& source = *collection.item(item).clip;
    AudioClip clip = source;
    if (spec.duration_limit) {
      const double d = limited_duration(source.duration(), *spec.duration_limit);
      if (d < source.duration()) {
        clip = source.slice(0, seconds_to_samples(d, source.sample_rate()));
      }
    }
    auto placed = place_event(stem, clip, seconds_to_samples(onset, scene.sample_rate), target,
                              background_rms, scene.event_fade);
    if (!placed) {
      break;  // onset past the scene end; later onsets are too
    }
    placed->label = collection.label();
    placed->track = spec.stem_name();
    out.annotations.push_back(std::move(*placed));
    out.items.push_back(item);
  }
  out.stem = AudioClip(std::move(stem), scene.sample_rate);
  return out;
}

TrackRender generate_texture_track(const TrackSpec& spec, const SoundCollection& collection,
                                   const SceneSpec& scene, Rng& rng,
                                   std::optional<double> background_rms) {
  spec.validate();
  if (collection.kind() != CollectionKind::Texture) {
    throw ConfigError(track_context(spec) + ": collection '" + collection.label() +
                      "' is not a texture collection");
  }
  if (collection.sample_rate() != scene.sample_rate) {
    throw ConfigError(track_context(spec) + ": collection sample rate " +
                      std::to_string(collection.sample_rate()) + " differs from scene rate " +
                      std::to_string(scene.sample_rate));
  }
  const std::size_t scene_len = scene.length_samples();
  const std::size_t start = std::min(seconds_to_samples(spec.start_time, scene.sample_rate), scene_len);
  const std::size_t end = std::min(seconds_to_samples(spec.end_time, scene.sample_rate), scene_len);

  TrackRender out;
  std::vector<double> stem(scene_len, 0.0);
  if (end <= start) {
    out.stem = AudioClip(std::move(stem), scene.sample_rate);
    return out;
  }
  const std::size_t span = end - start;
  const std::size_t overlap = seconds_to_samples(scene.texture_overlap, scene.sample_rate);

  // Draw clips until the crossfaded chain covers the span. After the first
  // draw, stay within its recording session when that session offers at
  // least two items, so the no-repeat rule can hold.
  DrawState draws;
  std::vector<std::size_t> pool(collection.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    pool[i] = i;
  }
  std::vector<AudioClip> clips;
  std::size_t covered = 0;
  while (covered < span) {
    const std::size_t item = draw_index_from(pool, draws, rng, collection.label());
    if (out.items.empty()) {
      auto session = collection.session_items(collection.item(item).session_id);
      if (session.size() >= 2) {
        pool = std::move(session);
      }
    }
    const AudioClip& clip = *collection.item(item).clip;
    covered = out.items.empty() ? clip.size() : covered + clip.size() - overlap;
    out.items.push_back(item);
    clips.push_back(clip);
  }

  if (clips.size() > 1) {
    for (std::size_t k = 0; k < clips.size(); ++k) {
      if (clips[k].size() <= overlap) {
        throw DataError(track_context(spec) + ": texture item '" +
                        collection.item(out.items[k]).path.string() +
                        "' is not longer than the crossfade overlap");
      }
    }
  }
  AudioClip bed = crossfade_concat(clips, scene.texture_overlap).slice(0, span);
  bed = fade_clamped(bed, scene.track_fade);

  out.gain_db = draw_normal(rng, spec.ebr_mean, 0.0);
  double gain = GainDb(out.gain_db).linear();
  if (background_rms) {
    const double bed_rms = rms(bed);
    if (!(bed_rms > 0.0)) {
      throw DataError(track_context(spec) + ": texture is silent");
    }
    gain = gain_for_target_ebr(bed_rms, *background_rms, GainDb(out.gain_db));
  }
  add_into(stem, bed.scaled(gain), start);
  out.stem = AudioClip(std::move(stem), scene.sample_rate);
  return out;
}

void finalize_mix(SceneOutput& out, std::size_t length, bool normalize_on_clip) {
  if (out.stems.empty()) {
    throw std::invalid_argument("finalize_mix: no stems");
  }
  std::vector<AudioClip> audio;
  audio.reserve(out.stems.size());
  for (const Stem& s : out.stems) {
    audio.push_back(s.audio);
  }
  out.mix = mix(audio, length);
  out.metadata.global_scale.reset();
  const double p = peak(out.mix);
  if (p > 1.0) {
    if (normalize_on_clip) {
      const double scale = 1.0 / p;
      out.mix = out.mix.scaled(scale);
      out.metadata.global_scale = scale;
      log().info("mix peaked at {:.4f}; scaled by {:.6f}", p, scale);
    } else {
      log().warn("mix peaks at {:.4f} (> 1); left unscaled", p);
    }
  }
}

SceneOutput render_scene(const SceneSpec& spec, const CollectionSet& collections,
                         std::uint64_t seed) {
  spec.validate();
  for (const TrackSpec& t : spec.tracks) {
    const SoundCollection& c = resolve(collections, t);
    if (c.kind() != t.kind) {
      throw ConfigError(track_context(t) + ": track kind " + std::string(to_string(t.kind)) +
                        " does not match collection kind " + std::string(to_string(c.kind())));
    }
    if (c.sample_rate() != spec.sample_rate) {
      throw ConfigError(track_context(t) + ": collection '" + c.label() + "' has sample rate " +
                        std::to_string(c.sample_rate()) + ", scene expects " +
                        std::to_string(spec.sample_rate));
    }
  }

  const std::size_t n_tracks = spec.tracks.size();
  std::vector<TrackRender> renders(n_tracks);
  std::optional<double> background_rms;
  std::optional<std::size_t> background_index;
  if (!spec.background_ref.empty()) {
    for (std::size_t i = 0; i < n_tracks; ++i) {
      if (spec.tracks[i].stem_name() == spec.background_ref) {
        background_index = i;
      }
    }
    const TrackSpec& bg = spec.tracks[*background_index];
    Rng rng(derive_seed(seed, {*background_index}));
    renders[*background_index] = generate_texture_track(bg, resolve(collections, bg), spec, rng);
    const double level = rms(renders[*background_index].stem);
    if (!(level > 0.0)) {
      throw DataError("background track '" + spec.background_ref + "' is silent");
    }
    background_rms = level;
  }

  for (std::size_t i = 0; i < n_tracks; ++i) {
    if (i == background_index) {
      continue;
    }
    const TrackSpec& t = spec.tracks[i];
    Rng rng(derive_seed(seed, {i}));
    if (t.kind == CollectionKind::Event) {
      renders[i] = generate_event_track(t, resolve(collections, t), *background_rms, spec, rng);
    } else {
      renders[i] = generate_texture_track(t, resolve(collections, t), spec, rng, background_rms);
    }
  }

  SceneOutput out;
  out.metadata.seed = seed;
  out.metadata.spec_hash = spec_hash(spec, seed);
  out.metadata.background_stem = spec.background_ref;
  out.metadata.background_rms = background_rms.value_or(0.0);
  for (std::size_t i = 0; i < n_tracks; ++i) {
    const TrackSpec& t = spec.tracks[i];
    out.annotations.insert(out.annotations.end(), renders[i].annotations.begin(),
                           renders[i].annotations.end());
    out.stems.push_back(Stem{t.stem_name(), t.collection_label, t.kind, std::move(renders[i].stem),
                             std::move(renders[i].items)});
  }
  sort_by_onset(out.annotations);
  finalize_mix(out, spec.length_samples(), spec.normalize_on_clip);
  return out;
}

}  // namespace scenesim
