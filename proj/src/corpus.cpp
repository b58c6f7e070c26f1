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

#include "scenesim/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "scenesim/errors.hpp"
#include "scenesim/hashing.hpp"
#include "scenesim/log.hpp"
#include "scenesim/scene_io.hpp"
#include "scenesim/version.hpp"

namespace scenesim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kBackgroundStem = "background";

const SoundCollection& find_collection(const CollectionSet& collections, const std::string& label,
                                       CollectionKind kind) {
  const auto it = collections.find(label);
  if (it == collections.end()) {
    throw ConfigError("no collection labelled '" + label + "'");
  }
  if (it->second.kind() != kind) {
    throw ConfigError("collection '" + label + "' is a " + std::string(to_string(it->second.kind())) +
                      " collection, expected " + std::string(to_string(kind)));
  }
  return it->second;
}

TrackSpec background_track(double duration, const SimulationOptions& options) {
  TrackSpec bg;
  bg.name = kBackgroundStem;
  bg.collection_label = options.background_label;
  bg.kind = CollectionKind::Texture;
  bg.ebr_mean = options.background_gain_db;
  bg.start_time = 0.0;
  bg.end_time = duration;
  return bg;
}

std::set<std::string> reference_classes(std::span<const ReferenceScene> refs) {
  std::set<std::string> out;
  for (const auto& r : refs) {
    for (const auto& a : r.annotations) {
      out.insert(a.label);
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Reference corpus

ReferenceScene load_reference_scene(const fs::path& annotation_path, const fs::path& root) {
  ReferenceScene ref;
  const bool scene_dir = annotation_path.filename() == "annotation.txt";
  const fs::path base = scene_dir ? annotation_path.parent_path() : annotation_path;
  const fs::path sidecar_path = scene_dir ? base / "annotation.json"
                                          : fs::path(annotation_path).replace_extension(".json");
  const fs::path audio_path = scene_dir ? base / "mix.wav"
                                        : fs::path(annotation_path).replace_extension(".wav");

  fs::path id_path = scene_dir ? base : fs::path(annotation_path).replace_extension();
  if (!root.empty()) {
    id_path = fs::relative(id_path, root);
  }
  ref.id = id_path.generic_string();
  if (ref.id.empty() || ref.id == ".") {
    ref.id = base.filename().string();
  }

  std::optional<AnnotationSidecar> sidecar;
  if (fs::exists(sidecar_path)) {
    sidecar = read_sidecar(sidecar_path);
  }
  if (sidecar && !sidecar->events.empty()) {
    ref.annotations = sidecar->events;
  } else {
    ref.annotations = parse_annotations(annotation_path);
  }
  sort_by_onset(ref.annotations);
  if (sidecar) {
    ref.background_window = sidecar->background_window;
  }
  if (fs::exists(audio_path)) {
    ref.audio = read_audio(audio_path, ChannelPolicy::Downmix);
  }

  if (sidecar && sidecar->duration) {
    ref.duration = *sidecar->duration;
  } else if (ref.audio) {
    ref.duration = ref.audio->duration();
  } else {
    for (const auto& a : ref.annotations) {
      ref.duration = std::max(ref.duration, a.offset);
    }
  }
  if (!(ref.duration > 0.0)) {
    throw DataError(annotation_path.string() + ": cannot determine a positive scene duration");
  }
  return ref;
}

std::vector<ReferenceScene> load_reference_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw DataError("reference directory not found: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::vector<ReferenceScene> refs;
  refs.reserve(files.size());
  for (const fs::path& f : files) {
    refs.push_back(load_reference_scene(f, dir));
  }
  std::sort(refs.begin(), refs.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < refs.size(); ++i) {
    if (refs[i].id == refs[i - 1].id) {
      throw DataError("duplicate reference couple id '" + refs[i].id + "'");
    }
  }
  if (refs.empty()) {
    throw DataError("no annotation files (*.txt) under " + dir.string());
  }
  return refs;
}

GainDb estimate_event_ebr(const ReferenceScene& scene, const EventAnnotation& annotation) {
  if (!scene.audio) {
    throw DataError("couple '" + scene.id + "': EBR estimation needs the reference audio");
  }
  if (!scene.background_window) {
    throw DataError("couple '" + scene.id + "': EBR estimation needs an event-free background window");
  }
  const AudioClip& audio = *scene.audio;
  const int rate = audio.sample_rate();
  const auto [bg_start, bg_end] = *scene.background_window;
  if (!(bg_end - bg_start >= 1.0)) {
    throw std::invalid_argument("couple '" + scene.id + "': background window shorter than 1 s");
  }
  const std::size_t b0 = seconds_to_samples(bg_start, rate);
  const std::size_t b1 = std::min(seconds_to_samples(bg_end, rate), audio.size());
  const std::size_t e0 = seconds_to_samples(annotation.onset, rate);
  const std::size_t e1 = std::min(seconds_to_samples(annotation.offset, rate), audio.size());
  if (e1 <= e0) {
    throw std::invalid_argument("couple '" + scene.id + "': empty event window at " +
                                std::to_string(annotation.onset) + " s");
  }
  if (b1 <= b0) {
    throw std::invalid_argument("couple '" + scene.id + "': background window outside the audio");
  }
  return ebr_db(rms(audio, e0, e1 - e0), rms(audio, b0, b1 - b0));
}

void fill_reference_ebrs(ReferenceScene& scene) {
  for (auto& a : scene.annotations) {
    if (!a.ebr) {
      a.ebr = estimate_event_ebr(scene, a).value;
    }
  }
}

// ---------------------------------------------------------------------------
// Instance process

bool should_trim_to_annotation(double clip_duration, double annotation_duration) {
  return clip_duration - annotation_duration >= kInstanceTrimMargin - kTrimSlack;
}

double abstract_clip_duration(double duration, double mean, double std) {
  return limited_duration(duration, DurationLimit{mean, std, kAbstractDurationMargin});
}

json to_json(const SimulationOptions& o) {
  return {{"background_label", o.background_label},
          {"background_gain_db", o.background_gain_db},
          {"event_fade", o.event_fade},
          {"texture_overlap", o.texture_overlap},
          {"track_fade", o.track_fade},
          {"normalize_on_clip", o.normalize_on_clip}};
}

SceneOutput build_instance_scene(const ReferenceScene& ref, const CollectionSet& collections,
                                 double ebr_offset, std::uint64_t seed,
                                 const SimulationOptions& options) {
  const SoundCollection& bg_collection =
      find_collection(collections, options.background_label, CollectionKind::Texture);
  const int rate = bg_collection.sample_rate();

  SceneSpec scene;
  scene.duration = ref.duration;
  scene.sample_rate = rate;
  scene.seed = seed;
  scene.event_fade = options.event_fade;
  scene.texture_overlap = options.texture_overlap;
  scene.track_fade = options.track_fade;
  scene.background_ref = kBackgroundStem;
  scene.tracks.push_back(background_track(ref.duration, options));

  Rng bg_rng(derive_seed(seed, {0}));
  TrackRender bg = generate_texture_track(scene.tracks.front(), bg_collection, scene, bg_rng);
  const double background_rms = rms(bg.stem);
  if (!(background_rms > 0.0)) {
    throw DataError("background collection '" + options.background_label + "' rendered silence");
  }

  // One stem and one sampler memory per class; the no-repeat rule is per class.
  std::map<std::string, std::vector<double>> class_stems;
  std::map<std::string, DrawState> draws;
  std::map<std::string, std::vector<std::size_t>> items;
  Rng rng(derive_seed(seed, {1}));
  const std::size_t length = scene.length_samples();

  SceneOutput out;
  for (const EventAnnotation& a : ref.annotations) {
    if (!a.ebr) {
      throw DataError("couple '" + ref.id + "': event at " + std::to_string(a.onset) +
                      " s has no EBR");
    }
    const SoundCollection& c = find_collection(collections, a.label, CollectionKind::Event);
    if (c.sample_rate() != rate) {
      throw ConfigError("collection '" + c.label() + "' sample rate " + std::to_string(c.sample_rate()) +
                        " differs from background rate " + std::to_string(rate));
    }
    auto& stem = class_stems[a.label];
    if (stem.empty()) {
      stem.assign(length, 0.0);
    }
    const std::size_t item = draw_index(c, draws[a.label], rng);
    const AudioClip& source = *c.item(item).clip;
    const double annotation_duration = a.offset - a.onset;
    AudioClip clip = source;
    if (should_trim_to_annotation(source.duration(), annotation_duration)) {
      clip = source.slice(0, std::max<std::size_t>(1, seconds_to_samples(annotation_duration, rate)));
    }
    auto placed = place_event(stem, clip, seconds_to_samples(a.onset, rate),
                              GainDb(*a.ebr + ebr_offset), background_rms, options.event_fade);
    if (!placed) {
      log().warn("couple '{}': event at {} s starts past the scene end; skipped", ref.id, a.onset);
      continue;
    }
    placed->label = a.label;
    placed->track = a.label;
    out.annotations.push_back(std::move(*placed));
    items[a.label].push_back(item);
  }

  out.metadata.seed = seed;
  out.metadata.background_stem = kBackgroundStem;
  out.metadata.background_rms = background_rms;
  out.stems.push_back(Stem{kBackgroundStem, options.background_label, CollectionKind::Texture,
                           std::move(bg.stem), std::move(bg.items)});
  for (auto& [label, samples] : class_stems) {
    out.stems.push_back(Stem{label, label, CollectionKind::Event, AudioClip(std::move(samples), rate),
                             std::move(items[label])});
  }
  sort_by_onset(out.annotations);
  finalize_mix(out, length, options.normalize_on_clip);

  json provenance = {{"mode", "instance"},
                     {"couple", ref.id},
                     {"ebr_offset", ebr_offset},
                     {"options", to_json(options)},
                     {"reference", format_annotations(ref.annotations)},
                     {"seed", seed}};
  out.metadata.spec_hash = sha256_hex(provenance.dump());
  return out;
}

// ---------------------------------------------------------------------------
// Abstract process

std::pair<double, double> mean_and_std(std::span<const double> values) {
  if (values.empty()) {
    return {0.0, 0.0};
  }
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) {
    return {mean, 0.0};
  }
  double ss = 0.0;
  for (double v : values) {
    ss += (v - mean) * (v - mean);
  }
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

CoupleParams estimate_class_params(const ReferenceScene& ref) {
  std::map<std::string, std::vector<const EventAnnotation*>> by_class;
  for (const auto& a : ref.annotations) {
    by_class[a.label].push_back(&a);
  }
  CoupleParams out;
  out.id = ref.id;
  out.duration = ref.duration;
  for (auto& [label, events] : by_class) {
    std::stable_sort(events.begin(), events.end(),
                     [](const auto* a, const auto* b) { return a->onset < b->onset; });
    std::vector<double> ebrs;
    std::vector<double> intervals;
    std::vector<double> durations;
    ClassParams p;
    p.label = label;
    p.count = events.size();
    p.start_time = events.front()->onset;
    p.end_time = events.front()->offset;
    for (std::size_t i = 0; i < events.size(); ++i) {
      const EventAnnotation& a = *events[i];
      ebrs.push_back(a.ebr ? *a.ebr : estimate_event_ebr(ref, a).value);
      durations.push_back(a.offset - a.onset);
      p.end_time = std::max(p.end_time, a.offset);
      if (i > 0) {
        intervals.push_back(a.onset - events[i - 1]->onset);
      }
    }
    std::tie(p.ebr_mean, p.ebr_std) = mean_and_std(ebrs);
    std::tie(p.duration_mean, p.duration_std) = mean_and_std(durations);
    if (intervals.empty()) {
      // A single event: one onset at start_time, next onset lands on end_time.
      p.interval_mean = std::max(p.end_time - p.start_time, 2.0 * kMinInterval);
      p.interval_std = 0.0;
      p.degenerate = true;
      log().warn("couple '{}', class '{}': single event; standard deviations set to 0", ref.id, label);
    } else {
      std::tie(p.interval_mean, p.interval_std) = mean_and_std(intervals);
    }
    if (!(p.end_time > p.start_time)) {
      p.end_time = p.start_time + p.interval_mean;
    }
    out.classes.push_back(std::move(p));
  }
  return out;
}

std::vector<CoupleParams> estimate_class_params(std::span<const ReferenceScene> refs) {
  std::vector<CoupleParams> out;
  out.reserve(refs.size());
  for (const auto& r : refs) {
    out.push_back(estimate_class_params(r));
  }
  return out;
}

json to_json(const CoupleParams& params) {
  json classes = json::object();
  for (const auto& c : params.classes) {
    classes[c.label] = {{"ebr_mean", c.ebr_mean},
                        {"ebr_std", c.ebr_std},
                        {"interval_mean", c.interval_mean},
                        {"interval_std", c.interval_std},
                        {"duration_mean", c.duration_mean},
                        {"duration_std", c.duration_std},
                        {"start_time", c.start_time},
                        {"end_time", c.end_time},
                        {"count", c.count},
                        {"degenerate", c.degenerate}};
  }
  return {{"id", params.id}, {"duration", params.duration}, {"classes", std::move(classes)}};
}

std::string format_params_table(std::span<const CoupleParams> params) {
  std::string out;
  for (const auto& couple : params) {
    out += fmt::format("couple {} ({:.2f} s)\n", couple.id, couple.duration);
    out += fmt::format("  {:<22} {:>5} {:>9} {:>8} {:>9} {:>8} {:>9} {:>8} {:>9} {:>9}\n", "class",
                       "n", "ebr_mu", "ebr_sd", "ioi_mu", "ioi_sd", "dur_mu", "dur_sd", "start", "end");
    for (const auto& c : couple.classes) {
      out += fmt::format("  {:<22} {:>5} {:>9.3f} {:>8.3f} {:>9.3f} {:>8.3f} {:>9.3f} {:>8.3f} {:>9.3f} {:>9.3f}{}\n",
                         c.label, c.count, c.ebr_mean, c.ebr_std, c.interval_mean, c.interval_std,
                         c.duration_mean, c.duration_std, c.start_time, c.end_time,
                         c.degenerate ? "  (single event)" : "");
    }
  }
  return out;
}

SceneSpec abstract_scene_spec(const CoupleParams& params, const CollectionSet& collections,
                              double ebr_offset, const SimulationOptions& options) {
  const SoundCollection& bg = find_collection(collections, options.background_label,
                                              CollectionKind::Texture);
  SceneSpec scene;
  scene.duration = params.duration;
  scene.sample_rate = bg.sample_rate();
  scene.event_fade = options.event_fade;
  scene.texture_overlap = options.texture_overlap;
  scene.track_fade = options.track_fade;
  scene.normalize_on_clip = options.normalize_on_clip;
  scene.background_ref = kBackgroundStem;
  scene.tracks.push_back(background_track(params.duration, options));
  for (const ClassParams& c : params.classes) {
    TrackSpec t;
    t.collection_label = c.label;
    t.kind = CollectionKind::Event;
    t.ebr_mean = c.ebr_mean + ebr_offset;
    t.ebr_std = c.ebr_std;
    t.interval_mean = c.interval_mean;
    t.interval_std = c.interval_std;
    t.start_time = c.start_time;
    t.end_time = c.end_time;
    t.duration_limit = DurationLimit{c.duration_mean, c.duration_std, kAbstractDurationMargin};
    scene.tracks.push_back(std::move(t));
  }
  return scene;
}

SceneOutput build_abstract_scene(const CoupleParams& params, const CollectionSet& collections,
                                 double ebr_offset, std::uint64_t seed,
                                 const SimulationOptions& options) {
  SceneSpec spec = abstract_scene_spec(params, collections, ebr_offset, options);
  spec.seed = seed;
  return render_scene(spec, collections, seed);
}

// ---------------------------------------------------------------------------
// Corpus

CorpusMode parse_corpus_mode(std::string_view name) {
  if (name == "instance") {
    return CorpusMode::Instance;
  }
  if (name == "abstract") {
    return CorpusMode::Abstract;
  }
  throw ConfigError("unknown corpus mode '" + std::string(name) + "' (expected instance or abstract)");
}

std::string_view to_string(CorpusMode mode) {
  return mode == CorpusMode::Instance ? "instance" : "abstract";
}

void CorpusPlan::validate() const {
  if (replications < 1) {
    throw ConfigError("replications must be at least 1");
  }
  if (ebr_offsets.empty()) {
    throw ConfigError("at least one EBR offset is required");
  }
  std::set<std::string> names;
  for (double o : ebr_offsets) {
    if (!std::isfinite(o)) {
      throw ConfigError("EBR offsets must be finite");
    }
    if (!names.insert(offset_dir_name(o)).second) {
      throw ConfigError("duplicate EBR offset " + offset_dir_name(o));
    }
  }
  if (jobs < 1) {
    throw ConfigError("jobs must be at least 1");
  }
  if (options.background_label.empty()) {
    throw ConfigError("a background collection label is required");
  }
}

std::string offset_dir_name(double offset) {
  if (offset == 0.0) {
    return "ebr_0";
  }
  return fmt::format("ebr_{:+}", offset);
}

void check_corpus_inputs(const CorpusPlan& plan, std::span<const ReferenceScene> refs,
                         const CollectionSet& collections) {
  plan.validate();
  if (refs.empty()) {
    throw ConfigError("no reference couples");
  }
  find_collection(collections, plan.options.background_label, CollectionKind::Texture);
  std::vector<std::string> missing;
  for (const std::string& label : reference_classes(refs)) {
    const auto it = collections.find(label);
    if (it == collections.end()) {
      missing.push_back(label);
    } else if (it->second.kind() != CollectionKind::Event) {
      throw ConfigError("collection '" + label + "' must be an event collection");
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) {
      list += (list.empty() ? "" : ", ") + m;
    }
    throw ConfigError("no collection for reference classes: " + list);
  }
  for (const auto& r : refs) {
    for (const auto& a : r.annotations) {
      if (!a.ebr && (!r.audio || !r.background_window)) {
        throw ConfigError("couple '" + r.id + "': event '" + a.label + "' at " +
                          std::to_string(a.onset) +
                          " s has no EBR and no audio/background window to estimate it");
      }
    }
  }
}

CorpusResult build_corpus(const CorpusPlan& plan, std::span<const ReferenceScene> refs_in,
                          const CollectionSet& collections, const fs::path& out_dir) {
  check_corpus_inputs(plan, refs_in, collections);

  std::vector<ReferenceScene> refs(refs_in.begin(), refs_in.end());
  for (auto& r : refs) {
    fill_reference_ebrs(r);
  }
  std::vector<CoupleParams> params;
  if (plan.mode == CorpusMode::Abstract) {
    params = estimate_class_params(refs);
  }

  struct Task {
    std::size_t couple;
    int replication;
    std::size_t offset;
  };
  std::vector<Task> tasks;
  for (std::size_t o = 0; o < plan.ebr_offsets.size(); ++o) {
    for (std::size_t c = 0; c < refs.size(); ++c) {
      for (int r = 0; r < plan.replications; ++r) {
        tasks.push_back({c, r, o});
      }
    }
  }

  fs::create_directories(out_dir);
  std::vector<CorpusSceneRecord> records(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        const Task& t = tasks[i];
        const double offset = plan.ebr_offsets[t.offset];
        const std::uint64_t seed = derive_seed(
            plan.seed, {t.couple, static_cast<std::uint64_t>(t.replication), t.offset});
        SceneOutput scene =
            plan.mode == CorpusMode::Instance
                ? build_instance_scene(refs[t.couple], collections, offset, seed, plan.options)
                : build_abstract_scene(params[t.couple], collections, offset, seed, plan.options);

        CorpusSceneRecord rec;
        rec.ebr_offset = offset;
        rec.couple = refs[t.couple].id;
        rec.replication = t.replication;
        rec.seed = seed;
        rec.spec_hash = scene.metadata.spec_hash;
        rec.events = scene.annotations.size();
        const fs::path rel =
            fs::path(offset_dir_name(offset)) / rec.couple / fmt::format("{:02d}", t.replication);
        rec.dir = rel.generic_string();
        const json config = {{"mode", std::string(to_string(plan.mode))},
                             {"couple", rec.couple},
                             {"couple_index", t.couple},
                             {"replication", t.replication},
                             {"offset_index", t.offset},
                             {"ebr_offset", offset},
                             {"plan_seed", plan.seed},
                             {"options", to_json(plan.options)}};
        const WrittenScene written = write_scene(out_dir / rel, scene, plan.format, config);
        rec.mix_sha256 = written.mix_sha256;
        rec.annotation_sha256 = written.annotation_sha256;
        records[i] = std::move(rec);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const int threads = std::min<int>(plan.jobs, static_cast<int>(tasks.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int k = 0; k < threads; ++k) {
      pool.emplace_back(worker);
    }
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }

  json scenes = json::array();
  for (const auto& r : records) {
    scenes.push_back({{"ebr_offset", r.ebr_offset},
                      {"couple", r.couple},
                      {"replication", r.replication},
                      {"seed", r.seed},
                      {"spec_hash", r.spec_hash},
                      {"dir", r.dir},
                      {"mix_sha256", r.mix_sha256},
                      {"annotation_sha256", r.annotation_sha256},
                      {"events", r.events}});
  }
  json couples = json::array();
  for (const auto& r : refs) {
    couples.push_back(r.id);
  }
  const json manifest = {{"schema_version", kSchemaVersion},
                         {"tool", kToolName},
                         {"version", kVersion},
                         {"mode", std::string(to_string(plan.mode))},
                         {"seed", plan.seed},
                         {"ebr_offsets", plan.ebr_offsets},
                         {"replications", plan.replications},
                         {"sample_format", std::string(to_string(plan.format))},
                         {"options", to_json(plan.options)},
                         {"couples", std::move(couples)},
                         {"scene_count", records.size()},
                         {"scenes", std::move(scenes)}};
  CorpusResult result;
  result.manifest = out_dir / "manifest.json";
  write_json(result.manifest, manifest);
  result.scenes = std::move(records);
  return result;
}

}  // namespace scenesim
