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

#include "scenesim/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include <fmt/format.h>

#include "scenesim/annotation.hpp"
#include "scenesim/audio.hpp"
#include "scenesim/errors.hpp"
#include "scenesim/scene_io.hpp"
#include "scenesim/version.hpp"
#include "scenesim/wav.hpp"

namespace scenesim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Per-sample quantization allowance of one written value of magnitude |x|.
double quantum(SampleFormat format, double x) {
  if (format == SampleFormat::Pcm16) {
    return 0.5 / 32768.0;
  }
  return std::ldexp(std::abs(x), -24);
}

struct StemFile {
  std::string name;
  CollectionKind kind;
  std::string collection;
  AudioClip audio;
  std::vector<std::size_t> items;
};

bool single_item_pool(const StemFile& s, const AuditOptions& options) {
  if (options.collections != nullptr) {
    const auto it = options.collections->find(s.collection);
    if (it != options.collections->end()) {
      return it->second.size() < 2;
    }
  }
  return std::set<std::size_t>(s.items.begin(), s.items.end()).size() < 2;
}

}  // namespace

double AuditReport::ebr_fraction() const {
  return ebr_checked == 0 ? 1.0 : static_cast<double>(ebr_within) / static_cast<double>(ebr_checked);
}

SceneAudit audit_scene(const fs::path& dir, const AuditOptions& options) {
  const json meta = read_json(dir / "meta.json");
  SceneAudit out;
  out.dir = dir.generic_string();

  SampleFormat format;
  std::vector<StemFile> stems;
  std::string background;
  double scale = 1.0;
  try {
    format = parse_sample_format(meta.at("sample_format").get<std::string>());
    background = meta.value("background_stem", std::string{});
    if (meta.contains("global_scale") && !meta["global_scale"].is_null()) {
      scale = meta["global_scale"].get<double>();
    }
    for (const json& s : meta.at("stems")) {
      stems.push_back(StemFile{s.at("name").get<std::string>(),
                               parse_collection_kind(s.at("kind").get<std::string>()),
                               s.value("collection", std::string{}),
                               read_audio(dir / s.at("file").get<std::string>()),
                               s.value("items", std::vector<std::size_t>{})});
    }
  } catch (const json::exception& e) {
    throw DataError((dir / "meta.json").string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw DataError((dir / "meta.json").string() + ": " + e.what());
  }
  const AudioClip mix = read_audio(dir / "mix.wav");

  // Stem sum.
  for (std::size_t n = 0; n < mix.size(); ++n) {
    double sum = 0.0;
    double allowance = 1e-6 + quantum(format, mix[n]);
    for (const auto& s : stems) {
      const double v = n < s.audio.size() ? s.audio[n] : 0.0;
      sum += v;
      allowance += scale * quantum(format, v);
    }
    const double err = std::abs(mix[n] - scale * sum);
    out.stem_sum_max_error = std::max(out.stem_sum_max_error, err);
    if (n == 0 || err - allowance > out.stem_sum_max_excess) {
      out.stem_sum_max_excess = err - allowance;
    }
  }
  for (const auto& s : stems) {
    if (s.audio.size() != mix.size() || s.audio.sample_rate() != mix.sample_rate()) {
      out.stem_sum_max_excess = std::max(out.stem_sum_max_excess, 1.0);
    }
  }
  out.stem_sum_ok = out.stem_sum_max_excess <= 0.0;

  // EBR realization, on events that do not overlap another event of the same stem.
  const auto bg = std::find_if(stems.begin(), stems.end(),
                               [&](const StemFile& s) { return s.name == background; });
  if (bg != stems.end() && fs::exists(dir / "annotation.json")) {
    const double b_rms = rms(bg->audio);
    std::map<std::string, std::vector<EventAnnotation>> by_track;
    for (auto& e : read_sidecar(dir / "annotation.json").events) {
      if (e.ebr && !e.track.empty()) {
        by_track[e.track].push_back(std::move(e));
      }
    }
    for (auto& [track, events] : by_track) {
      const auto stem = std::find_if(stems.begin(), stems.end(),
                                     [&](const StemFile& s) { return s.name == track; });
      if (stem == stems.end() || b_rms <= 0.0) {
        continue;
      }
      const int rate = stem->audio.sample_rate();
      std::sort(events.begin(), events.end(),
                [](const auto& a, const auto& b) { return a.onset < b.onset; });
      for (std::size_t i = 0; i < events.size(); ++i) {
        const bool overlaps = (i > 0 && events[i - 1].offset > events[i].onset) ||
                              (i + 1 < events.size() && events[i].offset > events[i + 1].onset);
        if (overlaps) {
          continue;
        }
        const std::size_t s0 = seconds_to_samples(events[i].onset, rate);
        const std::size_t s1 = std::min(seconds_to_samples(events[i].offset, rate), stem->audio.size());
        if (s1 <= s0) {
          continue;
        }
        const double e_rms = rms(stem->audio, s0, s1 - s0);
        ++out.ebr_checked;
        const double err = e_rms > 0.0 ? std::abs(ebr_db(e_rms, b_rms).value - *events[i].ebr)
                                       : std::numeric_limits<double>::infinity();
        out.ebr_max_error_db = std::max(out.ebr_max_error_db, err);
        if (err <= options.ebr_tolerance_db) {
          ++out.ebr_within;
        }
      }
    }
  }

  // No immediate repeats within a track.
  for (const auto& s : stems) {
    if (single_item_pool(s, options)) {
      continue;
    }
    for (std::size_t i = 1; i < s.items.size(); ++i) {
      if (s.items[i] == s.items[i - 1]) {
        out.repeats.push_back(fmt::format("{}@{}", s.name, i));
      }
    }
  }
  return out;
}

AuditReport audit_corpus(const fs::path& root, const AuditOptions& options) {
  std::vector<fs::path> dirs;
  if (fs::exists(root / "meta.json")) {
    dirs.push_back(root);
  }
  if (fs::is_directory(root)) {
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
      if (entry.is_directory() && fs::exists(entry.path() / "meta.json") &&
          fs::is_directory(entry.path() / "stems")) {
        dirs.push_back(entry.path());
      }
    }
  }
  std::sort(dirs.begin(), dirs.end());
  dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());
  dirs.erase(std::remove_if(dirs.begin(), dirs.end(),
                            [](const fs::path& d) { return !fs::is_directory(d / "stems"); }),
             dirs.end());
  if (dirs.empty()) {
    throw DataError("no rendered scenes under " + root.string());
  }

  AuditReport report;
  for (const fs::path& d : dirs) {
    SceneAudit s = audit_scene(d, options);
    std::string rel = fs::relative(d, root).generic_string();
    s.dir = rel.empty() ? "." : rel;
    report.ebr_checked += s.ebr_checked;
    report.ebr_within += s.ebr_within;
    if (!s.stem_sum_ok) {
      report.stem_sum_ok = false;
      report.failures.push_back(fmt::format("{}: stem sum differs from mix (max error {:.3g})", s.dir,
                                            s.stem_sum_max_error));
    }
    if (!s.repeats.empty()) {
      report.sequencing_ok = false;
      report.failures.push_back(fmt::format("{}: immediate repeat at {}", s.dir, s.repeats.front()));
    }
    report.scenes.push_back(std::move(s));
  }
  if (report.ebr_fraction() < options.ebr_min_fraction) {
    report.ebr_ok = false;
    report.failures.push_back(fmt::format("EBR realized within {} dB for {}/{} events",
                                          options.ebr_tolerance_db, report.ebr_within,
                                          report.ebr_checked));
  }
  return report;
}

json to_json(const AuditReport& report) {
  json scenes = json::array();
  for (const auto& s : report.scenes) {
    scenes.push_back({{"dir", s.dir},
                      {"stem_sum_ok", s.stem_sum_ok},
                      {"stem_sum_max_error", s.stem_sum_max_error},
                      {"ebr_checked", s.ebr_checked},
                      {"ebr_within", s.ebr_within},
                      {"ebr_max_error_db", s.ebr_max_error_db},
                      {"repeats", s.repeats}});
  }
  return {{"schema_version", kSchemaVersion},
          {"ok", report.ok()},
          {"stem_sum_ok", report.stem_sum_ok},
          {"ebr_ok", report.ebr_ok},
          {"sequencing_ok", report.sequencing_ok},
          {"ebr_checked", report.ebr_checked},
          {"ebr_within", report.ebr_within},
          {"ebr_fraction", report.ebr_fraction()},
          {"failures", report.failures},
          {"scenes", std::move(scenes)}};
}

}  // namespace scenesim
