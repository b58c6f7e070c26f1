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

#include "scenesim/commands.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "scenesim/collections.hpp"
#include "scenesim/errors.hpp"
#include "scenesim/log.hpp"
#include "scenesim/sequencer.hpp"
#include "scenesim/version.hpp"

namespace scenesim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_run_meta(const fs::path& out, std::string_view command, json config) {
  fs::create_directories(out);
  write_json(out / "meta.json", {{"schema_version", kSchemaVersion},
                                 {"tool", kToolName},
                                 {"version", kVersion},
                                 {"command", command},
                                 {"config", std::move(config)}});
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  out << text;
}

json options_json(const SimulationOptions& o) { return to_json(o); }

// Relative paths of every annotation text file under `dir`, sorted.
std::vector<fs::path> annotation_files(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      out.push_back(fs::relative(entry.path(), dir));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<double> offset_of(const fs::path& rel) {
  for (const auto& part : rel) {
    if (auto o = parse_offset_dir_name(part.string())) {
      return o;
    }
  }
  return std::nullopt;
}

json pairs_json(const std::vector<EventAnnotation>& refs, const std::vector<EventAnnotation>& dets,
                const EvalConfig& cfg) {
  json out = json::array();
  for (const auto& p : match_events(refs, dets, cfg)) {
    out.push_back({{"label", refs[p.ref].label},
                   {"ref_onset", refs[p.ref].onset},
                   {"det_onset", dets[p.det].onset}});
  }
  return out;
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) != nullptr ||
      dynamic_cast<const std::invalid_argument*>(&e) != nullptr) {
    return kExitConfig;
  }
  return kExitData;
}

std::optional<double> parse_offset_dir_name(const std::string& name) {
  constexpr std::string_view prefix = "ebr_";
  if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) {
    return std::nullopt;
  }
  const char* first = name.data() + prefix.size();
  const char* last = name.data() + name.size();
  if (*first == '+') {
    ++first;
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    return std::nullopt;
  }
  return v;
}

WrittenScene cmd_generate(const GenerateArgs& args) {
  SceneSpec spec = load_scene_spec(args.spec);
  if (args.seed) {
    spec.seed = *args.seed;
  }
  const CollectionSet collections = load_collections_dir(args.collections, args.channels);
  const SceneOutput scene = render_scene(spec, collections, spec.seed);
  const json config = {{"command", "generate"},
                       {"spec_path", args.spec.generic_string()},
                       {"collections", args.collections.generic_string()},
                       {"seed", spec.seed},
                       {"sample_format", std::string(to_string(args.format))},
                       {"downmix", args.channels == ChannelPolicy::Downmix},
                       {"spec", to_json(spec)}};
  return write_scene(args.out, scene, args.format, config);
}

CorpusResult cmd_corpus(const CorpusArgs& args) {
  CorpusPlan plan;
  plan.mode = args.mode;
  plan.ebr_offsets = args.offsets;
  plan.replications = args.replications;
  plan.seed = args.seed;
  plan.options = args.options;
  plan.format = args.format;
  plan.jobs = args.jobs;
  plan.validate();

  const CollectionSet collections = load_collections_dir(args.collections, args.channels);
  const std::vector<ReferenceScene> refs = load_reference_dir(args.refs);
  check_corpus_inputs(plan, refs, collections);

  CorpusResult result = build_corpus(plan, refs, collections, args.out);
  write_run_meta(args.out, "corpus",
                 {{"mode", std::string(to_string(args.mode))},
                  {"refs", args.refs.generic_string()},
                  {"collections", args.collections.generic_string()},
                  {"ebr_offsets", args.offsets},
                  {"replications", args.replications},
                  {"seed", args.seed},
                  {"jobs", args.jobs},
                  {"sample_format", std::string(to_string(args.format))},
                  {"downmix", args.channels == ChannelPolicy::Downmix},
                  {"options", options_json(args.options)}});
  return result;
}

std::vector<CoupleParams> cmd_stats(const StatsArgs& args) {
  const std::vector<ReferenceScene> refs = load_reference_dir(args.refs);
  const std::vector<CoupleParams> params = estimate_class_params(refs);
  fs::create_directories(args.out);
  json doc = json::array();
  for (const auto& p : params) {
    doc.push_back(to_json(p));
  }
  write_json(args.out / "params.json", {{"schema_version", kSchemaVersion}, {"couples", doc}});
  write_text(args.out / "params.txt", format_params_table(params));
  write_run_meta(args.out, "stats", {{"refs", args.refs.generic_string()}});
  return params;
}

std::vector<SystemEval> cmd_eval(const EvalArgs& args) {
  args.config.validate();
  if (args.systems.empty()) {
    throw ConfigError("eval: at least one detection set is required");
  }
  std::set<std::string> names;
  for (const auto& [name, _] : args.systems) {
    if (!names.insert(name).second) {
      throw ConfigError("eval: duplicate system label '" + name + "'");
    }
  }

  const bool single_file = fs::is_regular_file(args.ref);
  if (!single_file && !fs::is_directory(args.ref)) {
    throw DataError("reference annotations not found: " + args.ref.string());
  }
  const std::vector<fs::path> files =
      single_file ? std::vector<fs::path>{args.ref.filename()} : annotation_files(args.ref);
  if (files.empty()) {
    throw DataError("no reference annotation files under " + args.ref.string());
  }
  const fs::path ref_root = single_file ? args.ref.parent_path() : args.ref;

  std::vector<SystemEval> results;
  json pairs = json::object();
  for (const auto& [name, det_path] : args.systems) {
    const bool det_file = fs::is_regular_file(det_path);
    if (single_file != det_file && fs::exists(det_path)) {
      throw ConfigError("eval: reference and detections must both be files or both be directories");
    }
    SystemEval sys;
    sys.system = name;
    std::vector<EvalReport> all;
    std::map<double, std::vector<EvalReport>> per_offset;
    for (const fs::path& rel : files) {
      const auto refs = parse_annotations(ref_root / rel);
      const fs::path det_full = det_file ? det_path : det_path / rel;
      std::vector<EventAnnotation> dets;
      if (fs::exists(det_full)) {
        dets = parse_annotations(det_full);
      } else {
        log().info("{}: no detections for {}", name, rel.generic_string());
      }
      EvalReport r = evaluate(refs, dets, args.config);
      if (args.dump_pairs) {
        pairs[name][rel.generic_string()] = pairs_json(refs, dets, args.config);
      }
      if (const auto o = offset_of(rel)) {
        per_offset[*o].push_back(r);
      }
      all.push_back(r);
      sys.scenes.emplace(rel.generic_string(), std::move(r));
    }
    sys.overall = merge_reports(all);
    sys.false_positives = false_positive_profile(all);
    for (const auto& [o, reports] : per_offset) {
      sys.by_offset.emplace(o, merge_reports(reports));
    }
    results.push_back(std::move(sys));
  }

  fs::create_directories(args.out);
  json systems = json::array();
  std::string table;
  std::string csv;
  for (const auto& s : results) {
    json scenes = json::object();
    for (const auto& [rel, r] : s.scenes) {
      scenes[rel] = r.cwebf;
    }
    json offsets = json::array();
    for (const auto& [o, r] : s.by_offset) {
      offsets.push_back({{"ebr_offset", o}, {"cwebf", r.cwebf}, {"scenes", r.scenes}});
      csv += fmt::format("{},{},{:.6f}\n", s.system, o, r.cwebf);
    }
    systems.push_back({{"system", s.system},
                       {"report", to_json(s.overall)},
                       {"false_positives", to_json(s.false_positives)},
                       {"by_offset", std::move(offsets)},
                       {"scene_cwebf", std::move(scenes)}});
    table += fmt::format("== {} ({} scenes)\n", s.system, s.overall.scenes);
    table += format_report_table(s.overall);
    table += fmt::format("max mean FP per scene: {} ({:.3f})\n\n", s.false_positives.argmax,
                         s.false_positives.max_mean_fp);
  }
  write_json(args.out / "report.json", {{"schema_version", kSchemaVersion},
                                        {"onset_tolerance", args.config.onset_tolerance},
                                        {"systems", std::move(systems)}});
  write_text(args.out / "report.txt", table);
  if (!csv.empty()) {
    write_text(args.out / "curve.csv", "system,ebr_offset,cwebf\n" + csv);
  }
  if (args.dump_pairs) {
    write_json(args.out / "pairs.json", pairs);
  }

  json sys_cfg = json::array();
  for (const auto& [name, path] : args.systems) {
    sys_cfg.push_back({{"system", name}, {"detections", path.generic_string()}});
  }
  json cfg = {{"ref", args.ref.generic_string()},
              {"systems", std::move(sys_cfg)},
              {"onset_tolerance", args.config.onset_tolerance},
              {"dump_pairs", args.dump_pairs}};
  cfg["class_list"] = args.config.class_list ? json(*args.config.class_list) : json(nullptr);
  write_run_meta(args.out, "eval", std::move(cfg));
  return results;
}

AuditReport cmd_audit(const AuditArgs& args) {
  std::optional<CollectionSet> collections;
  AuditOptions options;
  options.ebr_tolerance_db = args.ebr_tolerance_db;
  if (args.collections) {
    collections = load_collections_dir(*args.collections, ChannelPolicy::Downmix);
    options.collections = &*collections;
  }
  AuditReport report = audit_corpus(args.corpus, options);
  fs::create_directories(args.out);
  write_json(args.out / "audit.json", to_json(report));
  json cfg = {{"corpus", args.corpus.generic_string()}, {"ebr_tolerance_db", args.ebr_tolerance_db}};
  cfg["collections"] = args.collections ? json(args.collections->generic_string()) : json(nullptr);
  write_run_meta(args.out, "audit", std::move(cfg));
  return report;
}

}  // namespace scenesim
