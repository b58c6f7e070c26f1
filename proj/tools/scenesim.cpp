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

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "scenesim/collections.hpp"
#include "scenesim/commands.hpp"
#include "scenesim/log.hpp"
#include "scenesim/version.hpp"

namespace {

using namespace scenesim;

SampleFormat format_from(const std::string& s) { return parse_sample_format(s); }

ChannelPolicy channels_from(bool downmix) {
  return downmix ? ChannelPolicy::Downmix : ChannelPolicy::Reject;
}

// "label=path" or a bare path labelled by its file name.
std::pair<std::string, std::filesystem::path> system_from(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos) {
    std::filesystem::path p(arg);
    std::string name = p.filename().string();
    if (name.empty()) {
      name = p.parent_path().filename().string();
    }
    return {name, p};
  }
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sound scene simulation and event detection evaluation"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string format = "float32";
  bool downmix = false;

  // generate
  GenerateArgs gen;
  std::uint64_t gen_seed = 0;
  auto* generate = app.add_subcommand("generate", "Render one scene from a scene spec");
  generate->add_option("--spec", gen.spec, "Scene spec JSON")->required()->check(CLI::ExistingFile);
  generate->add_option("--collections", gen.collections, "Directory of collection manifests")
      ->required()
      ->check(CLI::ExistingDirectory);
  generate->add_option("--out", gen.out, "Output directory")->required();
  auto* gen_seed_opt = generate->add_option("--seed", gen_seed, "Overrides the spec seed");
  generate->add_option("--format", format, "float32 or pcm16")->check(CLI::IsMember({"float32", "pcm16"}));
  generate->add_flag("--downmix", downmix, "Average multichannel inputs instead of rejecting them");

  // corpus
  CorpusArgs corp;
  std::string mode = "instance";
  auto* corpus = app.add_subcommand("corpus", "Build a corpus from reference couples");
  corpus->add_option("--mode", mode, "instance or abstract")->check(CLI::IsMember({"instance", "abstract"}));
  corpus->add_option("--refs", corp.refs, "Reference annotation directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  corpus->add_option("--collections", corp.collections, "Directory of collection manifests")
      ->required()
      ->check(CLI::ExistingDirectory);
  corpus->add_option("--out", corp.out, "Output directory")->required();
  corpus->add_option("--background", corp.options.background_label, "Background texture collection label")
      ->required();
  corpus->add_option("--background-gain", corp.options.background_gain_db, "Background gain, dB");
  corpus->add_option("--offsets", corp.offsets, "EBR offsets, dB")->delimiter(',')->allow_extra_args(false);
  corpus->add_option("--replications", corp.replications, "Scenes per couple and offset");
  corpus->add_option("--seed", corp.seed, "Corpus seed");
  corpus->add_option("--jobs", corp.jobs, "Parallel scenes")->check(CLI::PositiveNumber);
  corpus->add_option("--event-fade", corp.options.event_fade, "Event fade, s");
  corpus->add_option("--overlap", corp.options.texture_overlap, "Texture crossfade, s");
  corpus->add_flag("--normalize", corp.options.normalize_on_clip, "Scale clipping mixes to peak 1");
  corpus->add_option("--format", format, "float32 or pcm16")->check(CLI::IsMember({"float32", "pcm16"}));
  corpus->add_flag("--downmix", downmix, "Average multichannel inputs instead of rejecting them");

  // stats
  StatsArgs st;
  auto* stats = app.add_subcommand("stats", "Estimate per-class parameters from reference couples");
  stats->add_option("--refs", st.refs, "Reference annotation directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  stats->add_option("--out", st.out, "Output directory")->required();

  // eval
  EvalArgs ev;
  std::vector<std::string> dets;
  std::vector<std::string> classes;
  auto* eval = app.add_subcommand("eval", "Score detections with the class-wise onset F-measure");
  eval->add_option("--ref", ev.ref, "Reference annotation file or directory")->required();
  eval->add_option("--det", dets, "Detections: [label=]file-or-directory, repeatable")->required();
  eval->add_option("--out", ev.out, "Output directory")->required();
  eval->add_option("--tolerance", ev.config.onset_tolerance, "Onset tolerance, s");
  auto* classes_opt = eval->add_option("--classes", classes, "Restrict to these classes")->delimiter(',');
  eval->add_flag("--pairs", ev.dump_pairs, "Write matched pairs to pairs.json");

  // audit
  AuditArgs au;
  std::filesystem::path audit_collections;
  auto* audit = app.add_subcommand("audit", "Check stem sums, EBRs and sequencing of rendered scenes");
  audit->add_option("--corpus", au.corpus, "Scene or corpus directory")->required()->check(CLI::ExistingDirectory);
  audit->add_option("--out", au.out, "Output directory")->required();
  auto* audit_coll_opt = audit->add_option("--collections", audit_collections, "Collection manifests");
  audit->add_option("--ebr-tolerance", au.ebr_tolerance_db, "dB");

  // manifest
  std::filesystem::path audio_dir;
  std::filesystem::path manifest_path;
  std::string label;
  std::string kind = "event";
  std::string session = "s0";
  auto* manifest = app.add_subcommand("manifest", "Write a collection manifest for a directory of WAV files");
  manifest->add_option("--audio", audio_dir, "Directory of WAV files")->required()->check(CLI::ExistingDirectory);
  manifest->add_option("--label", label, "Collection label")->required();
  manifest->add_option("--kind", kind, "event or texture")->check(CLI::IsMember({"event", "texture"}));
  manifest->add_option("--session", session, "Session id for every item");
  manifest->add_option("--out", manifest_path, "Manifest path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*generate) {
      if (*gen_seed_opt) {
        gen.seed = gen_seed;
      }
      gen.format = format_from(format);
      gen.channels = channels_from(downmix);
      const auto written = cmd_generate(gen);
      std::cout << "mix " << written.mix_sha256 << "\nannotation " << written.annotation_sha256 << '\n';
    } else if (*corpus) {
      corp.mode = parse_corpus_mode(mode);
      corp.format = format_from(format);
      corp.channels = channels_from(downmix);
      const auto result = cmd_corpus(corp);
      std::cout << result.scenes.size() << " scenes, manifest " << result.manifest.string() << '\n';
    } else if (*stats) {
      const auto params = cmd_stats(st);
      std::cout << format_params_table(params);
    } else if (*eval) {
      for (const auto& d : dets) {
        ev.systems.push_back(system_from(d));
      }
      if (*classes_opt) {
        ev.config.class_list = classes;
      }
      for (const auto& s : cmd_eval(ev)) {
        std::cout << s.system << " CWEBF " << s.overall.cwebf << '\n';
      }
    } else if (*audit) {
      if (*audit_coll_opt) {
        au.collections = audit_collections;
      }
      const auto report = cmd_audit(au);
      for (const auto& f : report.failures) {
        std::cerr << "audit: " << f << '\n';
      }
      std::cout << (report.ok() ? "audit passed" : "audit FAILED") << " (" << report.scenes.size()
                << " scenes, EBR " << report.ebr_within << "/" << report.ebr_checked << ")\n";
      return report.ok() ? kExitOk : kExitAudit;
    } else if (*manifest) {
      write_manifest_for_directory(audio_dir, label, parse_collection_kind(kind), manifest_path, session);
    }
  } catch (const std::exception& e) {
    log().error("{}", e.what());
    return exit_code_for(e);
  }
  return kExitOk;
}
