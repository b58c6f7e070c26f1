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
 * @file commands.hpp
 * @brief Subcommands of the scenesim tool as library calls.
 *
 * Each command writes its artifacts plus a meta.json holding the resolved
 * configuration and the tool version. Nothing time- or host-dependent is
 * written, so reruns with the same inputs give identical files.
 */

#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scenesim/audit.hpp"
#include "scenesim/corpus.hpp"
#include "scenesim/evaluation.hpp"
#include "scenesim/scene_io.hpp"
#include "scenesim/wav.hpp"

namespace scenesim {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitData = 3,
  kExitAudit = 4,
};

/// Maps an exception from any command to its exit code.
int exit_code_for(const std::exception& e);

struct GenerateArgs {
  std::filesystem::path spec;
  std::filesystem::path collections;
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;  ///< overrides the spec's seed
  SampleFormat format = SampleFormat::Float32;
  ChannelPolicy channels = ChannelPolicy::Reject;
};

WrittenScene cmd_generate(const GenerateArgs& args);

struct CorpusArgs {
  CorpusMode mode = CorpusMode::Instance;
  std::filesystem::path refs;
  std::filesystem::path collections;
  std::filesystem::path out;
  std::vector<double> offsets{6.0, 0.0, -6.0, -12.0};
  int replications = 10;
  std::uint64_t seed = 0;
  SimulationOptions options;
  SampleFormat format = SampleFormat::Float32;
  int jobs = 1;
  ChannelPolicy channels = ChannelPolicy::Reject;
};

CorpusResult cmd_corpus(const CorpusArgs& args);

struct StatsArgs {
  std::filesystem::path refs;
  std::filesystem::path out;
};

/// Writes params.json and params.txt; returns the estimates.
std::vector<CoupleParams> cmd_stats(const StatsArgs& args);

struct EvalArgs {
  std::filesystem::path ref;
  /// (system label, detection file or directory). Directories pair files by
  /// relative path; a missing detection file counts as no detections.
  std::vector<std::pair<std::string, std::filesystem::path>> systems;
  std::filesystem::path out;
  EvalConfig config;
  bool dump_pairs = false;
};

struct SystemEval {
  std::string system;
  EvalReport overall;                      ///< pooled over every scene
  std::map<std::string, EvalReport> scenes;  ///< keyed by relative annotation path
  FalsePositiveProfile false_positives;
  std::map<double, EvalReport> by_offset;  ///< scenes under ebr_<offset>/ directories
};

/// Writes report.json, report.txt and, when scenes sit under ebr_<offset>/
/// directories, curve.csv (system,ebr_offset,cwebf).
std::vector<SystemEval> cmd_eval(const EvalArgs& args);

struct AuditArgs {
  std::filesystem::path corpus;
  std::filesystem::path out;
  std::optional<std::filesystem::path> collections;
  double ebr_tolerance_db = 0.1;
};

/// Writes audit.json. The caller decides the exit code from report.ok().
AuditReport cmd_audit(const AuditArgs& args);

/// Parses "ebr_+6" style directory names; nullopt for anything else.
std::optional<double> parse_offset_dir_name(const std::string& name);

}  // namespace scenesim
