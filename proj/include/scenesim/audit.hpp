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

// Post-hoc checks over rendered scene directories, from the written files only.

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "scenesim/collections.hpp"

namespace scenesim {

struct AuditOptions {
  double ebr_tolerance_db = 0.1;
  double ebr_min_fraction = 0.99;
  /// Optional. With it, adjacent repeats from single-item pools are exempt;
  /// without it a track that only ever used one item is assumed to be one.
  const CollectionSet* collections = nullptr;
};

struct SceneAudit {
  std::string dir;  ///< relative to the audited root
  double stem_sum_max_error = 0.0;
  double stem_sum_max_excess = 0.0;  ///< error minus allowed tolerance, <= 0 passes
  bool stem_sum_ok = true;
  std::size_t ebr_checked = 0;
  std::size_t ebr_within = 0;
  double ebr_max_error_db = 0.0;
  std::vector<std::string> repeats;  ///< "<stem>@<position>"
};

struct AuditReport {
  std::vector<SceneAudit> scenes;
  std::size_t ebr_checked = 0;
  std::size_t ebr_within = 0;
  bool stem_sum_ok = true;
  bool ebr_ok = true;
  bool sequencing_ok = true;
  std::vector<std::string> failures;  ///< one line per failed check, naming the scene

  [[nodiscard]] bool ok() const { return stem_sum_ok && ebr_ok && sequencing_ok; }
  [[nodiscard]] double ebr_fraction() const;
};

/// Audits one scene directory (mix.wav, stems/, annotation.json, meta.json).
SceneAudit audit_scene(const std::filesystem::path& dir, const AuditOptions& options = {});

/// Audits every directory under `root` (including root) that holds a meta.json
/// with stems. Throws DataError when none is found.
AuditReport audit_corpus(const std::filesystem::path& root, const AuditOptions& options = {});

nlohmann::json to_json(const AuditReport& report);

}  // namespace scenesim
