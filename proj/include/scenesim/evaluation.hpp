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
 * @file evaluation.hpp
 * @brief Class-wise event-onset F-measure.
 *
 * Detections are matched one-to-one to reference events of the same class
 * whose onset lies within the tolerance; offsets are ignored. Each class gets
 * its own precision, recall and F-measure and the aggregate is their
 * unweighted mean, so frequent classes do not dominate the score.
 */

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "scenesim/annotation.hpp"

namespace scenesim {

struct EvalConfig {
  double onset_tolerance = 0.1;  ///< seconds
  /// Restricts the evaluated classes. Detections with other labels are
  /// reported under EvalReport::unknown.
  std::optional<std::vector<std::string>> class_list;

  void validate() const;
};

/// Slack added to the tolerance so that onsets written with 6 decimals match
/// at exactly the tolerance boundary.
inline constexpr double kOnsetSlack = 1e-9;

/// |ref_onset - det_onset| <= tolerance (+ kOnsetSlack).
bool onsets_match(double ref_onset, double det_onset, double tolerance);

struct MatchedPair {
  std::size_t ref;  ///< index into the reference list
  std::size_t det;  ///< index into the detection list
};

/// Maximum-cardinality one-to-one matching, computed per class by
/// earliest-feasible greedy over onset-sorted lists. Pairs are ordered by
/// class, then reference onset.
std::vector<MatchedPair> match_events(std::span<const EventAnnotation> refs,
                                      std::span<const EventAnnotation> dets,
                                      const EvalConfig& cfg);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
};

/// P = TP/(TP+FP), R = TP/(TP+FN), F = 2PR/(P+R); empty denominators give 0.
Prf class_prf(std::size_t tp, std::size_t fp, std::size_t fn);

/// Same, with counts taken from a matching for class `label`.
Prf class_prf(std::span<const MatchedPair> matching, std::span<const EventAnnotation> refs,
              std::span<const EventAnnotation> dets, const std::string& label);

struct ClassScore {
  std::string label;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  Prf prf;
};

struct EvalReport {
  std::vector<ClassScore> classes;  ///< evaluated classes, sorted by label
  std::vector<ClassScore> unknown;  ///< detected labels outside class_list (FP only)
  double cwebf = 0.0;
  std::size_t scenes = 1;
};

/// Unweighted mean of per-class F over the evaluated classes. A report with
/// no evaluated classes (no references and no detections) scores 1.
double cwebf(const EvalReport& report);

/// Scores one scene.
EvalReport evaluate(std::span<const EventAnnotation> refs, std::span<const EventAnnotation> dets,
                    const EvalConfig& cfg);

/// Pools per-class counts across scenes and recomputes every score from the
/// pooled counts. Associative and commutative.
EvalReport merge_reports(std::span<const EvalReport> reports);

struct FalsePositiveProfile {
  std::map<std::string, double> mean_fp;  ///< per class, mean FP count per scene
  std::string argmax;                     ///< ties resolved to the smallest label
  double max_mean_fp = 0.0;
};

/// Per-class false positives averaged over scenes (a class missing from a
/// scene's report counts 0 there). Requires at least one report.
FalsePositiveProfile false_positive_profile(std::span<const EvalReport> per_scene);

nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(const FalsePositiveProfile& profile);

/// Human-readable per-class table.
std::string format_report_table(const EvalReport& report);

}  // namespace scenesim
