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

#include "scenesim/evaluation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "scenesim/version.hpp"

namespace scenesim {

using nlohmann::json;

namespace {

std::vector<std::size_t> indices_of_class(std::span<const EventAnnotation> events,
                                          const std::string& label) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].label == label) {
      idx.push_back(i);
    }
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return events[a].onset < events[b].onset;
  });
  return idx;
}

std::set<std::string> labels_of(std::span<const EventAnnotation> events) {
  std::set<std::string> out;
  for (const auto& e : events) {
    out.insert(e.label);
  }
  return out;
}

ClassScore score_from_counts(std::string label, std::size_t tp, std::size_t fp, std::size_t fn) {
  ClassScore s;
  s.label = std::move(label);
  s.tp = tp;
  s.fp = fp;
  s.fn = fn;
  s.prf = class_prf(tp, fp, fn);
  return s;
}

json score_json(const ClassScore& s) {
  return {{"label", s.label},
          {"tp", s.tp},
          {"fp", s.fp},
          {"fn", s.fn},
          {"precision", s.prf.precision},
          {"recall", s.prf.recall},
          {"f", s.prf.f}};
}

}  // namespace

void EvalConfig::validate() const {
  if (!(onset_tolerance > 0.0) || !std::isfinite(onset_tolerance)) {
    throw std::invalid_argument("onset tolerance must be positive");
  }
}

bool onsets_match(double ref_onset, double det_onset, double tolerance) {
  return std::abs(ref_onset - det_onset) <= tolerance + kOnsetSlack;
}

std::vector<MatchedPair> match_events(std::span<const EventAnnotation> refs,
                                      std::span<const EventAnnotation> dets,
                                      const EvalConfig& cfg) {
  cfg.validate();
  const double tol = cfg.onset_tolerance;
  std::vector<MatchedPair> pairs;
  for (const std::string& label : labels_of(refs)) {
    const auto r = indices_of_class(refs, label);
    const auto d = indices_of_class(dets, label);
    // Reference windows [onset - tol, onset + tol] share one width, so both
    // ends move monotonically: a detection too early for this reference is
    // too early for every later one.
    std::size_t j = 0;
    for (std::size_t ri : r) {
      const double onset = refs[ri].onset;
      while (j < d.size() && dets[d[j]].onset < onset && !onsets_match(onset, dets[d[j]].onset, tol)) {
        ++j;
      }
      if (j < d.size() && onsets_match(onset, dets[d[j]].onset, tol)) {
        pairs.push_back({ri, d[j]});
        ++j;
      }
    }
  }
  return pairs;
}

Prf class_prf(std::size_t tp, std::size_t fp, std::size_t fn) {
  Prf out;
  const auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  out.precision = ratio(tp, tp + fp);
  out.recall = ratio(tp, tp + fn);
  const double sum = out.precision + out.recall;
  out.f = sum == 0.0 ? 0.0 : 2.0 * out.precision * out.recall / sum;
  return out;
}

Prf class_prf(std::span<const MatchedPair> matching, std::span<const EventAnnotation> refs,
              std::span<const EventAnnotation> dets, const std::string& label) {
  const auto count = [&](std::span<const EventAnnotation> events) {
    return static_cast<std::size_t>(std::count_if(events.begin(), events.end(),
                                                  [&](const auto& e) { return e.label == label; }));
  };
  const auto tp = static_cast<std::size_t>(std::count_if(
      matching.begin(), matching.end(), [&](const MatchedPair& p) { return refs[p.ref].label == label; }));
  return class_prf(tp, count(dets) - tp, count(refs) - tp);
}

double cwebf(const EvalReport& report) {
  if (report.classes.empty()) {
    return 1.0;
  }
  double sum = 0.0;
  for (const auto& c : report.classes) {
    sum += c.prf.f;
  }
  return sum / static_cast<double>(report.classes.size());
}

EvalReport evaluate(std::span<const EventAnnotation> refs, std::span<const EventAnnotation> dets,
                    const EvalConfig& cfg) {
  cfg.validate();
  std::set<std::string> allowed;
  if (cfg.class_list) {
    allowed.insert(cfg.class_list->begin(), cfg.class_list->end());
  }
  const auto in_scope = [&](const std::string& label) {
    return !cfg.class_list || allowed.contains(label);
  };

  std::vector<EventAnnotation> ref_scope;
  std::vector<EventAnnotation> det_scope;
  std::map<std::string, std::size_t> unknown_counts;
  for (const auto& e : refs) {
    if (in_scope(e.label)) {
      ref_scope.push_back(e);
    }
  }
  for (const auto& e : dets) {
    if (in_scope(e.label)) {
      det_scope.push_back(e);
    } else {
      ++unknown_counts[e.label];
    }
  }

  const auto pairs = match_events(ref_scope, det_scope, cfg);
  std::map<std::string, std::array<std::size_t, 3>> counts;  // refs, dets, tp
  for (const auto& e : ref_scope) {
    ++counts[e.label][0];
  }
  for (const auto& e : det_scope) {
    ++counts[e.label][1];
  }
  for (const auto& p : pairs) {
    ++counts[ref_scope[p.ref].label][2];
  }

  EvalReport report;
  for (const auto& [label, c] : counts) {
    report.classes.push_back(score_from_counts(label, c[2], c[1] - c[2], c[0] - c[2]));
  }
  for (const auto& [label, n] : unknown_counts) {
    report.unknown.push_back(score_from_counts(label, 0, n, 0));
  }
  report.cwebf = cwebf(report);
  return report;
}

EvalReport merge_reports(std::span<const EvalReport> reports) {
  std::map<std::string, std::array<std::size_t, 3>> known;
  std::map<std::string, std::size_t> unknown;
  EvalReport out;
  out.scenes = 0;
  for (const auto& r : reports) {
    out.scenes += r.scenes;
    for (const auto& c : r.classes) {
      auto& k = known[c.label];
      k[0] += c.tp;
      k[1] += c.fp;
      k[2] += c.fn;
    }
    for (const auto& c : r.unknown) {
      unknown[c.label] += c.fp;
    }
  }
  for (const auto& [label, k] : known) {
    out.classes.push_back(score_from_counts(label, k[0], k[1], k[2]));
  }
  for (const auto& [label, n] : unknown) {
    out.unknown.push_back(score_from_counts(label, 0, n, 0));
  }
  out.cwebf = cwebf(out);
  return out;
}

FalsePositiveProfile false_positive_profile(std::span<const EvalReport> per_scene) {
  if (per_scene.empty()) {
    throw std::invalid_argument("false_positive_profile: no scenes");
  }
  std::map<std::string, double> totals;
  double scenes = 0.0;
  for (const auto& r : per_scene) {
    scenes += static_cast<double>(r.scenes);
    for (const auto& c : r.classes) {
      totals[c.label] += static_cast<double>(c.fp);
    }
    for (const auto& c : r.unknown) {
      totals[c.label] += static_cast<double>(c.fp);
    }
  }
  FalsePositiveProfile out;
  for (const auto& [label, total] : totals) {
    const double mean = total / scenes;
    out.mean_fp[label] = mean;
    if (out.argmax.empty() || mean > out.max_mean_fp) {
      out.argmax = label;
      out.max_mean_fp = mean;
    }
  }
  return out;
}

json to_json(const EvalReport& report) {
  json classes = json::array();
  for (const auto& c : report.classes) {
    classes.push_back(score_json(c));
  }
  json unknown = json::array();
  for (const auto& c : report.unknown) {
    unknown.push_back(score_json(c));
  }
  return {{"schema_version", kSchemaVersion},
          {"cwebf", report.cwebf},
          {"class_count", report.classes.size()},
          {"scenes", report.scenes},
          {"classes", std::move(classes)},
          {"unknown_detections", std::move(unknown)}};
}

json to_json(const FalsePositiveProfile& profile) {
  return {{"mean_fp_per_scene", profile.mean_fp},
          {"argmax_class", profile.argmax},
          {"max_mean_fp", profile.max_mean_fp}};
}

std::string format_report_table(const EvalReport& report) {
  std::string out = fmt::format("{:<24} {:>5} {:>5} {:>5} {:>9} {:>9} {:>9}\n", "class", "TP", "FP",
                                "FN", "precision", "recall", "F");
  for (const auto& c : report.classes) {
    out += fmt::format("{:<24} {:>5} {:>5} {:>5} {:>9.4f} {:>9.4f} {:>9.4f}\n", c.label, c.tp, c.fp,
                       c.fn, c.prf.precision, c.prf.recall, c.prf.f);
  }
  for (const auto& c : report.unknown) {
    out += fmt::format("{:<24} {:>5} {:>5} {:>5}   (not in class list)\n", c.label, c.tp, c.fp, c.fn);
  }
  out += fmt::format("CWEBF over {} classes: {:.4f}\n", report.classes.size(), report.cwebf);
  return out;
}

}  // namespace scenesim
