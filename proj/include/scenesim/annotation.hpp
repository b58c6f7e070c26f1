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

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace scenesim {

/// One annotated (or detected) event. Ground truth and detector output share
/// this shape; `ebr` and `track` are only known for rendered scenes.
struct EventAnnotation {
  double onset = 0.0;   ///< seconds
  double offset = 0.0;  ///< seconds
  std::string label;
  std::optional<double> ebr;  ///< dB
  std::string track;          ///< stem the event was rendered into, if any

  friend bool operator==(const EventAnnotation&, const EventAnnotation&) = default;
};

/// Stable sort by onset, then label.
void sort_by_onset(std::vector<EventAnnotation>& events);

/// Parses the tab-separated text format `onset<TAB>offset<TAB>label`, one event
/// per line. Blank lines and lines starting with '#' are skipped. Lines
/// without tabs are split on whitespace. Any other field count, a
/// non-numeric time or offset < onset is a DataError carrying the line number.
std::vector<EventAnnotation> parse_annotations(const std::filesystem::path& path);
std::vector<EventAnnotation> parse_annotations_text(const std::string& text,
                                                    const std::string& source = "<text>");

/// Writes the text format with 6 decimal places, sorted by onset.
void write_annotations(const std::filesystem::path& path, std::vector<EventAnnotation> events);
std::string format_annotations(std::vector<EventAnnotation> events);

/// JSON sidecar carrying EBR and track fields alongside free-form scene
/// metadata. Layout: {"schema_version": 1, "events": [...], ...extra}.
struct AnnotationSidecar {
  std::vector<EventAnnotation> events;
  std::optional<double> duration;
  std::optional<std::pair<double, double>> background_window;
};

AnnotationSidecar read_sidecar(const std::filesystem::path& path);
void write_sidecar(const std::filesystem::path& path, const AnnotationSidecar& sidecar);

}  // namespace scenesim
