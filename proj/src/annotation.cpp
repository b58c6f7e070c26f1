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

#include "scenesim/annotation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "scenesim/errors.hpp"

namespace scenesim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  if (line.find('\t') != std::string::npos) {
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      fields.push_back(trim(std::string_view(line).substr(start, tab - start)));
      if (tab == std::string::npos) {
        break;
      }
      start = tab + 1;
    }
  } else {
    std::istringstream in(line);
    std::string f;
    while (in >> f) {
      fields.push_back(f);
    }
  }
  return fields;
}

double parse_time(const std::string& field, const std::string& where) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw DataError(where + ": invalid time value '" + field + "'");
  }
  return value;
}

json event_to_json(const EventAnnotation& e) {
  json j = {{"onset", e.onset}, {"offset", e.offset}, {"label", e.label}};
  if (e.ebr) {
    j["ebr"] = *e.ebr;
  }
  if (!e.track.empty()) {
    j["track"] = e.track;
  }
  return j;
}

}  // namespace

void sort_by_onset(std::vector<EventAnnotation>& events) {
  std::stable_sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
    if (a.onset != b.onset) {
      return a.onset < b.onset;
    }
    return a.label < b.label;
  });
}

std::vector<EventAnnotation> parse_annotations_text(const std::string& text,
                                                    const std::string& source) {
  std::vector<EventAnnotation> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string content = trim(line);
    if (content.empty() || content.front() == '#') {
      continue;
    }
    const std::string where = source + ":" + std::to_string(line_no);
    const auto fields = split_fields(content);
    if (fields.size() != 3) {
      throw DataError(where + ": expected 3 fields (onset, offset, label), got " +
                      std::to_string(fields.size()));
    }
    EventAnnotation e;
    e.onset = parse_time(fields[0], where);
    e.offset = parse_time(fields[1], where);
    e.label = fields[2];
    if (e.label.empty()) {
      throw DataError(where + ": empty label");
    }
    if (e.offset < e.onset) {
      throw DataError(where + ": offset precedes onset");
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<EventAnnotation> parse_annotations(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open annotation file " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_annotations_text(buf.str(), path.string());
}

std::string format_annotations(std::vector<EventAnnotation> events) {
  sort_by_onset(events);
  std::string out;
  for (const auto& e : events) {
    out += fmt::format("{:.6f}\t{:.6f}\t{}\n", e.onset, e.offset, e.label);
  }
  return out;
}

void write_annotations(const fs::path& path, std::vector<EventAnnotation> events) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot write annotation file " + path.string());
  }
  out << format_annotations(std::move(events));
}

AnnotationSidecar read_sidecar(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open sidecar " + path.string());
  }
  try {
    const json doc = json::parse(in);
    AnnotationSidecar s;
    for (const json& j : doc.value("events", json::array())) {
      EventAnnotation e;
      e.onset = j.at("onset").get<double>();
      e.offset = j.at("offset").get<double>();
      e.label = j.at("label").get<std::string>();
      if (j.contains("ebr") && !j["ebr"].is_null()) {
        e.ebr = j["ebr"].get<double>();
      }
      e.track = j.value("track", std::string{});
      s.events.push_back(std::move(e));
    }
    if (doc.contains("duration")) {
      s.duration = doc["duration"].get<double>();
    }
    if (doc.contains("background_window")) {
      const auto& w = doc["background_window"];
      s.background_window = std::make_pair(w.at(0).get<double>(), w.at(1).get<double>());
    }
    return s;
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_sidecar(const fs::path& path, const AnnotationSidecar& sidecar) {
  json doc = {{"schema_version", 1}};
  json events = json::array();
  for (const auto& e : sidecar.events) {
    events.push_back(event_to_json(e));
  }
  doc["events"] = std::move(events);
  if (sidecar.duration) {
    doc["duration"] = *sidecar.duration;
  }
  if (sidecar.background_window) {
    doc["background_window"] = {sidecar.background_window->first, sidecar.background_window->second};
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot write sidecar " + path.string());
  }
  out << doc.dump(2) << '\n';
}

}  // namespace scenesim
