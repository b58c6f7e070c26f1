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

// Acceptance checks. Prints one [PASS]/[FAIL] line per criterion and exits
// non-zero when any fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <fmt/format.h>

#include "corpus_fixtures.hpp"
#include "evaluation_oracle.hpp"
#include "scenesim/audit.hpp"
#include "scenesim/commands.hpp"
#include "scenesim/hashing.hpp"
#include "scenesim/sequencer.hpp"
#include "support.hpp"

using namespace scenesim;
using testsupport::TempDir;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

TrackSpec texture(const std::string& label, double end, double gain = 0.0) {
  TrackSpec t;
  t.collection_label = label;
  t.kind = CollectionKind::Texture;
  t.ebr_mean = gain;
  t.end_time = end;
  return t;
}

TrackSpec events(const std::string& label, double ebr, double ebr_sd, double ioi, double ioi_sd, double start,
                 double end) {
  TrackSpec t;
  t.collection_label = label;
  t.ebr_mean = ebr;
  t.ebr_std = ebr_sd;
  t.interval_mean = ioi;
  t.interval_std = ioi_sd;
  t.start_time = start;
  t.end_time = end;
  return t;
}

// Hash of every audio and annotation file under `dir`, keyed by relative path.
std::map<std::string, std::string> artifact_hashes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    const auto ext = e.path().extension();
    if (e.is_regular_file() && (ext == ".wav" || ext == ".txt" || e.path().filename() == "annotation.json")) {
      out[fs::relative(e.path(), dir).generic_string()] = sha256_file(e.path());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

bool ac1_determinism(std::string& detail) {
  TempDir dir("ac1");
  const int rate = 44100;
  const fs::path coll = dir / "collections";
  testsupport::write_fixture_collections(coll, rate, 100);
  std::mt19937_64 gen(1);
  testsupport::write_collection(coll, "city-park", CollectionKind::Texture,
                                {testsupport::noise_clip(gen, 25.0, rate, 0.03),
                                 testsupport::noise_clip(gen, 25.0, rate, 0.03)});

  SceneSpec s;
  s.duration = 60.0;
  s.sample_rate = rate;
  s.seed = 2024;
  s.background_ref = "street-traffic";
  s.tracks = {texture("street-traffic", 60.0), texture("city-park", 40.0, -6.0),
              events("dog-bark", -3.0, 3.0, 2.0, 0.7, 0.5, 58.0),
              events("door-knock", 0.0, 2.0, 4.0, 1.0, 1.0, 55.0),
              events("phone-ring", -9.0, 1.0, 6.0, 2.0, 3.0, 50.0)};
  s.tracks[1].start_time = 10.0;
  write_json(dir / "scene.json", to_json(s));

  GenerateArgs g{dir / "scene.json", coll, dir / "gen_a", std::nullopt, SampleFormat::Float32,
                 ChannelPolicy::Reject};
  const auto t0 = Clock::now();
  cmd_generate(g);
  const double gen_seconds = seconds_since(t0);
  g.out = dir / "gen_b";
  cmd_generate(g);
  const auto ha = artifact_hashes(dir / "gen_a");
  const auto hb = artifact_hashes(dir / "gen_b");

  testsupport::write_reference_couples(dir / "refs", testsupport::make_reference_couples(7, 3, 10.0));
  CorpusArgs c;
  c.refs = dir / "refs";
  c.collections = coll;
  c.offsets = {6.0, -6.0};
  c.replications = 2;
  c.seed = 5;
  c.options.background_label = "street-traffic";
  bool corpus_same = true;
  for (CorpusMode mode : {CorpusMode::Instance, CorpusMode::Abstract}) {
    c.mode = mode;
    c.jobs = 1;
    c.out = dir / ("corpus_a_" + std::string(to_string(mode)));
    cmd_corpus(c);
    c.jobs = 2;
    c.out = dir / ("corpus_b_" + std::string(to_string(mode)));
    cmd_corpus(c);
    corpus_same = corpus_same && artifact_hashes(dir / ("corpus_a_" + std::string(to_string(mode)))) ==
                                     artifact_hashes(dir / ("corpus_b_" + std::string(to_string(mode))));
  }
  detail = fmt::format("generate: {} files identical={}, 60 s scene at 44.1 kHz in {:.2f} s; corpus reruns "
                       "identical={}",
                       ha.size(), ha == hb, gen_seconds, corpus_same);
  return ha == hb && ha.size() >= 7 && corpus_same && gen_seconds < 60.0;
}

bool ac2_stem_sum(std::string& detail) {
  const int rate = 8000;
  CollectionSet set;
  set.emplace("dog-bark", make_collection("dog-bark", CollectionKind::Event,
                                          testsupport::event_clips(1, 5, rate, 0.2, 1.5)));
  set.emplace("door-knock", make_collection("door-knock", CollectionKind::Event,
                                            testsupport::event_clips(2, 3, rate, 0.1, 0.4)));
  set.emplace("street-traffic", make_collection("street-traffic", CollectionKind::Texture,
                                                testsupport::texture_clips(3, 4, rate, 3.0)));
  set.emplace("city-park", make_collection("city-park", CollectionKind::Texture,
                                           testsupport::texture_clips(4, 2, rate, 6.0)));
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int scene = 0; scene < 50; ++scene) {
    SceneSpec s;
    s.duration = 5.0 + 15.0 * u(gen);
    s.sample_rate = rate;
    s.background_ref = "street-traffic";
    s.tracks.push_back(texture("street-traffic", s.duration, -20.0 + 20.0 * u(gen)));
    if (u(gen) < 0.5) {
      TrackSpec park = texture("city-park", s.duration * (0.5 + 0.5 * u(gen)), 10.0 * u(gen) - 5.0);
      park.start_time = park.end_time * 0.3 * u(gen);
      s.tracks.push_back(park);
    }
    for (const char* label : {"dog-bark", "door-knock"}) {
      const double start = s.duration * 0.3 * u(gen);
      s.tracks.push_back(events(label, 20.0 * u(gen) - 12.0, 4.0 * u(gen), 0.2 + 2.0 * u(gen), u(gen), start,
                                start + 1.0 + (s.duration - start - 1.0) * u(gen)));
    }
    const SceneOutput out = render_scene(s, set, 1000 + scene);
    for (std::size_t n = 0; n < out.mix.size(); ++n) {
      double sum = 0.0;
      for (const Stem& st : out.stems) {
        sum += st.audio[n];
      }
      worst = std::max(worst, std::abs(out.mix[n] - sum));
    }
  }
  detail = fmt::format("max |mix - sum(stems)| over 50 random scenes = {:.3g}", worst);
  return worst <= 1e-6;
}

bool ac3_ebr_realization(std::string& detail) {
  TempDir dir("ac3");
  const int rate = 16000;
  CollectionSet set;
  set.emplace("dog-bark", make_collection("dog-bark", CollectionKind::Event,
                                          testsupport::event_clips(11, 6, rate, 0.2, 0.8)));
  set.emplace("phone-ring", make_collection("phone-ring", CollectionKind::Event,
                                            testsupport::event_clips(12, 4, rate, 0.3, 1.0)));
  set.emplace("street-traffic", make_collection("street-traffic", CollectionKind::Texture,
                                                testsupport::texture_clips(13, 4, rate, 5.0)));
  std::size_t total = 0;
  for (int scene = 0; scene < 20; ++scene) {
    SceneSpec s;
    s.duration = 30.0;
    s.sample_rate = rate;
    s.background_ref = "street-traffic";
    // sigma^a = 0; intervals well above the longest clip keep events apart
    s.tracks = {texture("street-traffic", 30.0), events("dog-bark", -6.0 + scene % 5, 0.0, 2.5, 0.3, 0.2, 29.0),
                events("phone-ring", 3.0 - scene % 7, 0.0, 3.0, 0.4, 0.7, 28.0)};
    const SceneOutput out = render_scene(s, set, 500 + scene);
    total += out.annotations.size();
    write_scene(dir / fmt::format("scene{:02d}", scene), out, SampleFormat::Float32);
  }
  const AuditReport report = audit_corpus(dir.path());
  detail = fmt::format("{}/{} re-measured events within 0.1 dB ({} events rendered), fraction {:.4f}",
                       report.ebr_within, report.ebr_checked, total, report.ebr_fraction());
  return report.ebr_checked >= total * 9 / 10 && report.ebr_fraction() >= 0.99 && report.stem_sum_ok;
}

bool ac4_corpus_arithmetic(std::string& detail, fs::path& corpus_root, TempDir& dir) {
  const int rate = 2000;
  testsupport::write_fixture_collections(dir / "collections", rate, 40);
  testsupport::write_reference_couples(dir / "refs", testsupport::make_reference_couples(21, 22, 3.0));
  CorpusArgs c;
  c.refs = dir / "refs";
  c.collections = dir / "collections";
  c.out = dir / "corpus";
  c.offsets = {6.0, 0.0, -6.0, -12.0};
  c.replications = 10;
  c.seed = 1;
  c.options.background_label = "street-traffic";
  c.options.texture_overlap = 0.5;
  c.jobs = 2;
  const auto t0 = Clock::now();
  cmd_corpus(c);
  corpus_root = c.out;

  std::map<std::string, std::size_t> per_offset;
  for (const auto& e : fs::directory_iterator(c.out)) {
    if (!e.is_directory()) {
      continue;
    }
    std::size_t n = 0;
    for (const auto& s : fs::recursive_directory_iterator(e.path())) {
      n += s.path().filename() == "mix.wav" ? 1 : 0;
    }
    per_offset[e.path().filename().string()] = n;
  }
  const std::map<std::string, std::size_t> want{{"ebr_+6", 220}, {"ebr_0", 220}, {"ebr_-6", 220}, {"ebr_-12", 220}};

  // EBR deltas between sub-corpora, event by event
  double worst = 0.0;
  std::size_t compared = 0;
  bool structure_ok = true;
  for (const auto& couple : testsupport::make_reference_couples(21, 22, 3.0)) {
    for (int rep = 0; rep < 10; ++rep) {
      const fs::path rel = fs::path(couple.id) / fmt::format("{:02d}", rep);
      const auto base = read_sidecar(c.out / "ebr_0" / rel / "annotation.json").events;
      for (double o : c.offsets) {
        const auto other = read_sidecar(c.out / offset_dir_name(o) / rel / "annotation.json").events;
        structure_ok = structure_ok && other.size() == base.size();
        for (std::size_t i = 0; i < std::min(base.size(), other.size()); ++i) {
          structure_ok = structure_ok && other[i].onset == base[i].onset && other[i].label == base[i].label;
          worst = std::max(worst, std::abs((*other[i].ebr - *base[i].ebr) - o));
          ++compared;
        }
        const auto meta = read_json(c.out / offset_dir_name(o) / rel / "meta.json");
        structure_ok = structure_ok && meta.at("config").at("ebr_offset").get<double>() == o;
      }
    }
  }
  const auto manifest = read_json(c.out / "manifest.json");
  std::string counts;
  for (const auto& [name, n] : per_offset) {
    counts += fmt::format("{}{}={}", counts.empty() ? "" : ", ", name, n);
  }
  detail = fmt::format("scenes per sub-corpus {}; manifest {} scenes; {} event EBR deltas, max deviation from "
                       "offset {:.3g} dB; built in {:.1f} s",
                       counts, manifest.at("scene_count").get<int>(), compared, worst,
                       seconds_since(t0));
  return per_offset == want && manifest.at("scene_count") == 880 && structure_ok && compared > 0 &&
         worst <= 1e-9;
}

bool ac5_boundaries(std::string& detail) {
  const bool instance = should_trim_to_annotation(2.5, 2.0) && !should_trim_to_annotation(2.4, 2.0);
  const double eps = 1e-6;
  const bool abstract_rule = abstract_clip_duration(2.0 + 1.0 + 5.0 + eps, 2.0, 1.0) == 8.0 &&
                             abstract_clip_duration(2.0 + 1.0 + 5.0 - eps, 2.0, 1.0) == 8.0 - eps;

  // End to end: instance placement and abstract event tracks.
  const int rate = 8000;
  std::mt19937_64 gen(5);
  CollectionSet set;
  set.emplace("street-traffic", make_collection("street-traffic", CollectionKind::Texture,
                                                testsupport::texture_clips(1, 2, rate, 6.0)));
  set.emplace("fires-clip", make_collection("fires-clip", CollectionKind::Event,
                                            {testsupport::noise_clip(gen, 2.5, rate)}));
  set.emplace("holds-clip", make_collection("holds-clip", CollectionKind::Event,
                                            {testsupport::noise_clip(gen, 2.4, rate)}));
  ReferenceScene ref;
  ref.id = "boundary";
  ref.duration = 12.0;
  ref.annotations = {{1.0, 3.0, "fires-clip", 0.0, ""}, {6.0, 8.0, "holds-clip", 0.0, ""}};
  SimulationOptions opt;
  opt.background_label = "street-traffic";
  const SceneOutput inst = build_instance_scene(ref, set, 0.0, 1, opt);
  const double placed_fire = inst.annotations[0].offset - inst.annotations[0].onset;
  const double placed_hold = inst.annotations[1].offset - inst.annotations[1].onset;

  const auto long_ev = make_collection("long-clip", CollectionKind::Event,
                                       {testsupport::noise_clip(gen, 8.0 + 1.0 / rate, rate)});
  const auto short_ev = make_collection("long-clip", CollectionKind::Event,
                                        {testsupport::noise_clip(gen, 8.0 - 1.0 / rate, rate)});
  SceneSpec scene;
  scene.duration = 20.0;
  scene.sample_rate = rate;
  TrackSpec t = events("long-clip", 0.0, 0.0, 30.0, 0.0, 1.0, 2.0);
  t.duration_limit = DurationLimit{2.0, 1.0, 5.0};
  Rng r1(1);
  Rng r2(1);
  const double cut = generate_event_track(t, long_ev, 0.1, scene, r1).annotations.at(0).offset - 1.0;
  const double kept = generate_event_track(t, short_ev, 0.1, scene, r2).annotations.at(0).offset - 1.0;

  detail = fmt::format("instance: 2.5/2.0 s placed {:.4f} s, 2.4/2.0 s placed {:.4f} s; abstract: 8 s + 1 sample "
                       "-> {:.6f} s, 8 s - 1 sample -> {:.6f} s",
                       placed_fire, placed_hold, cut, kept);
  return instance && abstract_rule && std::abs(placed_fire - 2.0) < 1e-9 && std::abs(placed_hold - 2.4) < 1e-9 &&
         std::abs(cut - 8.0) < 1e-9 && std::abs(kept - (8.0 - 1.0 / rate)) < 1e-9;
}

bool ac6_abstract_round_trip(std::string& detail) {
  TempDir dir("ac6");
  const int rate = 8000;
  const fs::path coll = dir / "collections";
  testsupport::write_collection(coll, "dog-bark", CollectionKind::Event, testsupport::event_clips(61, 6, rate, 0.2, 0.6));
  testsupport::write_collection(coll, "door-knock", CollectionKind::Event, testsupport::event_clips(62, 6, rate, 0.1, 0.4));
  testsupport::write_collection(coll, "street-traffic", CollectionKind::Texture, testsupport::texture_clips(63, 4, rate, 8.0));

  const double mu_t = 2.0, sd_t = 0.5, mu_a = -6.0, sd_a = 2.0;
  SceneSpec s;
  s.duration = 440.0;
  s.sample_rate = rate;
  s.seed = 99;
  s.background_ref = "street-traffic";
  s.tracks = {texture("street-traffic", 440.0), events("dog-bark", mu_a, sd_a, mu_t, sd_t, 0.0, 430.0),
              events("door-knock", mu_a, sd_a, mu_t, sd_t, 0.5, 430.0)};
  write_json(dir / "scene.json", to_json(s));

  const auto t0 = Clock::now();
  cmd_generate({dir / "scene.json", coll, dir / "scene", std::nullopt, SampleFormat::Float32, ChannelPolicy::Reject});
  const auto params = cmd_stats({dir / "scene", dir / "stats"});
  const double elapsed = seconds_since(t0);

  bool ok = params.size() == 1 && params[0].classes.size() == 2;
  std::string parts;
  for (const ClassParams& c : params.at(0).classes) {
    const double n_ev = static_cast<double>(c.count);
    const double n_iv = n_ev - 1.0;
    // standard errors of a normal sample's mean and standard deviation
    const auto within = [](double est, double truth, double se) { return std::abs(est - truth) <= 3.0 * se; };
    const bool c_ok = c.count >= 200 && within(c.interval_mean, mu_t, sd_t / std::sqrt(n_iv)) &&
                      within(c.interval_std, sd_t, sd_t / std::sqrt(2.0 * (n_iv - 1.0))) &&
                      within(c.ebr_mean, mu_a, sd_a / std::sqrt(n_ev)) &&
                      within(c.ebr_std, sd_a, sd_a / std::sqrt(2.0 * (n_ev - 1.0)));
    ok = ok && c_ok;
    parts += fmt::format("{} n={} mu_t={:.3f} sd_t={:.3f} mu_a={:.3f} sd_a={:.3f}; ", c.label, c.count,
                         c.interval_mean, c.interval_std, c.ebr_mean, c.ebr_std);
  }
  detail = parts + fmt::format("{:.1f} s", elapsed);
  return ok && elapsed < 120.0;
}

bool ac7_metric_oracle(std::string& detail, const fs::path& corpus_root) {
  std::mt19937_64 gen(314159);
  int agree = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto refs = oracle::random_events(gen, 8, 3);
    const auto dets = oracle::random_events(gen, 8, 3);
    const EvalConfig cfg;
    const double greedy = evaluate(refs, dets, cfg).cwebf;
    const double brute = oracle::cwebf(refs, dets, cfg.onset_tolerance);
    agree += match_events(refs, dets, cfg).size() == oracle::max_matching(refs, dets, cfg.onset_tolerance) &&
                     greedy == brute
                 ? 1
                 : 0;
  }
  std::size_t scenes = 0;
  std::size_t perfect = 0;
  for (const auto& e : fs::recursive_directory_iterator(corpus_root)) {
    if (e.path().filename() == "annotation.txt") {
      const auto ann = parse_annotations(e.path());
      ++scenes;
      perfect += evaluate(ann, ann, EvalConfig{}).cwebf == 1.0 ? 1 : 0;
    }
  }
  detail = fmt::format("greedy = brute force on {}/1000 instances; self-evaluation CWEBF 1.0 on {}/{} corpus scenes",
                       agree, perfect, scenes);
  return agree == 1000 && scenes > 0 && perfect == scenes;
}

bool ac8_class_normalization(std::string& detail) {
  std::mt19937_64 gen(2718);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto refs = oracle::random_events(gen, 8, 4);
    auto dets = oracle::random_events(gen, 8, 4);
    const double before = evaluate(refs, dets, EvalConfig{}).cwebf;
    const std::string label = "c" + std::to_string(trial % 4);
    for (auto* list : {&refs, &dets}) {
      std::vector<EventAnnotation> extra;
      for (const auto& e : *list) {
        if (e.label == label) {
          extra.push_back(e);
        }
      }
      list->insert(list->end(), extra.begin(), extra.end());
    }
    worst = std::max(worst, std::abs(evaluate(refs, dets, EvalConfig{}).cwebf - before));
  }
  detail = fmt::format("max CWEBF change after duplicating one class over 1000 instances = {:.3g}", worst);
  return worst <= 1e-12;
}

bool ac9_sampler(std::string& detail) {
  bool ok = true;
  std::string parts;
  for (std::size_t size : {2u, 3u, 5u, 10u}) {
    const auto c = make_collection("dog-bark", CollectionKind::Event, testsupport::event_clips(size, size, 8000, 0.05, 0.1));
    Rng rng(derive_seed(9, {size}));
    DrawState state;
    std::vector<std::vector<double>> counts(size, std::vector<double>(size, 0.0));
    std::size_t prev = draw_index(c, state, rng);
    int repeats = 0;
    for (int i = 0; i < 100000; ++i) {
      const std::size_t k = draw_index(c, state, rng);
      repeats += k == prev ? 1 : 0;
      counts[prev][k] += 1.0;
      prev = k;
    }
    double chi2 = 0.0;
    int df = 0;
    for (std::size_t a = 0; a < size; ++a) {
      double row = 0.0;
      for (double v : counts[a]) {
        row += v;
      }
      const double expected = row / static_cast<double>(size - 1);
      for (std::size_t b = 0; b < size; ++b) {
        if (b != a) {
          chi2 += (counts[a][b] - expected) * (counts[a][b] - expected) / expected;
        }
      }
      df += static_cast<int>(size) - 2;
    }
    double p = 1.0;
    if (df > 0) {
      p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(df), chi2));
    }
    ok = ok && repeats == 0 && p > 0.01;
    parts += fmt::format("|c|={}: repeats={} chi2={:.2f} df={} p={:.3f}; ", size, repeats, chi2, df, p);
  }
  detail = parts;
  return ok;
}

bool ac10_crossfade(std::string& detail) {
  std::mt19937_64 gen(161803);
  const int rate = 44100;
  double worst_db = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const AudioClip a = testsupport::noise_clip(gen, 3.0, rate, 0.1);
    const AudioClip b = testsupport::noise_clip(gen, 3.0, rate, 0.1);
    const std::vector<AudioClip> both{a, b};
    const AudioClip joined = crossfade_concat(both, 1.0);
    const double level = rms(joined, 2 * rate, rate);
    worst_db = std::max(worst_db, std::abs(20.0 * std::log10(level / 0.1)));
  }
  double worst_w = 0.0;
  for (std::size_t overlap : {1u, 10u, 441u, 44100u}) {
    for (std::size_t k = 0; k < overlap; ++k) {
      const auto [w_out, w_in] = equal_power_weights(k, overlap);
      worst_w = std::max(worst_w, std::abs(w_out * w_out + w_in * w_in - 1.0));
    }
  }
  detail = fmt::format("max overlap RMS deviation {:.3f} dB; max |cos^2 + sin^2 - 1| = {:.3g}", worst_db, worst_w);
  return worst_db <= 1.0 && worst_w <= 1e-9;
}

}  // namespace

int main() {
  TempDir shared("acceptance");
  fs::path corpus_root;
  const std::vector<std::pair<std::string, std::function<bool(std::string&)>>> checks{
      {"AC1 determinism of generate and corpus", ac1_determinism},
      {"AC2 mix equals the sum of stems", ac2_stem_sum},
      {"AC3 EBR realization", ac3_ebr_realization},
      {"AC4 corpus arithmetic 22 x 10 x 4", [&](std::string& d) { return ac4_corpus_arithmetic(d, corpus_root, shared); }},
      {"AC5 trimming and truncation boundaries", ac5_boundaries},
      {"AC6 abstract parameter round trip", ac6_abstract_round_trip},
      {"AC7 metric oracle and self-evaluation",
       [&](std::string& d) { return !corpus_root.empty() && ac7_metric_oracle(d, corpus_root); }},
      {"AC8 class normalization", ac8_class_normalization},
      {"AC9 sampler properties", ac9_sampler},
      {"AC10 crossfade power", ac10_crossfade},
  };
  int failed = 0;
  for (const auto& [name, check] : checks) {
    std::string detail;
    bool ok = false;
    const auto t0 = Clock::now();
    try {
      ok = check(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    failed += ok ? 0 : 1;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << " (" << fmt::format("{:.1f}", seconds_since(t0))
              << " s): " << detail << std::endl;
  }
  std::cout << (failed == 0 ? "all acceptance criteria passed" : fmt::format("{} criteria failed", failed))
            << std::endl;
  return failed == 0 ? 0 : 1;
}
