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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "scenesim/errors.hpp"
#include "scenesim/wav.hpp"
#include "support.hpp"

using namespace scenesim;
using testsupport::TempDir;

namespace {

// Minimal independent RIFF writer for inputs the library never writes.
struct Bytes {
  std::string data;
  void u16(std::uint16_t v) {
    data.push_back(static_cast<char>(v & 0xff));
    data.push_back(static_cast<char>(v >> 8));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
      data.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
  }
  void tag(const char* t) { data.append(t, 4); }
};

std::string riff(std::uint16_t tag, std::uint16_t channels, std::uint32_t rate, std::uint16_t bits,
                 const std::string& payload, bool extensible = false) {
  Bytes fmt;
  const std::uint16_t block = static_cast<std::uint16_t>(channels * bits / 8);
  fmt.u16(extensible ? 0xFFFE : tag);
  fmt.u16(channels);
  fmt.u32(rate);
  fmt.u32(rate * block);
  fmt.u16(block);
  fmt.u16(bits);
  if (extensible) {
    fmt.u16(22);
    fmt.u16(bits);
    fmt.u32(0);
    fmt.u16(tag);  // sub-format GUID starts with the format tag
    fmt.data.append("\x00\x00\x00\x00\x10\x00\x80\x00\x00\xAA\x00\x38\x9B\x71", 14);
  }
  Bytes out;
  out.tag("RIFF");
  out.u32(static_cast<std::uint32_t>(4 + 8 + fmt.data.size() + 8 + payload.size()));
  out.tag("WAVE");
  out.tag("fmt ");
  out.u32(static_cast<std::uint32_t>(fmt.data.size()));
  out.data += fmt.data;
  out.tag("data");
  out.u32(static_cast<std::uint32_t>(payload.size()));
  out.data += payload;
  return out.data;
}

void write_bytes(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream(p, std::ios::binary) << bytes;
}

std::string pcm16_payload(const std::vector<std::int16_t>& v) {
  Bytes b;
  for (auto s : v) {
    b.u16(static_cast<std::uint16_t>(s));
  }
  return b.data;
}

}  // namespace

TEST_CASE("float round trip of a 1000-sample ramp is exact") {
  TempDir dir("wav");
  std::vector<double> ramp(1000);
  for (std::size_t i = 0; i < ramp.size(); ++i) {
    ramp[i] = (static_cast<double>(i) - 500.0) / 1024.0;  // representable in float32
  }
  const AudioClip clip(ramp, 44100);
  write_audio(dir / "r.wav", clip, SampleFormat::Float32);
  const AudioClip back = read_audio(dir / "r.wav");
  CHECK(back == clip);
}

TEST_CASE("pcm16 round trip error is at most 2^-15") {
  TempDir dir("wav");
  std::vector<double> ramp(1000);
  for (std::size_t i = 0; i < ramp.size(); ++i) {
    ramp[i] = -1.0 + 2.0 * static_cast<double>(i) / 999.0;
  }
  const AudioClip clip(ramp, 22050);
  write_audio(dir / "r.wav", clip, SampleFormat::Pcm16);
  const AudioClip back = read_audio(dir / "r.wav");
  REQUIRE(back.size() == clip.size());
  CHECK(back.sample_rate() == 22050);
  double worst = 0.0;
  for (std::size_t i = 0; i < clip.size(); ++i) {
    worst = std::max(worst, std::abs(back[i] - clip[i]));
  }
  CHECK(worst <= std::ldexp(1.0, -15));
}

TEST_CASE("pcm16 refuses out-of-range samples") {
  TempDir dir("wav");
  CHECK_THROWS_AS(write_audio(dir / "x.wav", AudioClip({0.5, 1.5}, 8000), SampleFormat::Pcm16),
                  std::range_error);
  CHECK_NOTHROW(write_audio(dir / "y.wav", AudioClip({0.5, 1.5}, 8000), SampleFormat::Float32));
}

TEST_CASE("written headers follow the documented layout") {
  TempDir dir("wav");
  write_audio(dir / "p.wav", AudioClip({0.0, 0.5}, 8000), SampleFormat::Pcm16);
  const std::string p = testsupport::file_text(dir / "p.wav");
  CHECK(p.size() == 44 + 4);
  CHECK(p.substr(0, 4) == "RIFF");
  CHECK(p.substr(36, 4) == "data");
  write_audio(dir / "f.wav", AudioClip({0.0, 0.5}, 8000), SampleFormat::Float32);
  const std::string f = testsupport::file_text(dir / "f.wav");
  CHECK(f.size() == 12 + 26 + 12 + 8 + 8);
  CHECK(f.substr(38, 4) == "fact");
}

TEST_CASE("stereo input is rejected by default and averaged on request") {
  TempDir dir("wav");
  // Frames (L, R): (16384, 0), (-8192, 8192), (32767, 32767)
  write_bytes(dir / "st.wav", riff(1, 2, 8000, 16, pcm16_payload({16384, 0, -8192, 8192, 32767, 32767})));
  CHECK_THROWS_AS(read_audio(dir / "st.wav"), FormatError);
  CHECK_THROWS_AS(read_audio(dir / "st.wav", ChannelPolicy::Reject), FormatError);
  const AudioClip m = read_audio(dir / "st.wav", ChannelPolicy::Downmix);
  REQUIRE(m.size() == 3);
  CHECK(m[0] == doctest::Approx(0.25));
  CHECK(m[1] == doctest::Approx(0.0));
  CHECK(m[2] == doctest::Approx(32767.0 / 32768.0));
}

TEST_CASE("other integer widths and extensible headers decode") {
  TempDir dir("wav");
  SUBCASE("8-bit unsigned") {
    write_bytes(dir / "u8.wav", riff(1, 1, 8000, 8, std::string("\x80\xC0\x40", 3)));
    const AudioClip c = read_audio(dir / "u8.wav");
    REQUIRE(c.size() == 3);
    CHECK(c[0] == 0.0);
    CHECK(c[1] == doctest::Approx(0.5));
    CHECK(c[2] == doctest::Approx(-0.5));
  }
  SUBCASE("24-bit") {
    // 0x400000 = 0.5, 0xC00000 = -0.5
    write_bytes(dir / "s24.wav", riff(1, 1, 8000, 24, std::string("\x00\x00\x40\x00\x00\xC0", 6)));
    const AudioClip c = read_audio(dir / "s24.wav");
    REQUIRE(c.size() == 2);
    CHECK(c[0] == doctest::Approx(0.5));
    CHECK(c[1] == doctest::Approx(-0.5));
  }
  SUBCASE("extensible 16-bit") {
    write_bytes(dir / "ext.wav", riff(1, 1, 16000, 16, pcm16_payload({-16384}), true));
    const AudioClip c = read_audio(dir / "ext.wav");
    REQUIRE(c.size() == 1);
    CHECK(c.sample_rate() == 16000);
    CHECK(c[0] == doctest::Approx(-0.5));
  }
}

TEST_CASE("malformed files") {
  TempDir dir("wav");
  CHECK_THROWS_AS(read_audio(dir / "missing.wav"), DataError);
  write_bytes(dir / "junk.wav", "not a wave file at all");
  CHECK_THROWS_AS(read_audio(dir / "junk.wav"), FormatError);
  const std::string whole = riff(1, 1, 8000, 16, pcm16_payload({1, 2, 3, 4}));
  // a short data chunk keeps the complete frames
  write_bytes(dir / "short_data.wav", whole.substr(0, whole.size() - 3));
  CHECK(read_audio(dir / "short_data.wav").size() == 2);
  // a cut inside the fmt chunk is a header error
  write_bytes(dir / "short_fmt.wav", whole.substr(0, 24));
  CHECK_THROWS_AS(read_audio(dir / "short_fmt.wav"), FormatError);
  write_bytes(dir / "alaw.wav", riff(6, 1, 8000, 8, "\x01\x02"));
  CHECK_THROWS_AS(read_audio(dir / "alaw.wav"), FormatError);
}

TEST_CASE("sample format names") {
  CHECK(parse_sample_format("float32") == SampleFormat::Float32);
  CHECK(parse_sample_format("pcm16") == SampleFormat::Pcm16);
  CHECK_THROWS_AS(parse_sample_format("mp3"), ConfigError);
  CHECK(to_string(SampleFormat::Pcm16) == "pcm16");
}
