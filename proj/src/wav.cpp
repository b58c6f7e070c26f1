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

#include "scenesim/wav.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "scenesim/errors.hpp"

namespace scenesim {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

class ByteWriter {
 public:
  void tag(const char (&id)[5]) { bytes_.insert(bytes_.end(), id, id + 4); }
  void u16(std::uint16_t v) {
    bytes_.push_back(static_cast<std::uint8_t>(v & 0xFF));
    bytes_.push_back(static_cast<std::uint8_t>(v >> 8));
  }
  void u32(std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) {
      bytes_.push_back(static_cast<std::uint8_t>((v >> shift) & 0xFF));
    }
  }
  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

struct FormatChunk {
  std::uint16_t tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
  std::uint16_t block_align = 0;
};

double decode_sample(const std::uint8_t* p, const FormatChunk& fmt) {
  if (fmt.tag == kFormatFloat) {
    if (fmt.bits == 32) {
      return static_cast<double>(std::bit_cast<float>(read_u32(p)));
    }
    const std::uint64_t lo = read_u32(p);
    const std::uint64_t hi = read_u32(p + 4);
    return std::bit_cast<double>(lo | (hi << 32));
  }
  switch (fmt.bits) {
    case 8:
      return (static_cast<int>(p[0]) - 128) / 128.0;
    case 16:
      return static_cast<std::int16_t>(read_u16(p)) / 32768.0;
    case 24: {
      std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
      if (v & 0x800000) {
        v -= 0x1000000;
      }
      return v / 8388608.0;
    }
    default:
      return static_cast<std::int32_t>(read_u32(p)) / 2147483648.0;
  }
}

}  // namespace

SampleFormat parse_sample_format(std::string_view name) {
  if (name == "float32") {
    return SampleFormat::Float32;
  }
  if (name == "pcm16") {
    return SampleFormat::Pcm16;
  }
  throw ConfigError("unknown sample format '" + std::string(name) + "' (expected float32 or pcm16)");
}

std::string_view to_string(SampleFormat format) {
  return format == SampleFormat::Float32 ? "float32" : "pcm16";
}

AudioClip read_audio(const std::filesystem::path& path, ChannelPolicy channels) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open audio file " + path.string());
  }
  const std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                       std::istreambuf_iterator<char>());
  const auto fail = [&](const std::string& why) {
    return FormatError(path.string() + ": " + why);
  };
  if (data.size() < 12 || std::memcmp(data.data(), "RIFF", 4) != 0 ||
      std::memcmp(data.data() + 8, "WAVE", 4) != 0) {
    throw fail("not a RIFF/WAVE file");
  }

  std::optional<FormatChunk> fmt;
  const std::uint8_t* payload = nullptr;
  std::size_t payload_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= data.size()) {
    const std::uint8_t* chunk = data.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    if (size > data.size() - body) {
      // Truncated data chunks are common from streaming writers; take what exists.
      if (std::memcmp(chunk, "data", 4) != 0) {
        throw fail("chunk extends past end of file");
      }
    }
    const std::size_t available = std::min<std::size_t>(size, data.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (available < 16) {
        throw fail("fmt chunk too short");
      }
      FormatChunk f;
      f.tag = read_u16(chunk + 8);
      f.channels = read_u16(chunk + 10);
      f.sample_rate = read_u32(chunk + 12);
      f.block_align = read_u16(chunk + 20);
      f.bits = read_u16(chunk + 22);
      if (f.tag == kFormatExtensible) {
        if (available < 40) {
          throw fail("extensible fmt chunk too short");
        }
        // First two bytes of the subformat GUID carry the actual format tag.
        f.tag = read_u16(chunk + 8 + 24);
      }
      fmt = f;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      payload = chunk + 8;
      payload_size = available;
    }
    pos = body + available + (available & 1U);
  }

  if (!fmt) {
    throw fail("missing fmt chunk");
  }
  if (payload == nullptr) {
    throw fail("missing data chunk");
  }
  const bool pcm_ok = fmt->tag == kFormatPcm &&
                      (fmt->bits == 8 || fmt->bits == 16 || fmt->bits == 24 || fmt->bits == 32);
  const bool float_ok = fmt->tag == kFormatFloat && (fmt->bits == 32 || fmt->bits == 64);
  if (!pcm_ok && !float_ok) {
    throw fail("unsupported encoding (format tag " + std::to_string(fmt->tag) + ", " +
               std::to_string(fmt->bits) + " bits)");
  }
  if (fmt->channels == 0 || fmt->sample_rate == 0 ||
      fmt->sample_rate > static_cast<std::uint32_t>(std::numeric_limits<int>::max())) {
    throw fail("invalid channel count or sample rate");
  }
  if (fmt->channels > 1 && channels == ChannelPolicy::Reject) {
    throw fail(std::to_string(fmt->channels) + " channels; only mono input is accepted");
  }
  const std::size_t sample_bytes = fmt->bits / 8;
  const std::size_t frame_bytes = sample_bytes * fmt->channels;
  if (fmt->block_align != 0 && fmt->block_align != frame_bytes) {
    throw fail("block alignment does not match channels * sample size");
  }

  const std::size_t frames = payload_size / frame_bytes;
  std::vector<double> samples(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    const std::uint8_t* frame = payload + i * frame_bytes;
    double sum = 0.0;
    for (std::size_t c = 0; c < fmt->channels; ++c) {
      sum += decode_sample(frame + c * sample_bytes, *fmt);
    }
    samples[i] = sum / fmt->channels;
  }
  return AudioClip(std::move(samples), static_cast<int>(fmt->sample_rate));
}

void write_audio(const std::filesystem::path& path, const AudioClip& clip, SampleFormat format) {
  const bool is_float = format == SampleFormat::Float32;
  const std::uint16_t bits = is_float ? 32 : 16;
  const std::uint16_t block_align = bits / 8;
  const std::uint64_t data_bytes = static_cast<std::uint64_t>(clip.size()) * block_align;
  // RIFF size: "WAVE" + fmt chunk + [fact chunk] + data chunk header + data.
  const std::uint64_t riff_size = 4 + (8 + (is_float ? 18 : 16)) + (is_float ? 12 : 0) + 8 + data_bytes;
  if (riff_size > 0xFFFFFFFFULL) {
    throw std::length_error("write_audio: clip too long for a RIFF container");
  }

  ByteWriter w;
  w.tag("RIFF");
  w.u32(static_cast<std::uint32_t>(riff_size));
  w.tag("WAVE");
  w.tag("fmt ");
  w.u32(is_float ? 18 : 16);
  w.u16(is_float ? kFormatFloat : kFormatPcm);
  w.u16(1);
  w.u32(static_cast<std::uint32_t>(clip.sample_rate()));
  w.u32(static_cast<std::uint32_t>(clip.sample_rate()) * block_align);
  w.u16(block_align);
  w.u16(bits);
  if (is_float) {
    w.u16(0);  // cbSize
    w.tag("fact");
    w.u32(4);
    w.u32(static_cast<std::uint32_t>(clip.size()));
  }
  w.tag("data");
  w.u32(static_cast<std::uint32_t>(data_bytes));
  w.bytes().reserve(w.bytes().size() + data_bytes);
  for (double x : clip.samples()) {
    if (is_float) {
      w.u32(std::bit_cast<std::uint32_t>(static_cast<float>(x)));
    } else {
      if (!(std::abs(x) <= 1.0)) {
        throw std::range_error("write_audio: sample " + std::to_string(x) +
                               " outside [-1, 1] cannot be stored as pcm16 without clipping");
      }
      const long q = std::clamp(std::lround(x * 32768.0), -32768L, 32767L);
      w.u16(static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    }
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot write audio file " + path.string());
  }
  out.write(reinterpret_cast<const char*>(w.bytes().data()),
            static_cast<std::streamsize>(w.bytes().size()));
  if (!out) {
    throw DataError("short write to " + path.string());
  }
}

}  // namespace scenesim
