// Copyright 2026 The coughseg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coughseg/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>

namespace coughseg {
namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatIeeeFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

const char kConvertHint[] =
    "; convert externally to PCM WAV first (e.g. ffmpeg -i in.mp3 out.wav)";

std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xFF));
  }
}

void put_tag(std::vector<std::uint8_t>& out, const char (&tag)[5]) {
  out.insert(out.end(), tag, tag + 4);
}

struct FormatChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits_per_sample = 0;
};

FormatChunk parse_format(const std::uint8_t* p, std::uint32_t size,
                         const std::string& id) {
  if (size < 16) throw FormatError(id + ": fmt chunk shorter than 16 bytes");
  FormatChunk fmt;
  fmt.format = read_u16(p);
  fmt.channels = read_u16(p + 2);
  fmt.sample_rate = read_u32(p + 4);
  fmt.block_align = read_u16(p + 12);
  fmt.bits_per_sample = read_u16(p + 14);
  if (fmt.format == kFormatExtensible) {
    // cbSize(2) validBits(2) channelMask(4) then the sub-format GUID whose
    // first two bytes carry the actual format tag.
    if (size < 40) throw FormatError(id + ": truncated WAVE_FORMAT_EXTENSIBLE");
    fmt.format = read_u16(p + 24);
  }
  return fmt;
}

// Decodes one little-endian sample to [-1, 1].
double decode_sample(const std::uint8_t* p, const FormatChunk& fmt) {
  if (fmt.format == kFormatIeeeFloat) {
    float f;
    std::uint32_t bits = read_u32(p);
    std::memcpy(&f, &bits, sizeof f);
    return static_cast<double>(f);
  }
  switch (fmt.bits_per_sample) {
    case 8:
      return (static_cast<int>(p[0]) - 128) / 128.0;
    case 16:
      return static_cast<std::int16_t>(read_u16(p)) / 32768.0;
    case 24: {
      // Place the 24-bit word in the top of an int32 so the sign extends.
      const auto raw = (static_cast<std::uint32_t>(p[0]) << 8) |
                       (static_cast<std::uint32_t>(p[1]) << 16) |
                       (static_cast<std::uint32_t>(p[2]) << 24);
      return static_cast<std::int32_t>(raw) / 2147483648.0;
    }
    case 32:
      return static_cast<std::int32_t>(read_u32(p)) / 2147483648.0;
    default:
      return 0.0;  // unreachable, rejected in decode_wav
  }
}

}  // namespace

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read error on '" + path.string() + "'");
  return bytes;
}

AudioClip decode_wav(std::span<const std::uint8_t> bytes,
                     std::string source_id) {
  const std::string& id = source_id;
  if (bytes.size() >= 4 && bytes.size() < 12 &&
      std::memcmp(bytes.data(), "RIFF", 4) == 0) {
    throw FormatError(id + ": truncated RIFF header");
  }
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw UnsupportedCodecError(id + ": not a RIFF/WAVE file" + kConvertHint);
  }

  std::optional<FormatChunk> fmt;
  std::span<const std::uint8_t> data;
  bool have_data = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* header = bytes.data() + pos;
    const std::uint32_t chunk_size = read_u32(header + 4);
    const std::size_t body = pos + 8;
    if (chunk_size > bytes.size() - body) {
      throw FormatError(id + ": chunk '" +
                        std::string(reinterpret_cast<const char*>(header), 4) +
                        "' truncated");
    }
    if (std::memcmp(header, "fmt ", 4) == 0) {
      fmt = parse_format(bytes.data() + body, chunk_size, id);
    } else if (std::memcmp(header, "data", 4) == 0) {
      data = bytes.subspan(body, chunk_size);
      have_data = true;
    }
    pos = body + chunk_size + (chunk_size & 1u);
  }
  if (!fmt) throw FormatError(id + ": missing fmt chunk");
  if (!have_data) throw FormatError(id + ": missing data chunk");

  const bool is_int = fmt->format == kFormatPcm &&
                      (fmt->bits_per_sample == 8 || fmt->bits_per_sample == 16 ||
                       fmt->bits_per_sample == 24 || fmt->bits_per_sample == 32);
  const bool is_float =
      fmt->format == kFormatIeeeFloat && fmt->bits_per_sample == 32;
  if (!is_int && !is_float) {
    throw UnsupportedCodecError(
        id + ": unsupported codec (format tag " + std::to_string(fmt->format) +
        ", " + std::to_string(fmt->bits_per_sample) + " bit)" + kConvertHint);
  }
  if (fmt->channels == 0) throw FormatError(id + ": zero channels");
  if (fmt->sample_rate == 0) throw FormatError(id + ": zero sample rate");
  const std::size_t bytes_per_sample = fmt->bits_per_sample / 8;
  const std::size_t frame_bytes = bytes_per_sample * fmt->channels;
  if (fmt->block_align != frame_bytes) {
    throw FormatError(id + ": block align does not match channels x width");
  }

  const std::size_t frames = data.size() / frame_bytes;
  AudioClip clip;
  clip.sample_rate = static_cast<int>(fmt->sample_rate);
  clip.source_id = std::move(source_id);
  clip.samples.resize(static_cast<Eigen::Index>(frames));
  for (std::size_t f = 0; f < frames; ++f) {
    const std::uint8_t* frame = data.data() + f * frame_bytes;
    double sum = 0.0;
    for (std::size_t c = 0; c < fmt->channels; ++c) {
      double x = decode_sample(frame + c * bytes_per_sample, *fmt);
      if (!std::isfinite(x)) {
        throw FormatError(clip.source_id + ": non-finite float sample at frame " +
                          std::to_string(f));
      }
      sum += std::clamp(x, -1.0, 1.0);
    }
    clip.samples[static_cast<Eigen::Index>(f)] =
        static_cast<float>(sum / fmt->channels);
  }
  return clip;
}

AudioClip load_audio(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return decode_wav(bytes, path.stem().string());
}

std::vector<std::uint8_t> encode_wav(const AudioClip& clip) {
  if (clip.empty()) {
    throw ValidationError("refusing to write empty clip '" + clip.source_id +
                          "' (empty segment upstream)");
  }
  validate_clip(clip);
  const auto data_bytes = static_cast<std::uint32_t>(clip.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (Eigen::Index i = 0; i < clip.size(); ++i) {
    const double scaled = std::round(static_cast<double>(clip.samples[i]) * 32768.0);
    const auto q = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
    put_u16(out, static_cast<std::uint16_t>(q));
  }
  return out;
}

void write_wav(const AudioClip& clip, const std::filesystem::path& path) {
  const auto bytes = encode_wav(clip);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write error on '" + path.string() + "'");
}

}  // namespace coughseg
