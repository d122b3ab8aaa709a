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

#ifndef COUGHSEG_WAV_HPP_
#define COUGHSEG_WAV_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "coughseg/audio_clip.hpp"

namespace coughseg {

/// Decodes a RIFF/WAVE file holding PCM integer (8/16/24/32 bit) or IEEE
/// float (32 bit) samples. Integer samples are divided by the full-scale
/// value of their type, channels are averaged per frame and the source id is
/// the file stem.
AudioClip load_audio(const std::filesystem::path& path);

/// Same as load_audio on an in-memory file image.
AudioClip decode_wav(std::span<const std::uint8_t> bytes,
                     std::string source_id);

/// Encodes a clip as 16-bit PCM mono with the canonical 44-byte header.
std::vector<std::uint8_t> encode_wav(const AudioClip& clip);

/// Writes encode_wav(clip) to `path`. Empty clips are rejected.
void write_wav(const AudioClip& clip, const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

}  // namespace coughseg

#endif  // COUGHSEG_WAV_HPP_
