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

#ifndef COUGHSEG_MANIFEST_HPP_
#define COUGHSEG_MANIFEST_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coughseg/audio_clip.hpp"
#include "coughseg/segmentation.hpp"

namespace coughseg {

/// Results of segmenting one source file.
struct ManifestEntry {
  std::string source_id;
  Method method = Method::kHysteresis;
  nlohmann::json params = nlohmann::json::object();
  std::vector<SegmentBounds> segments;
  std::vector<std::string> files;
};

struct SegmentManifest {
  std::string tool_version;
  std::string created_at;
  std::vector<ManifestEntry> entries;

  /// Checks files.size() == segments.size() per entry and that every
  /// filename is unique across the manifest.
  void validate() const;

  /// Every exported filename in manifest order.
  std::vector<std::string> all_files() const;
};

nlohmann::json params_to_json(const HysteresisParams& params);
nlohmann::json params_to_json(const RmsThresholdParams& params);

/// Keeps [A-Za-z0-9._-] and maps anything else to '_'.
std::string sanitize_id(std::string_view id);

/// `{source_id}_{method}_{index:03}.wav`
std::string segment_filename(std::string_view source_id, Method method,
                             std::size_t index);

/// Writes one 16-bit WAV per segment into out_dir and returns the manifest
/// entry describing them. Fails before writing anything if a target file
/// already exists and `overwrite` is false.
ManifestEntry export_segments(const AudioClip& clip,
                              const std::vector<SegmentBounds>& segments,
                              const std::filesystem::path& out_dir,
                              Method method,
                              const nlohmann::json& params = nlohmann::json::object(),
                              bool overwrite = false);

void to_json(nlohmann::json& j, const SegmentManifest& manifest);
void from_json(const nlohmann::json& j, SegmentManifest& manifest);

void save_manifest(const SegmentManifest& manifest,
                   const std::filesystem::path& path);
SegmentManifest load_manifest(const std::filesystem::path& path);

/// ISO-8601 UTC time, second resolution.
std::string utc_timestamp();

}  // namespace coughseg

#endif  // COUGHSEG_MANIFEST_HPP_
