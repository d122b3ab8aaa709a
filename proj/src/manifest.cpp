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

#include "coughseg/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>

#include "coughseg/wav.hpp"

namespace coughseg {

using nlohmann::json;

void SegmentManifest::validate() const {
  std::set<std::string> seen;
  for (const auto& entry : entries) {
    if (entry.files.size() != entry.segments.size()) {
      throw ValidationError("manifest entry '" + entry.source_id +
                            "': file count differs from segment count");
    }
    for (const auto& seg : entry.segments) {
      if (seg.start_sample < 0 || seg.end_sample <= seg.start_sample) {
        throw ValidationError("manifest entry '" + entry.source_id +
                              "': segment with empty or negative range");
      }
    }
    for (const auto& file : entry.files) {
      if (!seen.insert(file).second) {
        throw ValidationError("manifest: duplicate filename '" + file + "'");
      }
    }
  }
}

std::vector<std::string> SegmentManifest::all_files() const {
  std::vector<std::string> files;
  for (const auto& entry : entries) {
    files.insert(files.end(), entry.files.begin(), entry.files.end());
  }
  return files;
}

json params_to_json(const HysteresisParams& p) {
  return json{{"low_mult", p.low_mult},
              {"high_mult", p.high_mult},
              {"min_len_ms", p.min_len_ms},
              {"pad_ms", p.pad_ms},
              {"envelope_window_ms", p.envelope_window_ms},
              {"envelope_hop_ms", p.envelope_hop_ms}};
}

json params_to_json(const RmsThresholdParams& p) {
  return json{{"threshold", p.threshold},
              {"frame_ms", p.frame_ms},
              {"min_len_ms", p.min_len_ms},
              {"max_len_ms", p.max_len_ms},
              {"context_frames", p.context_frames}};
}

std::string sanitize_id(std::string_view id) {
  std::string out(id);
  for (char& c : out) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                    (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
    if (!ok) c = '_';
  }
  return out;
}

std::string segment_filename(std::string_view source_id, Method method,
                             std::size_t index) {
  char suffix[16];
  std::snprintf(suffix, sizeof suffix, "_%03zu.wav", index);
  return sanitize_id(source_id) + "_" + std::string(method_name(method)) + suffix;
}

ManifestEntry export_segments(const AudioClip& clip,
                              const std::vector<SegmentBounds>& segments,
                              const std::filesystem::path& out_dir,
                              Method method, const json& params,
                              bool overwrite) {
  ManifestEntry entry;
  entry.source_id = clip.source_id;
  entry.method = method;
  entry.params = params;
  entry.segments = segments;

  Eigen::Index previous_start = 0;
  for (const auto& seg : segments) {
    if (seg.start_sample < 0 || seg.end_sample <= seg.start_sample ||
        seg.end_sample > clip.size()) {
      throw ValidationError("export: segment [" + std::to_string(seg.start_sample) +
                            ", " + std::to_string(seg.end_sample) +
                            ") outside clip '" + clip.source_id + "'");
    }
    if (seg.start_sample < previous_start) {
      throw ValidationError("export: segments of '" + clip.source_id +
                            "' not sorted by start");
    }
    previous_start = seg.start_sample;
  }

  for (std::size_t i = 0; i < segments.size(); ++i) {
    entry.files.push_back(segment_filename(clip.source_id, method, i));
    if (!overwrite && std::filesystem::exists(out_dir / entry.files.back())) {
      throw IoError("export: '" + (out_dir / entry.files.back()).string() +
                    "' already exists");
    }
  }
  for (std::size_t i = 0; i < segments.size(); ++i) {
    write_wav(slice(clip, segments[i].start_sample, segments[i].end_sample),
              out_dir / entry.files[i]);
  }
  return entry;
}

void to_json(json& j, const SegmentManifest& manifest) {
  json entries = json::array();
  for (const auto& e : manifest.entries) {
    json segments = json::array();
    for (const auto& s : e.segments) {
      segments.push_back({{"start_sample", s.start_sample},
                          {"end_sample", s.end_sample}});
    }
    entries.push_back({{"source_id", e.source_id},
                       {"method", std::string(method_name(e.method))},
                       {"params", e.params},
                       {"segments", std::move(segments)},
                       {"files", e.files}});
  }
  j = json{{"tool_version", manifest.tool_version},
           {"created_at", manifest.created_at},
           {"entries", std::move(entries)}};
}

void from_json(const json& j, SegmentManifest& manifest) {
  manifest.tool_version = j.at("tool_version").get<std::string>();
  manifest.created_at = j.at("created_at").get<std::string>();
  manifest.entries.clear();
  for (const auto& je : j.at("entries")) {
    ManifestEntry e;
    e.source_id = je.at("source_id").get<std::string>();
    e.method = parse_method(je.at("method").get<std::string>());
    e.params = je.value("params", json::object());
    for (const auto& js : je.at("segments")) {
      e.segments.push_back({js.at("start_sample").get<Eigen::Index>(),
                            js.at("end_sample").get<Eigen::Index>(), e.method,
                            e.source_id});
    }
    e.files = je.at("files").get<std::vector<std::string>>();
    manifest.entries.push_back(std::move(e));
  }
}

void save_manifest(const SegmentManifest& manifest,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << json(manifest).dump(2) << '\n';
  if (!out) throw IoError("write error on '" + path.string() + "'");
}

SegmentManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest '" + path.string() + "'");
  SegmentManifest manifest;
  try {
    manifest = json::parse(in).get<SegmentManifest>();
  } catch (const json::exception& e) {
    throw ValidationError("manifest '" + path.string() + "': " + e.what());
  }
  manifest.validate();
  return manifest;
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace coughseg
