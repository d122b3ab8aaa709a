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

#ifndef COUGHSEG_SERVER_HPP_
#define COUGHSEG_SERVER_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "coughseg/annotations.hpp"
#include "coughseg/audio_clip.hpp"
#include "coughseg/manifest.hpp"

namespace httplib {
class Server;
}

namespace coughseg {

inline constexpr std::size_t kMaxPeakPairs = 2000;

/// Min/max over min(max_pairs, size) equal-width buckets; bucket b covers
/// samples [b*size/B, (b+1)*size/B).
std::vector<std::array<float, 2>> waveform_peaks(const AudioClip& clip,
                                                 std::size_t max_pairs = kMaxPeakPairs);

struct ServerConfig {
  SegmentManifest manifest;
  std::filesystem::path segments_dir;
  std::filesystem::path annotations_path;
  std::string default_rater;       // label shown when no rater_id query is given
  bool shuffle = false;            // presentation order, manifest order if false
  std::uint32_t seed = 0;
  std::filesystem::path ui_dir;    // static files served at / when set
};

/// HTTP front end for a labeling session.
///
///   GET  /api/segments[?rater_id=R]  -> [{segment_file, duration_ms, peaks, label}]
///   GET  /api/audio/{segment_file}   -> WAV bytes
///   POST /api/labels {segment_file, rater_id, label} -> 204
///   GET  /api/export.csv             -> annotations.csv
///
/// New labels are appended to annotations_path; a relabel replaces the cell
/// and rewrites the file so it always parses with parse_annotations.
class AnnotationServer {
 public:
  /// Loads every segment (throws IoError if one is missing) and resumes from
  /// an existing annotations file.
  explicit AnnotationServer(ServerConfig config);
  ~AnnotationServer();

  AnnotationServer(const AnnotationServer&) = delete;
  AnnotationServer& operator=(const AnnotationServer&) = delete;

  /// Binds host:port (port 0 picks a free port) and returns the bound port.
  /// Throws IoError if the port is unavailable.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  void listen();
  void stop();
  void wait_until_ready() const;

  /// Applies one label under the server lock; the HTTP handler's core.
  /// Returns false if nothing changed (same label already stored).
  bool apply_label(const AnnotationRecord& record);
  AnnotationSession session() const;
  nlohmann::json segments_json(const std::string& rater_id) const;

 private:
  struct SegmentInfo {
    std::string file;
    double duration_ms = 0.0;
    std::vector<std::array<float, 2>> peaks;
  };

  void install_routes();
  void rewrite_annotations_locked() const;

  ServerConfig config_;
  std::vector<SegmentInfo> segments_;  // presentation order
  std::map<std::string, std::size_t> segment_index_;
  mutable std::mutex mutex_;
  std::vector<AnnotationRecord> records_;
  std::map<std::pair<std::string, std::string>, std::size_t> cell_index_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace coughseg

#endif  // COUGHSEG_SERVER_HPP_
