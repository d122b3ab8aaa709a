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

#ifndef COUGHSEG_COMMANDS_HPP_
#define COUGHSEG_COMMANDS_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "coughseg/agreement.hpp"
#include "coughseg/annotations.hpp"
#include "coughseg/manifest.hpp"
#include "coughseg/segmentation.hpp"

namespace coughseg {

inline constexpr const char* kToolVersion = "coughseg " COUGHSEG_VERSION;

struct SegmentOptions {
  Method method = Method::kHysteresis;
  HysteresisParams hysteresis;
  RmsThresholdParams rms_threshold;
  bool skip_bad = false;
  bool overwrite = false;
};

struct SegmentRun {
  SegmentManifest manifest;
  std::vector<std::pair<std::string, std::string>> skipped;  // path, reason

  std::size_t total_segments() const;
};

/// `input` itself if it is a file, otherwise every *.wav below it
/// (case-insensitive extension), sorted by path.
std::vector<std::filesystem::path> collect_wav_inputs(const std::filesystem::path& input);

/// Segments one clip with the configured method.
std::vector<SegmentBounds> segment_clip(const AudioClip& clip,
                                        const SegmentOptions& options);

nlohmann::json params_snapshot(const SegmentOptions& options);

/// Segments every input, exports the WAVs into out_dir (created if needed)
/// and writes out_dir/manifest.json. An undecodable input aborts the run
/// unless skip_bad is set.
SegmentRun run_segment(const std::filesystem::path& input,
                       const std::filesystem::path& out_dir,
                       const SegmentOptions& options);

/// Metrics for the segments of one method.
struct MethodEvaluation {
  Method method = Method::kHysteresis;
  nlohmann::json params = nlohmann::json::object();
  std::vector<std::string> items;
  std::vector<std::string> raters;
  std::vector<int> consensus;
  PrecisionResult precision;
  std::optional<KappaResult> kappa;
  std::string kappa_error;
  std::vector<RaterAgreement> diagnostics;
  std::string diagnostics_error;
};

struct EvaluationReport {
  std::string tool_version;
  std::vector<MethodEvaluation> methods;

  nlohmann::json to_json() const;
  /// consensus.csv body covering every method in manifest order.
  std::string consensus_csv() const;
  /// Human-readable summary, metrics rounded to 3 decimals.
  std::string summary() const;
};

/// Evaluates each method present in the manifest separately.
EvaluationReport evaluate(const AnnotationSession& session,
                          const SegmentManifest& manifest);

/// Writes report.json and consensus.csv into out_dir.
void write_evaluation(const EvaluationReport& report,
                      const std::filesystem::path& out_dir);

/// Writes text to path, replacing any existing file.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace coughseg

#endif  // COUGHSEG_COMMANDS_HPP_
