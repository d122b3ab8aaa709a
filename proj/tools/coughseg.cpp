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

// coughseg: split multi-cough recordings into single-cough WAVs, serve a
// labeling session and score the labels.
//
//   coughseg segment IN OUT [--method hysteresis|rms_threshold|manual] ...
//   coughseg evaluate --annotations annotations.csv --manifest manifest.json
//   coughseg serve --manifest manifest.json --port 8080

#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "coughseg/commands.hpp"
#include "coughseg/server.hpp"

namespace {

namespace fs = std::filesystem;
using namespace coughseg;

struct SegmentArgs {
  fs::path input;
  fs::path output;
  std::string method = "hysteresis";
  std::optional<double> low_mult, high_mult, min_len_ms, pad_ms, window_ms, hop_ms;
  std::optional<double> threshold, frame_ms, max_len_ms;
  std::optional<int> context_frames;
  bool skip_bad = false;
  bool force = false;
};

int run_segment_command(const SegmentArgs& args) {
  SegmentOptions options;
  options.method = parse_method(args.method);
  options.skip_bad = args.skip_bad;
  options.overwrite = args.force;
  auto& h = options.hysteresis;
  auto& r = options.rms_threshold;
  if (args.low_mult) h.low_mult = *args.low_mult;
  if (args.high_mult) h.high_mult = *args.high_mult;
  if (args.pad_ms) h.pad_ms = *args.pad_ms;
  if (args.window_ms) h.envelope_window_ms = *args.window_ms;
  if (args.hop_ms) h.envelope_hop_ms = *args.hop_ms;
  if (args.threshold) r.threshold = *args.threshold;
  if (args.frame_ms) r.frame_ms = *args.frame_ms;
  if (args.max_len_ms) r.max_len_ms = *args.max_len_ms;
  if (args.context_frames) r.context_frames = *args.context_frames;
  if (args.min_len_ms) {
    (options.method == Method::kRmsThreshold ? r.min_len_ms : h.min_len_ms) =
        *args.min_len_ms;
  }

  const SegmentRun run = run_segment(args.input, args.output, options);
  for (const auto& [path, reason] : run.skipped) {
    std::cerr << "skipped " << path << ": " << reason << '\n';
  }
  for (const auto& entry : run.manifest.entries) {
    std::cout << entry.source_id << '\t' << entry.segments.size() << '\n';
  }
  std::cout << "total\t" << run.total_segments() << '\n';
  return 0;
}

int run_evaluate_command(const fs::path& annotations, const fs::path& manifest_path,
                         const fs::path& out_dir) {
  AnnotationSession session = parse_annotations(annotations);
  session.manifest_ref = manifest_path;
  const SegmentManifest manifest = load_manifest(manifest_path);
  const EvaluationReport report = evaluate(session, manifest);
  write_evaluation(report, out_dir);
  std::cout << report.summary();
  for (const auto& m : report.methods) {
    if (!m.kappa_error.empty()) {
      std::cerr << "warning: " << method_name(m.method) << ": " << m.kappa_error << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-cough segmentation and listening-test evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  SegmentArgs seg;
  auto* segment = app.add_subcommand("segment", "Segment WAV files into single coughs");
  segment->add_option("input", seg.input, "WAV file or directory")->required();
  segment->add_option("output", seg.output, "Output directory")->required();
  segment->add_option("--method", seg.method, "hysteresis | rms_threshold | manual")
      ->capture_default_str();
  segment->add_option("--low-mult", seg.low_mult, "Hysteresis low multiplier [0.1]");
  segment->add_option("--high-mult", seg.high_mult, "Hysteresis high multiplier [2.0]");
  segment->add_option("--min-len-ms", seg.min_len_ms,
                      "Minimum length [200 hysteresis, 300 rms_threshold]");
  segment->add_option("--pad-ms", seg.pad_ms, "Hysteresis padding [0]");
  segment->add_option("--envelope-window-ms", seg.window_ms, "Envelope window [20]");
  segment->add_option("--envelope-hop-ms", seg.hop_ms, "Envelope hop [10]");
  segment->add_option("--threshold", seg.threshold, "Normalized RMS threshold [0.09]");
  segment->add_option("--frame-ms", seg.frame_ms, "RMS frame length [42.67]");
  segment->add_option("--max-len-ms", seg.max_len_ms, "RMS maximum length [3000]");
  segment->add_option("--context-frames", seg.context_frames, "RMS context frames [3]");
  segment->add_flag("--skip-bad", seg.skip_bad, "Skip undecodable inputs");
  segment->add_flag("--force", seg.force, "Overwrite existing segment files");

  fs::path annotations, manifest_path, out_dir = ".";
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Compute kappa and precision");
  evaluate_cmd->add_option("--annotations", annotations, "annotations.csv")->required();
  evaluate_cmd->add_option("--manifest", manifest_path, "manifest.json")->required();
  evaluate_cmd->add_option("--out-dir", out_dir, "Where report.json and consensus.csv go")
      ->capture_default_str();

  ServerConfig server_config;
  fs::path serve_manifest;
  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve the labeling API");
  serve->add_option("--manifest", serve_manifest, "manifest.json")->required();
  serve->add_option("--segments-dir", server_config.segments_dir,
                    "Directory of exported segments [manifest directory]");
  serve->add_option("--annotations", server_config.annotations_path,
                    "Session file [segments-dir/annotations.csv]");
  serve->add_option("--rater-id", server_config.default_rater,
                    "Rater whose labels GET /api/segments reports by default");
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();
  serve->add_flag("--shuffle", server_config.shuffle, "Randomize presentation order");
  serve->add_option("--seed", server_config.seed, "Shuffle seed")->capture_default_str();
  serve->add_option("--ui-dir", server_config.ui_dir, "Static UI files to serve at /");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*segment) return run_segment_command(seg);
    if (*evaluate_cmd) return run_evaluate_command(annotations, manifest_path, out_dir);
    if (*serve) {
      server_config.manifest = load_manifest(serve_manifest);
      if (server_config.segments_dir.empty()) {
        server_config.segments_dir = serve_manifest.parent_path();
        if (server_config.segments_dir.empty()) server_config.segments_dir = ".";
      }
      if (server_config.annotations_path.empty()) {
        server_config.annotations_path = server_config.segments_dir / "annotations.csv";
      }
      if (!server_config.default_rater.empty() &&
          !is_safe_token(server_config.default_rater)) {
        throw ValidationError("--rater-id must be [A-Za-z0-9._-]");
      }
      AnnotationServer server(server_config);
      const int bound = server.bind(host, port);
      std::cerr << "serving " << server_config.manifest.all_files().size()
                << " segments on http://" << host << ":" << bound << '\n';
      server.listen();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
