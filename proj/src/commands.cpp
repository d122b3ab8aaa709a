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

#include "coughseg/commands.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "coughseg/wav.hpp"

namespace coughseg {
namespace fs = std::filesystem;
using nlohmann::json;

std::size_t SegmentRun::total_segments() const {
  std::size_t total = 0;
  for (const auto& e : manifest.entries) total += e.segments.size();
  return total;
}

std::vector<fs::path> collect_wav_inputs(const fs::path& input) {
  if (!fs::exists(input)) throw IoError("input '" + input.string() + "' does not exist");
  if (!fs::is_directory(input)) return {input};
  std::vector<fs::path> files;
  for (const auto& de : fs::recursive_directory_iterator(input)) {
    if (!de.is_regular_file()) continue;
    std::string ext = de.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".wav") files.push_back(de.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<SegmentBounds> segment_clip(const AudioClip& clip,
                                        const SegmentOptions& options) {
  switch (options.method) {
    case Method::kHysteresis:
      return hysteresis_segment(clip, options.hysteresis);
    case Method::kRmsThreshold:
      return rms_threshold_segment(clip, options.rms_threshold);
    case Method::kManual:
      return whole_clip_segment(clip);
  }
  return {};
}

json params_snapshot(const SegmentOptions& options) {
  switch (options.method) {
    case Method::kHysteresis:
      return params_to_json(options.hysteresis);
    case Method::kRmsThreshold:
      return params_to_json(options.rms_threshold);
    case Method::kManual:
      break;
  }
  return json::object();
}

SegmentRun run_segment(const fs::path& input, const fs::path& out_dir,
                       const SegmentOptions& options) {
  options.hysteresis.validate();
  options.rms_threshold.validate();
  const auto inputs = collect_wav_inputs(input);
  fs::create_directories(out_dir);

  SegmentRun run;
  run.manifest.tool_version = kToolVersion;
  run.manifest.created_at = utc_timestamp();
  const json params = params_snapshot(options);
  for (const auto& path : inputs) {
    AudioClip clip;
    try {
      clip = load_audio(path);
    } catch (const Error& e) {
      if (!options.skip_bad) throw;
      run.skipped.emplace_back(path.string(), e.what());
      continue;
    }
    const auto segments = segment_clip(clip, options);
    run.manifest.entries.push_back(export_segments(
        clip, segments, out_dir, options.method, params, options.overwrite));
  }
  run.manifest.validate();
  save_manifest(run.manifest, out_dir / "manifest.json");
  return run;
}

EvaluationReport evaluate(const AnnotationSession& session,
                          const SegmentManifest& manifest) {
  EvaluationReport report;
  report.tool_version = kToolVersion;

  std::vector<Method> methods;
  for (const auto& entry : manifest.entries) {
    if (std::find(methods.begin(), methods.end(), entry.method) == methods.end() &&
        !entry.files.empty()) {
      methods.push_back(entry.method);
    }
  }
  if (methods.empty()) throw ValidationError("evaluate: manifest has no segments");

  for (Method method : methods) {
    MethodEvaluation eval;
    eval.method = method;
    for (const auto& entry : manifest.entries) {
      if (entry.method == method) {
        eval.params = entry.params;
        break;
      }
    }
    const AnnotatedItems grid = session_to_matrix(session, manifest, method);
    eval.items = grid.items;
    for (const auto& [rater, unused] : grid.ratings.front().labels) {
      eval.raters.push_back(rater);
    }
    std::vector<int> labels;
    for (const auto& item : grid.ratings) {
      labels.clear();
      for (const auto& [rater, label] : item.labels) labels.push_back(label);
      eval.consensus.push_back(majority_vote(labels));
    }
    eval.precision = precision(eval.consensus);
    try {
      eval.kappa = fleiss_kappa(grid.matrix);
    } catch (const DegenerateKappaError& e) {
      eval.kappa_error = e.what();
    }
    try {
      eval.diagnostics = rater_diagnostics(grid.ratings);
    } catch (const ValidationError& e) {
      eval.diagnostics_error = e.what();
    }
    report.methods.push_back(std::move(eval));
  }
  return report;
}

json EvaluationReport::to_json() const {
  json methods_json = json::array();
  for (const auto& m : methods) {
    const std::string name(method_name(m.method));
    json j{{"method", name},
           {"params", m.params},
           {"raters", m.raters},
           {"precision", coughseg::to_json(m.precision, name)}};
    if (m.kappa) {
      j["fleiss_kappa"] = coughseg::to_json(*m.kappa, name);
    } else {
      j["fleiss_kappa"] = nullptr;
      j["fleiss_kappa_error"] = m.kappa_error;
    }
    if (m.diagnostics_error.empty()) {
      j["rater_diagnostics"] = coughseg::to_json(m.diagnostics);
    } else {
      j["rater_diagnostics"] = nullptr;
      j["rater_diagnostics_error"] = m.diagnostics_error;
    }
    methods_json.push_back(std::move(j));
  }
  return {{"tool_version", tool_version}, {"methods", std::move(methods_json)}};
}

std::string EvaluationReport::consensus_csv() const {
  std::vector<std::string> items;
  std::vector<int> labels;
  for (const auto& m : methods) {
    items.insert(items.end(), m.items.begin(), m.items.end());
    labels.insert(labels.end(), m.consensus.begin(), m.consensus.end());
  }
  return serialize_consensus(items, labels);
}

std::string EvaluationReport::summary() const {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-15s %5s %6s %10s %8s  %s\n", "method", "N",
                "single", "precision", "kappa", "interpretation");
  out << line;
  for (const auto& m : methods) {
    char kappa[32] = "n/a";
    if (m.kappa) std::snprintf(kappa, sizeof kappa, "%.3f", m.kappa->kappa);
    const std::string band =
        m.kappa ? std::string(band_name(m.kappa->interpretation)) : "undefined";
    std::snprintf(line, sizeof line, "%-15s %5ld %6ld %9.2f%% %8s  %s\n",
                  std::string(method_name(m.method)).c_str(),
                  m.precision.tp + m.precision.fp, m.precision.tp,
                  100.0 * m.precision.precision, kappa, band.c_str());
    out << line;
    if (!m.kappa_error.empty()) out << "  warning: " << m.kappa_error << '\n';
    if (!m.diagnostics.empty()) {
      out << "  rater agreement with leave-one-out majority:";
      for (const auto& d : m.diagnostics) {
        std::snprintf(line, sizeof line, " %s=%.3f", d.rater_id.c_str(), d.agreement);
        out << line;
      }
      out << '\n';
    }
  }
  return out.str();
}

void write_text_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write error on '" + path.string() + "'");
}

void write_evaluation(const EvaluationReport& report, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  write_text_file(out_dir / "report.json", report.to_json().dump(2) + "\n");
  write_text_file(out_dir / "consensus.csv", report.consensus_csv());
}

}  // namespace coughseg
