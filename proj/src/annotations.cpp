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

#include "coughseg/annotations.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>

namespace coughseg {

bool is_safe_token(std::string_view token) {
  if (token.empty()) return false;
  return std::all_of(token.begin(), token.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
           (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
  });
}

void finalize_session(AnnotationSession& session, std::string_view origin) {
  std::set<std::pair<std::string, std::string>> cells;
  std::set<std::string> raters;
  for (const auto& r : session.records) {
    if (!is_safe_token(r.segment_file) || !is_safe_token(r.rater_id)) {
      throw ValidationError(std::string(origin) + ": invalid characters in '" +
                            r.segment_file + "," + r.rater_id + "'");
    }
    if (r.label != 0 && r.label != 1) {
      throw ValidationError(std::string(origin) + ": label " +
                            std::to_string(r.label) + " not in {0, 1}");
    }
    if (!cells.emplace(r.segment_file, r.rater_id).second) {
      throw ValidationError(std::string(origin) + ": duplicate label for (" +
                            r.segment_file + ", " + r.rater_id + ")");
    }
    raters.insert(r.rater_id);
  }
  session.raters.assign(raters.begin(), raters.end());
}

AnnotationSession parse_annotations(std::istream& in, std::string_view origin) {
  const std::string where(origin);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(where + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kAnnotationHeader) {
    throw ValidationError(where + ": expected header '" +
                          std::string(kAnnotationHeader) + "'");
  }

  AnnotationSession session;
  std::set<std::pair<std::string, std::string>> cells;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string at = where + ":" + std::to_string(line_no);

    const auto first = line.find(',');
    const auto second = first == std::string::npos ? first : line.find(',', first + 1);
    if (second == std::string::npos || line.find(',', second + 1) != std::string::npos) {
      throw ValidationError(at + ": expected 3 comma-separated fields");
    }
    AnnotationRecord record;
    record.segment_file = line.substr(0, first);
    record.rater_id = line.substr(first + 1, second - first - 1);
    const std::string label = line.substr(second + 1);
    if (label != "0" && label != "1") {
      throw ValidationError(at + ": label '" + label + "' not in {0, 1}");
    }
    record.label = label == "1" ? 1 : 0;
    if (!is_safe_token(record.segment_file) || !is_safe_token(record.rater_id)) {
      throw ValidationError(at + ": fields must be non-empty [A-Za-z0-9._-]");
    }
    if (!cells.emplace(record.segment_file, record.rater_id).second) {
      throw ValidationError(at + ": duplicate label for (" + record.segment_file +
                            ", " + record.rater_id + ")");
    }
    session.records.push_back(std::move(record));
  }
  finalize_session(session, where);
  return session;
}

AnnotationSession parse_annotations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open annotations '" + path.string() + "'");
  return parse_annotations(in, path.string());
}

std::string annotation_row(const AnnotationRecord& record) {
  return record.segment_file + "," + record.rater_id + "," +
         std::to_string(record.label) + "\n";
}

std::string serialize_annotations(const AnnotationSession& session) {
  std::string out(kAnnotationHeader);
  out += '\n';
  for (const auto& r : session.records) out += annotation_row(r);
  return out;
}

AnnotatedItems session_to_matrix(const AnnotationSession& session,
                                 const SegmentManifest& manifest,
                                 std::optional<Method> method) {
  std::set<std::string> known;
  AnnotatedItems out;
  for (const auto& entry : manifest.entries) {
    known.insert(entry.files.begin(), entry.files.end());
    if (method && entry.method != *method) continue;
    out.items.insert(out.items.end(), entry.files.begin(), entry.files.end());
  }

  std::map<std::string, RaterLabels> by_file;
  for (const auto& r : session.records) {
    if (!known.contains(r.segment_file)) {
      throw ValidationError("annotation for '" + r.segment_file +
                            "' which is not in the manifest");
    }
    by_file[r.segment_file][r.rater_id] = r.label;
  }

  std::set<std::string> raters;
  if (method) {
    for (const auto& item : out.items) {
      if (auto it = by_file.find(item); it != by_file.end()) {
        for (const auto& [rater, unused] : it->second) raters.insert(rater);
      }
    }
  } else {
    raters.insert(session.raters.begin(), session.raters.end());
  }

  std::vector<std::pair<std::string, std::string>> missing;
  for (const auto& item : out.items) {
    const RaterLabels& labels = by_file[item];
    for (const auto& rater : raters) {
      if (!labels.contains(rater)) missing.emplace_back(item, rater);
    }
    out.ratings.push_back({item, labels});
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "incomplete annotation grid, " << missing.size() << " missing cell(s):";
    for (const auto& [file, rater] : missing) msg << " (" << file << ", " << rater << ")";
    throw IncompleteAnnotationError(msg.str(), std::move(missing));
  }
  if (out.items.empty()) throw ValidationError("no segments to evaluate");
  if (raters.empty()) throw ValidationError("no annotations for the selected segments");

  out.matrix = build_matrix(out.ratings, {"0", "1"});
  return out;
}

std::string serialize_consensus(const std::vector<std::string>& items,
                                const std::vector<int>& labels) {
  std::string out(kConsensusHeader);
  out += '\n';
  for (std::size_t i = 0; i < items.size(); ++i) {
    out += items[i] + "," + std::to_string(labels.at(i)) + "\n";
  }
  return out;
}

}  // namespace coughseg
