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

#ifndef COUGHSEG_ANNOTATIONS_HPP_
#define COUGHSEG_ANNOTATIONS_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coughseg/agreement.hpp"
#include "coughseg/errors.hpp"
#include "coughseg/manifest.hpp"

namespace coughseg {

inline constexpr std::string_view kAnnotationHeader = "segment_file,rater_id,label";
inline constexpr std::string_view kConsensusHeader = "segment_file,label";

/// One rater's judgment of one exported segment: 1 = single cough, 0 = other.
struct AnnotationRecord {
  std::string segment_file;
  std::string rater_id;
  int label = 0;

  bool operator==(const AnnotationRecord&) const = default;
};

struct AnnotationSession {
  std::vector<AnnotationRecord> records;
  std::filesystem::path manifest_ref;
  std::vector<std::string> raters;  // sorted, unique

  bool operator==(const AnnotationSession&) const = default;
};

/// Raised when the annotation grid has holes; missing() lists every
/// (segment_file, rater_id) cell without a label.
class IncompleteAnnotationError : public ValidationError {
 public:
  IncompleteAnnotationError(std::string what,
                            std::vector<std::pair<std::string, std::string>> missing)
      : ValidationError(std::move(what)), missing_(std::move(missing)) {}

  const std::vector<std::pair<std::string, std::string>>& missing() const {
    return missing_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> missing_;
};

/// True for non-empty strings over [A-Za-z0-9._-].
bool is_safe_token(std::string_view token);

AnnotationSession parse_annotations(const std::filesystem::path& path);
AnnotationSession parse_annotations(std::istream& in,
                                    std::string_view origin = "<stream>");

/// Header plus one LF-terminated row per record, in record order.
std::string serialize_annotations(const AnnotationSession& session);
std::string annotation_row(const AnnotationRecord& record);

/// Rebuilds the sorted rater list from the records and checks labels,
/// tokens and (file, rater) uniqueness.
void finalize_session(AnnotationSession& session, std::string_view origin);

/// Annotation grid over the manifest's segments in manifest order.
struct AnnotatedItems {
  std::vector<std::string> items;
  std::vector<ItemRatings> ratings;
  AnnotationMatrix matrix;
};

/// Restricting to `method` keeps only that method's segments and the raters
/// who labeled at least one of them. Every kept segment must be labeled by
/// every kept rater; otherwise IncompleteAnnotationError.
AnnotatedItems session_to_matrix(const AnnotationSession& session,
                                 const SegmentManifest& manifest,
                                 std::optional<Method> method = std::nullopt);

/// `segment_file,label` rows.
std::string serialize_consensus(const std::vector<std::string>& items,
                                const std::vector<int>& labels);

}  // namespace coughseg

#endif  // COUGHSEG_ANNOTATIONS_HPP_
