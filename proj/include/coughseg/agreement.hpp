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

#ifndef COUGHSEG_AGREEMENT_HPP_
#define COUGHSEG_AGREEMENT_HPP_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

namespace coughseg {

/// n_ij: number of raters assigning item i to category j.
using CountMatrix =
    Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct AnnotationMatrix {
  CountMatrix counts;
  int raters = 0;
  std::vector<std::string> category_names;

  Eigen::Index items() const { return counts.rows(); }
  Eigen::Index categories() const { return counts.cols(); }

  /// Requires N >= 1, n >= 2, k >= 2, non-negative counts and every row
  /// summing to n.
  void validate() const;
};

/// rater id -> category index.
using RaterLabels = std::map<std::string, int>;

struct ItemRatings {
  std::string item;
  RaterLabels labels;
};

/// Tallies per-item labels into an N x k count matrix. Every item must be
/// labeled by the same rater set; a ragged grid is a ValidationError.
AnnotationMatrix build_matrix(std::span<const ItemRatings> items,
                              std::vector<std::string> category_names = {"0", "1"});

enum class KappaBand { kPoor, kSlight, kFair, kModerate, kSubstantial, kAlmostPerfect };

std::string_view band_name(KappaBand band);

/// Landis-Koch bands: <0 poor, [0, .2] slight, (.2, .4] fair,
/// (.4, .6] moderate, (.6, .8] substantial, (.8, 1] almost perfect.
KappaBand interpret_kappa(double kappa);

struct KappaResult {
  Eigen::Index items = 0;
  int raters = 0;
  Eigen::Index categories = 0;
  double kappa = 0.0;
  double p_bar = 0.0;   // mean observed agreement
  double pe_bar = 0.0;  // agreement expected by chance
  Eigen::VectorXd p_j;  // overall category proportions
  KappaBand interpretation = KappaBand::kPoor;
};

/// Fleiss' kappa. Throws DegenerateKappaError when every assignment falls
/// in a single category.
KappaResult fleiss_kappa(const AnnotationMatrix& matrix);

/// Most frequent of binary labels; an exact tie resolves to 0.
int majority_vote(std::span<const int> labels);

struct PrecisionResult {
  long tp = 0;
  long fp = 0;
  double precision = 0.0;
};

/// tp = count of 1s, fp = count of 0s in the consensus labels.
PrecisionResult precision(std::span<const int> consensus_labels);

struct RaterAgreement {
  std::string rater_id;
  long matches = 0;
  long items = 0;
  double agreement = 0.0;
};

/// For each rater, the fraction of items where their label equals the
/// majority vote of the remaining raters. Sorted by ascending agreement.
/// Needs a complete binary grid with at least three raters.
std::vector<RaterAgreement> rater_diagnostics(std::span<const ItemRatings> items);

nlohmann::json to_json(const KappaResult& result, std::string_view method);
nlohmann::json to_json(const PrecisionResult& result, std::string_view method);
nlohmann::json to_json(const std::vector<RaterAgreement>& diagnostics);

}  // namespace coughseg

#endif  // COUGHSEG_AGREEMENT_HPP_
