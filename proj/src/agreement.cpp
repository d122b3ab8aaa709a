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

#include "coughseg/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "coughseg/errors.hpp"

namespace coughseg {

void AnnotationMatrix::validate() const {
  if (items() < 1) throw ValidationError("annotation matrix: no items");
  if (raters < 2) throw ValidationError("annotation matrix: need at least 2 raters");
  if (categories() < 2) {
    throw ValidationError("annotation matrix: need at least 2 categories");
  }
  if (!category_names.empty() &&
      static_cast<Eigen::Index>(category_names.size()) != categories()) {
    throw ValidationError("annotation matrix: category name count mismatch");
  }
  if ((counts.array() < 0).any()) {
    throw ValidationError("annotation matrix: negative count");
  }
  const Eigen::VectorXi row_sums = counts.rowwise().sum();
  for (Eigen::Index i = 0; i < row_sums.size(); ++i) {
    if (row_sums[i] != raters) {
      throw ValidationError("annotation matrix: row " + std::to_string(i) +
                            " sums to " + std::to_string(row_sums[i]) +
                            ", expected " + std::to_string(raters));
    }
  }
}

AnnotationMatrix build_matrix(std::span<const ItemRatings> items,
                              std::vector<std::string> category_names) {
  if (items.empty()) throw ValidationError("build_matrix: no items");
  const auto k = static_cast<Eigen::Index>(category_names.size());
  if (k < 2) throw ValidationError("build_matrix: need at least 2 categories");

  const RaterLabels& reference = items.front().labels;
  AnnotationMatrix m;
  m.raters = static_cast<int>(reference.size());
  m.category_names = std::move(category_names);
  m.counts = CountMatrix::Zero(static_cast<Eigen::Index>(items.size()), k);

  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& labels = items[i].labels;
    for (const auto& [rater, unused] : reference) {
      if (!labels.contains(rater)) {
        throw ValidationError("incomplete annotation: item '" + items[i].item +
                              "' has no label from rater '" + rater + "'");
      }
    }
    for (const auto& [rater, category] : labels) {
      if (!reference.contains(rater)) {
        throw ValidationError("incomplete annotation: rater '" + rater +
                              "' labeled item '" + items[i].item +
                              "' but not item '" + items.front().item + "'");
      }
      if (category < 0 || category >= k) {
        throw ValidationError("item '" + items[i].item + "': category " +
                              std::to_string(category) + " out of range");
      }
      ++m.counts(static_cast<Eigen::Index>(i), category);
    }
  }
  m.validate();
  return m;
}

std::string_view band_name(KappaBand band) {
  switch (band) {
    case KappaBand::kPoor:
      return "poor";
    case KappaBand::kSlight:
      return "slight";
    case KappaBand::kFair:
      return "fair";
    case KappaBand::kModerate:
      return "moderate";
    case KappaBand::kSubstantial:
      return "substantial";
    case KappaBand::kAlmostPerfect:
      return "almost perfect";
  }
  return "unknown";
}

KappaBand interpret_kappa(double kappa) {
  constexpr double kSlack = 1e-12;
  if (!(kappa >= -1.0 - kSlack && kappa <= 1.0 + kSlack)) {
    throw ValidationError("interpret_kappa: " + std::to_string(kappa) +
                          " outside [-1, 1]");
  }
  if (kappa < 0.0) return KappaBand::kPoor;
  if (kappa <= 0.20) return KappaBand::kSlight;
  if (kappa <= 0.40) return KappaBand::kFair;
  if (kappa <= 0.60) return KappaBand::kModerate;
  if (kappa <= 0.80) return KappaBand::kSubstantial;
  return KappaBand::kAlmostPerfect;
}

KappaResult fleiss_kappa(const AnnotationMatrix& matrix) {
  matrix.validate();
  const double N = static_cast<double>(matrix.items());
  const double n = matrix.raters;
  const Eigen::RowVectorXi column_totals = matrix.counts.colwise().sum();
  const long assignments = static_cast<long>(matrix.items()) * matrix.raters;
  if ((column_totals.array() == assignments).any()) {
    throw DegenerateKappaError(
        "fleiss_kappa: every assignment is in one category, kappa undefined");
  }

  KappaResult r;
  r.items = matrix.items();
  r.raters = matrix.raters;
  r.categories = matrix.categories();
  const double sum_sq = matrix.counts.cast<double>().array().square().sum();
  r.p_bar = (sum_sq - N * n) / (N * n * (n - 1.0));
  r.p_j = column_totals.cast<double>().transpose() / (N * n);
  r.pe_bar = r.p_j.squaredNorm();
  r.kappa = (r.p_bar - r.pe_bar) / (1.0 - r.pe_bar);
  r.interpretation = interpret_kappa(r.kappa);
  return r;
}

int majority_vote(std::span<const int> labels) {
  if (labels.empty()) throw ValidationError("majority_vote: no labels");
  long ones = 0;
  for (int label : labels) {
    if (label != 0 && label != 1) {
      throw ValidationError("majority_vote: label " + std::to_string(label) +
                            " is not binary");
    }
    ones += label;
  }
  const long zeros = static_cast<long>(labels.size()) - ones;
  return ones > zeros ? 1 : 0;
}

PrecisionResult precision(std::span<const int> consensus_labels) {
  if (consensus_labels.empty()) throw ValidationError("precision: no labels");
  PrecisionResult r;
  for (int label : consensus_labels) {
    if (label == 1) {
      ++r.tp;
    } else if (label == 0) {
      ++r.fp;
    } else {
      throw ValidationError("precision: label " + std::to_string(label) +
                            " is not binary");
    }
  }
  r.precision = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
  return r;
}

std::vector<RaterAgreement> rater_diagnostics(std::span<const ItemRatings> items) {
  // Completeness and label range are the same checks as for the matrix.
  const AnnotationMatrix m = build_matrix(items, {"0", "1"});
  if (m.raters < 3) {
    throw ValidationError(
        "rater_diagnostics: need at least 3 raters for a leave-one-out majority");
  }

  std::vector<RaterAgreement> out;
  std::vector<int> others;
  for (const auto& [rater, unused] : items.front().labels) {
    RaterAgreement agreement{rater, 0, static_cast<long>(items.size()), 0.0};
    for (const auto& item : items) {
      others.clear();
      for (const auto& [other, label] : item.labels) {
        if (other != rater) others.push_back(label);
      }
      if (item.labels.at(rater) == majority_vote(others)) ++agreement.matches;
    }
    agreement.agreement =
        static_cast<double>(agreement.matches) / static_cast<double>(agreement.items);
    out.push_back(std::move(agreement));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.agreement < b.agreement;
  });
  return out;
}

nlohmann::json to_json(const KappaResult& r, std::string_view method) {
  return {{"method", method},
          {"N", r.items},
          {"n", r.raters},
          {"k", r.categories},
          {"kappa", r.kappa},
          {"p_bar", r.p_bar},
          {"pe_bar", r.pe_bar},
          {"p_j", std::vector<double>(r.p_j.data(), r.p_j.data() + r.p_j.size())},
          {"interpretation", band_name(r.interpretation)}};
}

nlohmann::json to_json(const PrecisionResult& r, std::string_view method) {
  return {{"method", method},
          {"N", r.tp + r.fp},
          {"tp", r.tp},
          {"fp", r.fp},
          {"precision", r.precision}};
}

nlohmann::json to_json(const std::vector<RaterAgreement>& diagnostics) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& d : diagnostics) {
    out.push_back({{"rater_id", d.rater_id},
                   {"matches", d.matches},
                   {"items", d.items},
                   {"agreement", d.agreement}});
  }
  return out;
}

}  // namespace coughseg
