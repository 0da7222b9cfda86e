/*
 * Copyright 2026 The sgfair Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sgfair/data_model.hpp"
#include "sgfair/metric_result.hpp"
#include "sgfair/subgroups.hpp"

namespace sgfair {

// Which per-subgroup rate a parity metric compares. Binary rates treat
// `label == positive_label` as 1 and every other label as 0.
struct RateKind {
  enum class Kind { kPassRate, kTpr, kTnr, kFpr, kFnr, kPredictedClassRate };

  Kind kind = Kind::kPassRate;
  std::string class_label;  // only for kPredictedClassRate

  static RateKind pass_rate() { return {Kind::kPassRate, {}}; }
  static RateKind tpr() { return {Kind::kTpr, {}}; }
  static RateKind tnr() { return {Kind::kTnr, {}}; }
  static RateKind fpr() { return {Kind::kFpr, {}}; }
  static RateKind fnr() { return {Kind::kFnr, {}}; }
  static RateKind predicted_class(std::string label) {
    return {Kind::kPredictedClassRate, std::move(label)};
  }

  // "PASS_RATE", "TPR", ..., "PREDICTED_CLASS_RATE(y)".
  std::string name() const;
};

// Rate of `kind` within `subgroup`; std::nullopt when the conditioning set
// is empty (no ground-truth positives for TPR/FNR, no negatives for
// TNR/FPR).
std::optional<double> subgroup_rate(const Dataset& dataset,
                                    const Subgroup& subgroup,
                                    const RateKind& kind,
                                    std::string_view positive_label);

// Min-max ratio of pass rates ("dpr").
MetricResult demographic_parity_ratio(const Dataset& dataset,
                                      const SubgroupPartition& partition,
                                      std::string_view positive_label,
                                      const MetricOptions& options = {});

// Minimum pass-rate ratio over ordered subgroup pairs ("di"). Pairs with a
// zero denominator and nonzero numerator are skipped with a note; 0/0 pairs
// count as parity. min_subgroup/max_subgroup name the achieving
// numerator/denominator.
MetricResult disparate_impact(const Dataset& dataset,
                              const SubgroupPartition& partition,
                              std::string_view positive_label,
                              const MetricOptions& options = {});

// Conjunction of legitimate-flag tests, e.g. "employed=true&veteran=false".
// An empty filter selects every record.
class LegitimateFilter {
 public:
  struct Test {
    std::string flag;
    bool expected;
    bool operator==(const Test&) const = default;
  };

  LegitimateFilter() = default;
  explicit LegitimateFilter(std::vector<Test> tests) : tests_(std::move(tests)) {}

  // Terms are separated by '&' or ','; each is `flag=true|false|1|0`.
  static LegitimateFilter parse(std::string_view expression);

  const std::vector<Test>& tests() const noexcept { return tests_; }
  std::vector<std::string> flags() const;
  bool operator()(const Record& record) const;
  std::string to_string() const;

 private:
  std::vector<Test> tests_;
};

// DPR restricted to records the filter accepts ("cspr").
MetricResult conditional_statistical_parity_ratio(
    const Dataset& dataset, const SubgroupPartition& partition,
    std::string_view positive_label, const LegitimateFilter& filter,
    const MetricOptions& options = {});

// Min-max ratio of TPR ("eopp").
MetricResult equal_opportunity_ratio(const Dataset& dataset,
                                     const SubgroupPartition& partition,
                                     std::string_view positive_label,
                                     const MetricOptions& options = {});

// Min-max ratio of any rate kind; UNDEFINED subgroups are excluded.
MetricResult rate_parity_ratio(const Dataset& dataset,
                               const SubgroupPartition& partition,
                               std::string_view positive_label,
                               const RateKind& kind,
                               const MetricOptions& options = {});

// Worse of the TPR-parity and FPR-parity ratios ("eodds").
MetricResult equalized_odds_ratio(const Dataset& dataset,
                                  const SubgroupPartition& partition,
                                  std::string_view positive_label,
                                  const MetricOptions& options = {});

// Predicted pass rate over actual pass rate; std::nullopt when nobody in
// the subgroup actually passed.
std::optional<double> group_benefit_ratio(const Dataset& dataset,
                                          const Subgroup& subgroup,
                                          std::string_view positive_label);

// Min-max ratio of per-subgroup group benefit ratios ("gbr").
MetricResult group_benefit_ratio_intersectional(
    const Dataset& dataset, const SubgroupPartition& partition,
    std::string_view positive_label, const MetricOptions& options = {});

struct MulticlassOptions {
  MetricOptions base;
  // Extension: compare P(pred = y | true = y) instead of P(pred = y).
  bool condition_on_true_label = false;
};

// Minimum over classes of the per-class predicted-rate min-max ratio
// ("meodd").
MetricResult multiclass_equalized_odds_ratio(
    const Dataset& dataset, const SubgroupPartition& partition,
    const MulticlassOptions& options = {});

}  // namespace sgfair
