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

#include "sgfair/classification_metrics.hpp"

#include <algorithm>
#include <map>

#include "sgfair/csv.hpp"
#include "sgfair/error.hpp"

namespace sgfair {

namespace {

constexpr const char* kModule = "classification_metrics";

struct ConfusionCounts {
  std::size_t members = 0;
  std::size_t predicted_positive = 0;
  std::size_t actual_positive = 0;
  std::size_t true_positive = 0;
  std::size_t actual_negative = 0;
  std::size_t true_negative = 0;
};

ConfusionCounts Count(const Dataset& dataset,
                      std::span<const std::size_t> members,
                      std::string_view positive_label, bool with_truth) {
  ConfusionCounts counts;
  counts.members = members.size();
  for (std::size_t i : members) {
    const Record& record = dataset[i];
    const bool predicted = *record.predicted_label == positive_label;
    counts.predicted_positive += predicted;
    if (!with_truth) continue;
    if (*record.true_label == positive_label) {
      ++counts.actual_positive;
      counts.true_positive += predicted;
    } else {
      ++counts.actual_negative;
      counts.true_negative += !predicted;
    }
  }
  return counts;
}

double Ratio(std::size_t numerator, std::size_t denominator) {
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

void RequireSubgroups(const SubgroupPartition& partition, std::size_t minimum) {
  if (partition.subgroups.size() < minimum) {
    throw UsageError(kModule, "need at least " + std::to_string(minimum) +
                                  " included subgroup(s), partition has " +
                                  std::to_string(partition.subgroups.size()));
  }
}

std::map<std::string, double> PassRates(const Dataset& dataset,
                                        const SubgroupPartition& partition,
                                        std::string_view positive_label) {
  std::map<std::string, double> rates;
  for (const auto& subgroup : partition.subgroups) {
    rates.emplace(subgroup_label(subgroup),
                  *subgroup_rate(dataset, subgroup, RateKind::pass_rate(),
                                 positive_label));
  }
  return rates;
}

MetricResult RateParity(const Dataset& dataset,
                        const SubgroupPartition& partition,
                        std::string_view positive_label, const RateKind& kind,
                        const MetricOptions& options, std::string metric_id) {
  RequireSubgroups(partition, 1);
  std::vector<SubgroupStatistic> stats;
  for (const auto& subgroup : partition.subgroups) {
    stats.push_back({subgroup_label(subgroup),
                     subgroup_rate(dataset, subgroup, kind, positive_label)});
  }
  return ratio_over_defined(stats, metric_id, kind.name(), options, kModule);
}

}  // namespace

std::string RateKind::name() const {
  switch (kind) {
    case Kind::kPassRate:
      return "PASS_RATE";
    case Kind::kTpr:
      return "TPR";
    case Kind::kTnr:
      return "TNR";
    case Kind::kFpr:
      return "FPR";
    case Kind::kFnr:
      return "FNR";
    case Kind::kPredictedClassRate:
      return "PREDICTED_CLASS_RATE(" + class_label + ")";
  }
  return "UNKNOWN";
}

std::optional<double> subgroup_rate(const Dataset& dataset,
                                    const Subgroup& subgroup,
                                    const RateKind& kind,
                                    std::string_view positive_label) {
  if (subgroup.member_indices.empty()) {
    throw UsageError(kModule, "rate requested for empty subgroup " +
                                  subgroup_label(subgroup));
  }
  const bool with_truth = kind.kind != RateKind::Kind::kPassRate &&
                          kind.kind != RateKind::Kind::kPredictedClassRate;
  FieldRequirement requirement;
  requirement.predicted = true;
  requirement.true_label = with_truth;
  require_fields(dataset, subgroup.member_indices, requirement, kModule);

  if (kind.kind == RateKind::Kind::kPredictedClassRate) {
    const auto counts = Count(dataset, subgroup.member_indices,
                              kind.class_label, /*with_truth=*/false);
    return Ratio(counts.predicted_positive, counts.members);
  }

  const auto counts =
      Count(dataset, subgroup.member_indices, positive_label, with_truth);
  switch (kind.kind) {
    case RateKind::Kind::kPassRate:
      return Ratio(counts.predicted_positive, counts.members);
    case RateKind::Kind::kTpr:
      if (counts.actual_positive == 0) return std::nullopt;
      return Ratio(counts.true_positive, counts.actual_positive);
    case RateKind::Kind::kFnr:
      if (counts.actual_positive == 0) return std::nullopt;
      return Ratio(counts.actual_positive - counts.true_positive,
                   counts.actual_positive);
    case RateKind::Kind::kTnr:
      if (counts.actual_negative == 0) return std::nullopt;
      return Ratio(counts.true_negative, counts.actual_negative);
    case RateKind::Kind::kFpr:
      if (counts.actual_negative == 0) return std::nullopt;
      return Ratio(counts.actual_negative - counts.true_negative,
                   counts.actual_negative);
    case RateKind::Kind::kPredictedClassRate:
      break;
  }
  return std::nullopt;
}

MetricResult demographic_parity_ratio(const Dataset& dataset,
                                      const SubgroupPartition& partition,
                                      std::string_view positive_label,
                                      const MetricOptions& /*options*/) {
  RequireSubgroups(partition, 1);
  auto result = min_max_ratio(PassRates(dataset, partition, positive_label), "dpr");
  add_partition_notes(result, partition);
  return result;
}

MetricResult disparate_impact(const Dataset& dataset,
                              const SubgroupPartition& partition,
                              std::string_view positive_label,
                              const MetricOptions& /*options*/) {
  RequireSubgroups(partition, 2);
  const auto rates = PassRates(dataset, partition, positive_label);

  MetricResult result;
  result.metric_id = "di";
  result.per_subgroup = rates;

  std::optional<double> best;
  std::vector<std::string> zero_denominators;
  bool all_zero = true;
  for (const auto& [denominator_label, denominator] : rates) {
    if (denominator != 0.0) all_zero = false;
  }
  for (const auto& [label_i, rate_i] : rates) {
    for (const auto& [label_j, rate_j] : rates) {
      if (label_i == label_j) continue;
      double ratio = 1.0;  // 0/0: identical statistics
      if (rate_j == 0.0) {
        if (rate_i != 0.0) {
          if (std::find(zero_denominators.begin(), zero_denominators.end(),
                        label_j) == zero_denominators.end()) {
            zero_denominators.push_back(label_j);
          }
          continue;
        }
      } else {
        ratio = rate_i / rate_j;
      }
      if (!best || ratio < *best) {
        best = ratio;
        result.min_subgroup = label_i;
        result.max_subgroup = label_j;
      }
    }
  }

  if (all_zero) result.notes.emplace_back(kNoteAllZero);
  if (!zero_denominators.empty()) {
    std::string note = "skipped pairs with zero-rate denominator:";
    for (const auto& label : zero_denominators) note += " " + label;
    result.notes.push_back(std::move(note));
  }
  result.value = best;

  // Among tied pairs prefer the (minimum, maximum) pair so that the
  // extremes reported match per_subgroup.
  const auto extremes = min_max_ratio(rates);
  if (best && extremes.value && !all_zero && *extremes.value == *best) {
    result.min_subgroup = extremes.min_subgroup;
    result.max_subgroup = extremes.max_subgroup;
  }
  if (best) result.worst_pair = {result.min_subgroup, result.max_subgroup};
  add_partition_notes(result, partition);
  return result;
}

LegitimateFilter LegitimateFilter::parse(std::string_view expression) {
  std::vector<Test> tests;
  std::size_t start = 0;
  while (start <= expression.size()) {
    std::size_t end = expression.find_first_of("&,", start);
    if (end == std::string_view::npos) end = expression.size();
    const auto term = csv::trim(expression.substr(start, end - start));
    start = end + 1;
    if (term.empty()) {
      if (end == expression.size()) break;
      continue;
    }
    const auto eq = term.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(kModule, "filter term '" + std::string(term) +
                                     "' is not of the form flag=true|false");
    }
    const std::string flag(csv::trim(term.substr(0, eq)));
    const std::string value(csv::trim(term.substr(eq + 1)));
    bool expected;
    if (value == "true" || value == "1") {
      expected = true;
    } else if (value == "false" || value == "0") {
      expected = false;
    } else {
      throw ConfigError(kModule, "filter value '" + value +
                                     "' must be true or false");
    }
    if (flag.empty()) throw ConfigError(kModule, "filter term has no flag name");
    tests.push_back({flag, expected});
  }
  return LegitimateFilter(std::move(tests));
}

std::vector<std::string> LegitimateFilter::flags() const {
  std::vector<std::string> out;
  for (const auto& test : tests_) out.push_back(test.flag);
  return out;
}

bool LegitimateFilter::operator()(const Record& record) const {
  for (const auto& test : tests_) {
    auto it = record.legitimate_flags.find(test.flag);
    if (it == record.legitimate_flags.end() || it->second != test.expected) {
      return false;
    }
  }
  return true;
}

std::string LegitimateFilter::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < tests_.size(); ++i) {
    if (i > 0) out += '&';
    out += tests_[i].flag + (tests_[i].expected ? "=true" : "=false");
  }
  return out;
}

MetricResult conditional_statistical_parity_ratio(
    const Dataset& dataset, const SubgroupPartition& partition,
    std::string_view positive_label, const LegitimateFilter& filter,
    const MetricOptions& options) {
  RequireSubgroups(partition, 1);
  const auto& known = dataset.legitimate_names();
  for (const auto& flag : filter.flags()) {
    if (std::find(known.begin(), known.end(), flag) == known.end()) {
      throw ConfigError(kModule, "filter references unknown flag '" + flag + "'");
    }
  }

  FieldRequirement requirement;
  requirement.predicted = true;
  requirement.legitimate_flags = filter.flags();

  std::map<std::string, double> rates;
  std::vector<std::string> notes;
  for (const auto& subgroup : partition.subgroups) {
    require_fields(dataset, subgroup.member_indices, requirement, kModule);
    Subgroup conditioned{subgroup.key, {}};
    for (std::size_t i : subgroup.member_indices) {
      if (filter(dataset[i])) conditioned.member_indices.push_back(i);
    }
    const std::string label = subgroup_label(subgroup);
    if (conditioned.member_indices.empty()) {
      const std::string note = "excluded " + label + ": emptied by legitimate filter";
      if (options.strict) throw UsageError(kModule, "strict mode: " + note);
      notes.push_back(note);
      continue;
    }
    rates.emplace(label, *subgroup_rate(dataset, conditioned,
                                        RateKind::pass_rate(), positive_label));
  }

  MetricResult result;
  if (rates.empty()) {
    result.metric_id = "cspr";
    result.notes.emplace_back("empty conditional population");
  } else {
    result = min_max_ratio(rates, "cspr");
  }
  result.notes.insert(result.notes.end(), notes.begin(), notes.end());
  if (!filter.tests().empty()) {
    result.notes.push_back("conditioned on " + filter.to_string());
  }
  add_partition_notes(result, partition);
  return result;
}

MetricResult equal_opportunity_ratio(const Dataset& dataset,
                                     const SubgroupPartition& partition,
                                     std::string_view positive_label,
                                     const MetricOptions& options) {
  auto result = RateParity(dataset, partition, positive_label, RateKind::tpr(),
                           options, "eopp");
  add_partition_notes(result, partition);
  return result;
}

MetricResult rate_parity_ratio(const Dataset& dataset,
                               const SubgroupPartition& partition,
                               std::string_view positive_label,
                               const RateKind& kind,
                               const MetricOptions& options) {
  std::string id;
  switch (kind.kind) {
    case RateKind::Kind::kPassRate: id = "pass-rate-parity"; break;
    case RateKind::Kind::kTpr: id = "tpr-parity"; break;
    case RateKind::Kind::kTnr: id = "tnr-parity"; break;
    case RateKind::Kind::kFpr: id = "fpr-parity"; break;
    case RateKind::Kind::kFnr: id = "fnr-parity"; break;
    case RateKind::Kind::kPredictedClassRate:
      id = "class-rate-parity(" + kind.class_label + ")";
      break;
  }
  auto result = RateParity(dataset, partition, positive_label, kind, options, id);
  add_partition_notes(result, partition);
  return result;
}

MetricResult equalized_odds_ratio(const Dataset& dataset,
                                  const SubgroupPartition& partition,
                                  std::string_view positive_label,
                                  const MetricOptions& options) {
  const auto tpr = RateParity(dataset, partition, positive_label,
                              RateKind::tpr(), options, "eodds");
  const auto fpr = RateParity(dataset, partition, positive_label,
                              RateKind::fpr(), options, "eodds");

  MetricResult result;
  if (!tpr.defined() && !fpr.defined()) {
    result.metric_id = "eodds";
    result.notes.emplace_back("TPR and FPR undefined for every subgroup");
  } else {
    const bool use_fpr = !tpr.defined() || (fpr.defined() && *fpr.value < *tpr.value);
    result = use_fpr ? fpr : tpr;
    result.notes.clear();
    result.notes.emplace_back(use_fpr ? "FPR family" : "TPR family");
  }
  for (const auto& note : tpr.notes) result.notes.push_back("TPR: " + note);
  for (const auto& note : fpr.notes) result.notes.push_back("FPR: " + note);
  result.breakdowns["TPR"] = tpr.per_subgroup;
  result.breakdowns["FPR"] = fpr.per_subgroup;
  add_partition_notes(result, partition);
  return result;
}

std::optional<double> group_benefit_ratio(const Dataset& dataset,
                                          const Subgroup& subgroup,
                                          std::string_view positive_label) {
  if (subgroup.member_indices.empty()) {
    throw UsageError(kModule, "group benefit requested for empty subgroup " +
                                  subgroup_label(subgroup));
  }
  FieldRequirement requirement;
  requirement.predicted = true;
  requirement.true_label = true;
  require_fields(dataset, subgroup.member_indices, requirement, kModule);
  const auto counts =
      Count(dataset, subgroup.member_indices, positive_label, /*with_truth=*/true);
  if (counts.actual_positive == 0) return std::nullopt;
  // Both rates share the member count, so it cancels.
  return Ratio(counts.predicted_positive, counts.actual_positive);
}

MetricResult group_benefit_ratio_intersectional(
    const Dataset& dataset, const SubgroupPartition& partition,
    std::string_view positive_label, const MetricOptions& options) {
  RequireSubgroups(partition, 1);
  std::vector<SubgroupStatistic> stats;
  for (const auto& subgroup : partition.subgroups) {
    stats.push_back({subgroup_label(subgroup),
                     group_benefit_ratio(dataset, subgroup, positive_label)});
  }
  auto result = ratio_over_defined(stats, "gbr", "GBR", options, kModule);
  add_partition_notes(result, partition);
  return result;
}

MetricResult multiclass_equalized_odds_ratio(const Dataset& dataset,
                                             const SubgroupPartition& partition,
                                             const MulticlassOptions& options) {
  RequireSubgroups(partition, 1);
  const auto& classes = dataset.class_set();
  if (classes.size() < 2) {
    throw UsageError(kModule, "multiclass metric needs at least 2 classes, got " +
                                  std::to_string(classes.size()));
  }
  FieldRequirement requirement;
  requirement.predicted = true;
  requirement.true_label = options.condition_on_true_label;
  for (const auto& subgroup : partition.subgroups) {
    require_fields(dataset, subgroup.member_indices, requirement, kModule);
  }

  std::optional<MetricResult> worst;
  std::string worst_class;
  std::map<std::string, std::map<std::string, double>> breakdowns;
  std::vector<std::string> class_notes;
  for (const auto& label : classes) {
    std::vector<SubgroupStatistic> stats;
    for (const auto& subgroup : partition.subgroups) {
      std::optional<double> rate;
      if (options.condition_on_true_label) {
        std::size_t actual = 0;
        std::size_t hit = 0;
        for (std::size_t i : subgroup.member_indices) {
          if (*dataset[i].true_label != label) continue;
          ++actual;
          hit += *dataset[i].predicted_label == label;
        }
        if (actual > 0) rate = Ratio(hit, actual);
      } else {
        rate = subgroup_rate(dataset, subgroup, RateKind::predicted_class(label), {});
      }
      stats.push_back({subgroup_label(subgroup), rate});
    }
    const std::string statistic =
        options.condition_on_true_label ? "P(pred=" + label + "|true=" + label + ")"
                                        : RateKind::predicted_class(label).name();
    auto per_class = ratio_over_defined(stats, "meodd", statistic, options.base, kModule);
    for (const auto& note : per_class.notes) {
      class_notes.push_back("class " + label + ": " + note);
    }
    breakdowns["class=" + label] = per_class.per_subgroup;
    if (per_class.defined() && (!worst || *per_class.value < *worst->value)) {
      worst = std::move(per_class);
      worst_class = label;
    }
  }

  MetricResult result;
  if (worst) {
    result = std::move(*worst);
    result.notes.clear();
    result.notes.push_back("achieving class: " + worst_class);
  } else {
    result.metric_id = "meodd";
    result.notes.emplace_back("undefined for every class");
  }
  if (options.condition_on_true_label) {
    result.notes.emplace_back(
        "extension: rates conditioned on the true label");
  }
  result.notes.insert(result.notes.end(), class_notes.begin(), class_notes.end());
  result.breakdowns = std::move(breakdowns);
  add_partition_notes(result, partition);
  return result;
}

}  // namespace sgfair
