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

#include "sgfair/metric_result.hpp"

#include <cmath>

#include "sgfair/error.hpp"

namespace sgfair {

MetricResult min_max_ratio(const std::map<std::string, double>& values,
                           std::string metric_id) {
  if (values.empty()) {
    throw UsageError("classification_metrics",
                     "min-max ratio needs at least one subgroup statistic");
  }
  MetricResult result;
  result.metric_id = std::move(metric_id);
  result.per_subgroup = values;

  // std::map iterates in label order, so strict comparisons keep the first
  // label among ties.
  auto min_it = values.begin();
  auto max_it = values.begin();
  for (auto it = values.begin(); it != values.end(); ++it) {
    if (std::isnan(it->second) || it->second < 0.0) {
      throw UsageError("classification_metrics",
                       "statistic for '" + it->first + "' is negative or NaN");
    }
    if (it->second < min_it->second) min_it = it;
    if (it->second > max_it->second) max_it = it;
  }
  result.min_subgroup = min_it->first;
  result.max_subgroup = max_it->first;

  if (values.size() == 1) {
    result.value = 1.0;
    result.notes.emplace_back(kNoteSingleSubgroup);
  } else if (max_it->second == 0.0) {
    result.value = 1.0;
    result.notes.emplace_back(kNoteAllZero);
  } else {
    result.value = min_it->second / max_it->second;
  }
  return result;
}

MetricResult ratio_over_defined(const std::vector<SubgroupStatistic>& stats,
                                const std::string& metric_id,
                                const std::string& statistic,
                                const MetricOptions& options,
                                const std::string& module) {
  std::map<std::string, double> defined;
  std::vector<std::string> notes;
  for (const auto& stat : stats) {
    if (stat.value) {
      defined.emplace(stat.label, *stat.value);
      continue;
    }
    const std::string note =
        "excluded " + stat.label + ": " + statistic + " undefined";
    if (options.strict) throw UsageError(module, "strict mode: " + note);
    notes.push_back(note);
  }
  MetricResult result;
  if (defined.empty()) {
    result.metric_id = metric_id;
    result.notes.push_back(statistic + " undefined for every subgroup");
  } else {
    result = min_max_ratio(defined, metric_id);
  }
  result.notes.insert(result.notes.end(), notes.begin(), notes.end());
  return result;
}

void add_partition_notes(MetricResult& result,
                         const SubgroupPartition& partition) {
  for (const auto& excluded : partition.excluded) {
    result.notes.push_back("excluded " + subgroup_label(excluded.subgroup) +
                           ": " + to_string(excluded.reason));
  }
  if (!partition.unassigned.empty()) {
    result.notes.push_back(std::to_string(partition.unassigned.size()) +
                           " unassigned records (missing protected value)");
  }
}

}  // namespace sgfair
