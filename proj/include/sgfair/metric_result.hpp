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

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sgfair/subgroups.hpp"

namespace sgfair {

enum class MetricKind {
  kRatio,       // worst-case min/max ratio in [0, 1]; 1 means parity
  kDivergence,  // worst-case pairwise divergence >= 0; 0 means parity
};

struct MetricResult {
  std::string metric_id;
  MetricKind kind = MetricKind::kRatio;
  // std::nullopt is the UNDEFINED value.
  std::optional<double> value;
  // Per-subgroup statistic the worst case was taken over, keyed by label.
  std::map<std::string, double> per_subgroup;
  std::string min_subgroup;
  std::string max_subgroup;
  // Achieving ordered pair for pairwise metrics (disparate impact,
  // divergences).
  std::optional<std::pair<std::string, std::string>> worst_pair;
  std::vector<std::string> notes;
  // Extra named statistic families (both rate families of equalized odds,
  // every class of the multiclass metric, pairwise divergences).
  std::map<std::string, std::map<std::string, double>> breakdowns;

  bool defined() const noexcept { return value.has_value(); }
};

inline constexpr const char* kNoteAllZero = "degenerate: all-zero";
inline constexpr const char* kNoteSingleSubgroup = "single subgroup";

// The worst-case kernel: min over max of the per-subgroup statistics.
//
// All-zero statistics and a lone subgroup both give 1 (no disparity among
// identical statistics) with a note. Ties pick the lexicographically first
// label. Throws UsageError on an empty map or a negative/NaN statistic.
MetricResult min_max_ratio(const std::map<std::string, double>& values,
                           std::string metric_id = "min_max_ratio");

// Per-subgroup statistic that may be UNDEFINED (empty conditioning set).
struct SubgroupStatistic {
  std::string label;
  std::optional<double> value;
};

struct MetricOptions {
  // Turns exclusion of UNDEFINED subgroups into a UsageError.
  bool strict = false;
};

// min_max_ratio over the defined entries. UNDEFINED entries are excluded
// with a note naming `statistic`; if nothing is defined the result is
// UNDEFINED.
MetricResult ratio_over_defined(const std::vector<SubgroupStatistic>& stats,
                                const std::string& metric_id,
                                const std::string& statistic,
                                const MetricOptions& options,
                                const std::string& module);

// Records one note per excluded or unassigned group of the partition.
void add_partition_notes(MetricResult& result,
                         const SubgroupPartition& partition);

}  // namespace sgfair
