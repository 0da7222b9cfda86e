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

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgfair/data_model.hpp"
#include "sgfair/metric_result.hpp"
#include "sgfair/subgroups.hpp"

namespace sgfair {

struct RankedItem {
  std::string id;
  // Aligned with the population schema.
  std::vector<std::optional<std::string>> attributes;
};

// Items in rank order; the item at index i holds rank i + 1. Keeps a
// reference to the population dataset, which must outlive the list.
class RankedList {
 public:
  RankedList(const Dataset& population, std::vector<RankedItem> items);

  std::size_t size() const noexcept { return items_.size(); }
  std::span<const RankedItem> items() const noexcept { return items_; }
  // 1-based.
  const RankedItem& at_rank(std::size_t rank) const { return items_.at(rank - 1); }
  const Dataset& population() const noexcept { return *population_; }

  // True when the item at `rank` belongs to `subgroup`.
  bool belongs(std::size_t rank, const Subgroup& subgroup) const;

 private:
  const Dataset* population_;
  std::vector<RankedItem> items_;
};

struct RankedListColumns {
  std::string rank_column = "rank";
  // Optional; items are named by their rank when empty.
  std::string id_column;
  char delimiter = ',';
};

// Reads a delimited file with an integer rank column (1-based, unique,
// contiguous) and one column per population protected attribute. Row order
// is irrelevant.
RankedList load_ranked_list(std::istream& source, const Dataset& population,
                            const RankedListColumns& columns = {});

// Explicit population fraction per subgroup label, overriding the dataset.
using PopulationShares = std::map<std::string, double>;

// Fraction of the top-k items in `subgroup` over the subgroup's population
// fraction; std::nullopt when the population fraction is 0.
std::optional<double> skew_at_k(const RankedList& ranked,
                                const SubgroupPartition& partition,
                                const Subgroup& subgroup, std::size_t k,
                                const PopulationShares* shares = nullptr);

// Min-max ratio of skew@k over included subgroups ("skew").
MetricResult skew_ratio_at_k(const RankedList& ranked,
                             const SubgroupPartition& partition, std::size_t k,
                             const PopulationShares* shares = nullptr,
                             const MetricOptions& options = {});

struct AttentionModel {
  enum class Kind { kLogarithmic, kGeometric };

  Kind kind = Kind::kLogarithmic;
  // Success probability for kGeometric, in (0, 1).
  double p = 0.5;

  static AttentionModel logarithmic() { return {Kind::kLogarithmic, 0.5}; }
  static AttentionModel geometric(double p = 0.5);
};

// Logarithmic: 1 / log2(k + 1). Geometric: p (1 - p)^(k - 1).
double attention_value(const AttentionModel& model, std::size_t k);

// Mean attention over the list positions held by `subgroup`; std::nullopt
// when the subgroup has no item in the list.
std::optional<double> mean_attention(const RankedList& ranked,
                                     const SubgroupPartition& partition,
                                     const Subgroup& subgroup,
                                     const AttentionModel& model);

// Min-max ratio of mean attention ("attention").
MetricResult attention_ratio(const RankedList& ranked,
                             const SubgroupPartition& partition,
                             const AttentionModel& model,
                             const MetricOptions& options = {});

}  // namespace sgfair
