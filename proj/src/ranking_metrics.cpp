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

#include "sgfair/ranking_metrics.hpp"

#include <charconv>
#include <cmath>
#include <unordered_map>

#include "sgfair/csv.hpp"
#include "sgfair/error.hpp"

namespace sgfair {

namespace {

constexpr const char* kModule = "ranking_metrics";

}  // namespace

RankedList::RankedList(const Dataset& population, std::vector<RankedItem> items)
    : population_(&population), items_(std::move(items)) {
  const auto& schema = population.schema();
  for (std::size_t i = 0; i < items_.size(); ++i) {
    const auto& attributes = items_[i].attributes;
    if (attributes.size() != schema.size()) {
      throw SchemaError(kModule, "item at rank " + std::to_string(i + 1) +
                                     " does not match the population schema");
    }
    for (std::size_t a = 0; a < schema.size(); ++a) {
      if (attributes[a] && !schema[a].index_of(*attributes[a])) {
        throw SchemaError(kModule, "item at rank " + std::to_string(i + 1) +
                                       ": '" + *attributes[a] +
                                       "' is not in the domain of '" +
                                       schema[a].name + "'");
      }
    }
  }
}

bool RankedList::belongs(std::size_t rank, const Subgroup& subgroup) const {
  return key_matches(subgroup.key, population_->schema(),
                     at_rank(rank).attributes);
}

RankedList load_ranked_list(std::istream& source, const Dataset& population,
                            const RankedListColumns& columns) {
  csv::Reader reader(source, columns.delimiter);
  std::vector<std::string> header;
  if (!reader.next(header)) throw ParseError(1, "ranked list has no header row");
  std::unordered_map<std::string, std::size_t> by_name;
  for (std::size_t c = 0; c < header.size(); ++c) by_name.emplace(header[c], c);

  auto column = [&](const std::string& name) {
    auto it = by_name.find(name);
    if (it == by_name.end()) {
      throw ConfigError(kModule, "ranked list is missing column '" + name + "'");
    }
    return it->second;
  };
  const std::size_t rank_idx = column(columns.rank_column);
  std::optional<std::size_t> id_idx;
  if (!columns.id_column.empty()) id_idx = column(columns.id_column);
  std::vector<std::size_t> attribute_idx;
  for (const auto& attribute : population.schema()) {
    attribute_idx.push_back(column(attribute.name));
  }

  std::vector<std::optional<RankedItem>> slots;
  std::vector<std::pair<std::size_t, RankedItem>> rows;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    if (fields.size() != header.size()) {
      throw ParseError(reader.row(), "expected " + std::to_string(header.size()) +
                                         " fields, found " +
                                         std::to_string(fields.size()));
    }
    const std::string& text = fields[rank_idx];
    std::size_t rank = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), rank);
    if (ec != std::errc() || ptr != text.data() + text.size() || rank == 0) {
      throw ParseError(reader.row(), "rank '" + text + "' is not a positive integer");
    }
    RankedItem item;
    item.id = id_idx ? fields[*id_idx] : text;
    for (std::size_t idx : attribute_idx) {
      if (fields[idx].empty()) {
        item.attributes.emplace_back(std::nullopt);
      } else {
        item.attributes.emplace_back(fields[idx]);
      }
    }
    rows.emplace_back(rank, std::move(item));
  }

  slots.resize(rows.size());
  for (auto& [rank, item] : rows) {
    if (rank > rows.size()) {
      throw SchemaError(kModule, "rank " + std::to_string(rank) +
                                     " exceeds the list length " +
                                     std::to_string(rows.size()));
    }
    if (slots[rank - 1]) {
      throw SchemaError(kModule, "rank " + std::to_string(rank) + " appears twice");
    }
    slots[rank - 1] = std::move(item);
  }
  std::vector<RankedItem> items;
  items.reserve(slots.size());
  for (auto& slot : slots) items.push_back(std::move(*slot));
  return RankedList(population, std::move(items));
}

std::optional<double> skew_at_k(const RankedList& ranked,
                                const SubgroupPartition& /*partition*/,
                                const Subgroup& subgroup, std::size_t k,
                                const PopulationShares* shares) {
  if (k < 1 || k > ranked.size()) {
    throw UsageError(kModule, "k = " + std::to_string(k) +
                                  " is outside 1.." + std::to_string(ranked.size()));
  }
  double population_share = 0.0;
  if (shares) {
    auto it = shares->find(subgroup_label(subgroup));
    if (it != shares->end()) population_share = it->second;
  } else if (ranked.population().size() > 0) {
    population_share = static_cast<double>(subgroup.size()) /
                       static_cast<double>(ranked.population().size());
  }
  if (!(population_share > 0.0)) return std::nullopt;

  std::size_t in_top = 0;
  for (std::size_t rank = 1; rank <= k; ++rank) {
    in_top += ranked.belongs(rank, subgroup);
  }
  const double top_share = static_cast<double>(in_top) / static_cast<double>(k);
  return top_share / population_share;
}

MetricResult skew_ratio_at_k(const RankedList& ranked,
                             const SubgroupPartition& partition, std::size_t k,
                             const PopulationShares* shares,
                             const MetricOptions& options) {
  if (partition.subgroups.empty()) {
    throw UsageError(kModule, "partition has no included subgroups");
  }
  std::vector<SubgroupStatistic> stats;
  for (const auto& subgroup : partition.subgroups) {
    stats.push_back({subgroup_label(subgroup),
                     skew_at_k(ranked, partition, subgroup, k, shares)});
  }
  auto result = ratio_over_defined(stats, "skew", "skew@" + std::to_string(k),
                                   options, kModule);
  result.notes.push_back("k = " + std::to_string(k));
  add_partition_notes(result, partition);
  return result;
}

AttentionModel AttentionModel::geometric(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw UsageError(kModule, "geometric attention needs p in (0, 1)");
  }
  return {Kind::kGeometric, p};
}

double attention_value(const AttentionModel& model, std::size_t k) {
  if (k < 1) throw UsageError(kModule, "attention position must be >= 1");
  switch (model.kind) {
    case AttentionModel::Kind::kLogarithmic:
      return 1.0 / std::log2(static_cast<double>(k) + 1.0);
    case AttentionModel::Kind::kGeometric:
      if (!(model.p > 0.0 && model.p < 1.0)) {
        throw UsageError(kModule, "geometric attention needs p in (0, 1)");
      }
      return model.p * std::pow(1.0 - model.p, static_cast<double>(k - 1));
  }
  return 0.0;
}

std::optional<double> mean_attention(const RankedList& ranked,
                                     const SubgroupPartition& /*partition*/,
                                     const Subgroup& subgroup,
                                     const AttentionModel& model) {
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t rank = 1; rank <= ranked.size(); ++rank) {
    if (!ranked.belongs(rank, subgroup)) continue;
    total += attention_value(model, rank);
    ++count;
  }
  if (count == 0) return std::nullopt;
  return total / static_cast<double>(count);
}

MetricResult attention_ratio(const RankedList& ranked,
                             const SubgroupPartition& partition,
                             const AttentionModel& model,
                             const MetricOptions& options) {
  if (partition.subgroups.empty()) {
    throw UsageError(kModule, "partition has no included subgroups");
  }
  std::vector<SubgroupStatistic> stats;
  for (const auto& subgroup : partition.subgroups) {
    stats.push_back({subgroup_label(subgroup),
                     mean_attention(ranked, partition, subgroup, model)});
  }
  auto result = ratio_over_defined(stats, "attention", "mean attention",
                                   options, kModule);
  add_partition_notes(result, partition);
  return result;
}

}  // namespace sgfair
