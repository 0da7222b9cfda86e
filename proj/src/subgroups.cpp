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

#include "sgfair/subgroups.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "sgfair/error.hpp"

namespace sgfair {

namespace {

constexpr const char* kModule = "subgroups";
constexpr const char* kTimes = "\xC3\x97";  // U+00D7

}  // namespace

std::string subgroup_label(const SubgroupKey& key) {
  std::string label;
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (i > 0) label += kTimes;
    label += key[i].first;
    label += '=';
    label += key[i].second;
  }
  return label;
}

std::string subgroup_label(const Subgroup& subgroup) {
  return subgroup_label(subgroup.key);
}

const char* to_string(ExclusionReason reason) {
  switch (reason) {
    case ExclusionReason::kEmpty:
      return "empty";
    case ExclusionReason::kBelowSupport:
      return "below_support";
  }
  return "unknown";
}

SubgroupPartition build_partition(const Dataset& dataset,
                                  std::span<const std::string> attribute_names,
                                  std::size_t min_support) {
  if (attribute_names.empty()) {
    throw ConfigError(kModule, "no protected attributes selected");
  }
  std::vector<std::size_t> columns;
  std::set<std::string> seen;
  for (const auto& name : attribute_names) {
    auto index = dataset.attribute_index(name);
    if (!index) {
      throw ConfigError(kModule, "unknown protected attribute '" + name + "'");
    }
    if (!seen.insert(name).second) {
      throw ConfigError(kModule, "protected attribute '" + name +
                                     "' selected twice");
    }
    columns.push_back(*index);
  }

  // Mixed-radix candidate index; the first attribute is most significant so
  // that index order equals lexicographic (attribute, domain) order.
  const auto& schema = dataset.schema();
  std::vector<std::size_t> strides(columns.size());
  std::size_t total = 1;
  for (std::size_t a = columns.size(); a-- > 0;) {
    strides[a] = total;
    const std::size_t radix = schema[columns[a]].domain.size();
    if (radix != 0 && total > std::numeric_limits<std::size_t>::max() / radix) {
      throw ConfigError(kModule, "too many candidate subgroups");
    }
    total *= radix;
  }

  SubgroupPartition partition;
  partition.attribute_names.assign(attribute_names.begin(), attribute_names.end());
  partition.total_candidates = total;
  partition.min_support = min_support;

  std::vector<std::map<std::string, std::size_t, std::less<>>> digit_of(columns.size());
  for (std::size_t a = 0; a < columns.size(); ++a) {
    const auto& domain = schema[columns[a]].domain;
    for (std::size_t d = 0; d < domain.size(); ++d) digit_of[a].emplace(domain[d], d);
  }

  std::map<std::size_t, std::vector<std::size_t>> members;
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    const auto& attributes = dataset[r].attributes;
    std::size_t index = 0;
    bool assigned = true;
    for (std::size_t a = 0; a < columns.size(); ++a) {
      const auto& value = attributes[columns[a]];
      if (!value) {
        assigned = false;
        break;
      }
      index += digit_of[a].find(*value)->second * strides[a];
    }
    if (assigned) {
      members[index].push_back(r);
    } else {
      partition.unassigned.push_back(r);
    }
  }

  const std::size_t threshold = std::max<std::size_t>(min_support, 1);
  for (std::size_t index = 0; index < total; ++index) {
    Subgroup subgroup;
    std::size_t rest = index;
    for (std::size_t a = 0; a < columns.size(); ++a) {
      const std::size_t digit = rest / strides[a];
      rest %= strides[a];
      subgroup.key.emplace_back(schema[columns[a]].name,
                                schema[columns[a]].domain[digit]);
    }
    if (auto it = members.find(index); it != members.end()) {
      subgroup.member_indices = std::move(it->second);
    }
    if (subgroup.size() >= threshold) {
      partition.subgroups.push_back(std::move(subgroup));
    } else {
      const auto reason = subgroup.size() == 0 ? ExclusionReason::kEmpty
                                               : ExclusionReason::kBelowSupport;
      partition.excluded.push_back({std::move(subgroup), reason});
    }
  }
  return partition;
}

bool key_matches(const SubgroupKey& key,
                 const std::vector<AttributeSchema>& schema,
                 const std::vector<std::optional<std::string>>& attributes) {
  for (const auto& [name, label] : key) {
    bool matched = false;
    for (std::size_t a = 0; a < schema.size(); ++a) {
      if (schema[a].name != name) continue;
      matched = attributes[a].has_value() && *attributes[a] == label;
      break;
    }
    if (!matched) return false;
  }
  return true;
}

}  // namespace sgfair
