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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sgfair/data_model.hpp"

namespace sgfair {

// (attribute name, category label) pairs in partition attribute order.
using SubgroupKey = std::vector<std::pair<std::string, std::string>>;

// Intersection of one category from each selected protected attribute.
struct Subgroup {
  SubgroupKey key;
  std::vector<std::size_t> member_indices;  // strictly increasing

  std::size_t size() const noexcept { return member_indices.size(); }
};

// "name=value" pairs in key order joined by U+00D7, e.g.
// "gender=woman×race=black".
std::string subgroup_label(const Subgroup& subgroup);
std::string subgroup_label(const SubgroupKey& key);

enum class ExclusionReason { kEmpty, kBelowSupport };

const char* to_string(ExclusionReason reason);

struct ExcludedSubgroup {
  Subgroup subgroup;  // keeps its members when excluded for low support
  ExclusionReason reason;
};

// Cartesian-product partition of a dataset. Included subgroups and excluded
// candidates both appear in lexicographic (attribute order, domain order)
// candidate order.
struct SubgroupPartition {
  std::vector<std::string> attribute_names;
  std::vector<Subgroup> subgroups;
  std::vector<ExcludedSubgroup> excluded;
  std::size_t total_candidates = 0;
  std::size_t min_support = 1;
  // Records with a missing value on any selected attribute.
  std::vector<std::size_t> unassigned;
};

inline constexpr std::size_t kDefaultMinSupport = 1;

// Candidates with fewer than max(min_support, 1) members are moved to
// `excluded`. Throws ConfigError on an empty or unknown attribute list.
SubgroupPartition build_partition(const Dataset& dataset,
                                  std::span<const std::string> attribute_names,
                                  std::size_t min_support = kDefaultMinSupport);

// True when every (attribute, label) pair of `key` matches the attribute
// values of `attributes` (aligned with `schema`).
bool key_matches(const SubgroupKey& key,
                 const std::vector<AttributeSchema>& schema,
                 const std::vector<std::optional<std::string>>& attributes);

}  // namespace sgfair
