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
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace properties {

struct SuiteResult {
  explicit SuiteResult(std::string suite_name) : name(std::move(suite_name)) {}

  std::string name;
  std::size_t cases = 0;
  std::vector<std::string> failures;  // first few counterexamples
  bool ok() const { return failures.empty(); }
};

inline constexpr std::uint64_t kSeed = 0x5eed2020;

SuiteResult Range(std::uint64_t seed);
SuiteResult DiEqualsDpr(std::uint64_t seed);
SuiteResult PartitionInvariants(std::uint64_t seed);
SuiteResult ClassificationOracle(std::uint64_t seed);
SuiteResult DistributionOracle(std::uint64_t seed);
SuiteResult RankingOracle(std::uint64_t seed);
SuiteResult Duplication(std::uint64_t seed);
SuiteResult Permutation(std::uint64_t seed);
SuiteResult Nesting(std::uint64_t seed);
SuiteResult RoundTrip(std::uint64_t seed);
SuiteResult LabelSwap(std::uint64_t seed);
SuiteResult MeoddBound(std::uint64_t seed);
SuiteResult MinMaxIdentity(std::uint64_t seed);
SuiteResult KlSeparation(std::uint64_t seed);
SuiteResult BinDoubling(std::uint64_t seed);
SuiteResult AttentionShape(std::uint64_t seed);
SuiteResult SwapMonotonicity(std::uint64_t seed);
SuiteResult SkewConsistency(std::uint64_t seed);

std::vector<SuiteResult> RunAll(std::uint64_t seed = kSeed);

}  // namespace properties
