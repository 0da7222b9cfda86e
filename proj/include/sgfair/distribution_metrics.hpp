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
#include <vector>

#include "sgfair/data_model.hpp"
#include "sgfair/metric_result.hpp"
#include "sgfair/subgroups.hpp"

namespace sgfair {

inline constexpr std::size_t kDefaultBins = 64;
inline constexpr double kDefaultSmoothing = 1e-9;

// Strictly increasing histogram edges. Bin b covers [e_b, e_{b+1}); the last
// bin is closed on the right.
class BinEdges {
 public:
  explicit BinEdges(std::vector<double> edges);

  // `bins` equal-width bins over [lo, hi]. A zero-width range is widened to
  // [lo - 0.5, hi + 0.5] so a point mass still has a home.
  static BinEdges equal_width(double lo, double hi, std::size_t bins);

  std::size_t bins() const noexcept { return edges_.size() - 1; }
  const std::vector<double>& edges() const noexcept { return edges_; }

  // Values outside the range are clamped into the first or last bin.
  std::size_t bin_of(double value) const;

  bool operator==(const BinEdges&) const = default;

 private:
  std::vector<double> edges_;
};

// Smoothed histogram estimate of one subgroup's score distribution.
struct DistributionEstimate {
  BinEdges bin_edges;
  std::vector<double> probabilities;  // every entry > 0, sums to 1
  std::size_t sample_count = 0;
};

// Relative frequencies plus `smoothing` in every bin, renormalized.
DistributionEstimate estimate_distribution(std::span<const double> scores,
                                           const BinEdges& edges,
                                           double smoothing = kDefaultSmoothing);

// Sum of p_b * ln(p_b / q_b), in nats.
double kl_divergence(const DistributionEstimate& p, const DistributionEstimate& q);

// Half the L1 distance between the bin probabilities.
double total_variation(const DistributionEstimate& p,
                       const DistributionEstimate& q);

enum class Divergence { kKl, kTotalVariation };

struct DivergenceOptions {
  std::size_t bins = kDefaultBins;
  double smoothing = kDefaultSmoothing;
  Divergence divergence = Divergence::kKl;
};

// Maximum divergence over ordered pairs of included subgroups, estimated on
// equal-width bins spanning the pooled score range ("wdkl"; a note names the
// divergence actually used). per_subgroup holds each subgroup's largest outgoing
// divergence; breakdowns["pairwise"] holds every pair as "a || b".
MetricResult worst_case_kl(const Dataset& dataset,
                           const SubgroupPartition& partition,
                           const DivergenceOptions& options = {});

}  // namespace sgfair
