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

#include "sgfair/distribution_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sgfair/error.hpp"

namespace sgfair {

namespace {

constexpr const char* kModule = "distribution_metrics";

}  // namespace

BinEdges::BinEdges(std::vector<double> edges) : edges_(std::move(edges)) {
  if (edges_.size() < 2) {
    throw UsageError(kModule, "bin edges need at least two values");
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (!std::isfinite(edges_[i])) {
      throw UsageError(kModule, "bin edges must be finite");
    }
    if (i > 0 && !(edges_[i] > edges_[i - 1])) {
      throw UsageError(kModule, "bin edges must be strictly increasing");
    }
  }
}

BinEdges BinEdges::equal_width(double lo, double hi, std::size_t bins) {
  if (bins == 0) throw UsageError(kModule, "bin count must be positive");
  if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
    throw UsageError(kModule, "invalid histogram range");
  }
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  std::vector<double> edges(bins + 1);
  const double width = hi - lo;
  for (std::size_t i = 0; i < bins; ++i) {
    edges[i] = lo + width * (static_cast<double>(i) / static_cast<double>(bins));
  }
  edges[bins] = hi;
  return BinEdges(std::move(edges));
}

std::size_t BinEdges::bin_of(double value) const {
  auto it = std::upper_bound(edges_.begin(), edges_.end(), value);
  if (it == edges_.begin()) return 0;
  const auto index = static_cast<std::size_t>(it - edges_.begin()) - 1;
  return std::min(index, bins() - 1);
}

DistributionEstimate estimate_distribution(std::span<const double> scores,
                                           const BinEdges& edges,
                                           double smoothing) {
  if (scores.empty()) {
    throw UsageError(kModule, "cannot estimate a distribution from no scores");
  }
  if (!(smoothing > 0.0) || !std::isfinite(smoothing)) {
    throw UsageError(kModule, "smoothing must be positive");
  }
  std::vector<std::size_t> counts(edges.bins(), 0);
  for (double score : scores) {
    if (!std::isfinite(score)) throw UsageError(kModule, "score is not finite");
    ++counts[edges.bin_of(score)];
  }
  DistributionEstimate estimate{edges, std::vector<double>(edges.bins()),
                                scores.size()};
  const double n = static_cast<double>(scores.size());
  double total = 0.0;
  for (std::size_t b = 0; b < counts.size(); ++b) {
    estimate.probabilities[b] = static_cast<double>(counts[b]) / n + smoothing;
    total += estimate.probabilities[b];
  }
  for (double& p : estimate.probabilities) p /= total;
  return estimate;
}

namespace {

void RequireSharedEdges(const DistributionEstimate& p,
                        const DistributionEstimate& q) {
  if (!(p.bin_edges == q.bin_edges) ||
      p.probabilities.size() != q.probabilities.size()) {
    throw UsageError(kModule, "distributions do not share bin edges");
  }
}

}  // namespace

double kl_divergence(const DistributionEstimate& p,
                     const DistributionEstimate& q) {
  RequireSharedEdges(p, q);
  double sum = 0.0;
  for (std::size_t b = 0; b < p.probabilities.size(); ++b) {
    const double pb = p.probabilities[b];
    sum += pb * std::log(pb / q.probabilities[b]);
  }
  // Gibbs' inequality; rounding can leave a tiny negative residue.
  return std::max(sum, 0.0);
}

double total_variation(const DistributionEstimate& p,
                       const DistributionEstimate& q) {
  RequireSharedEdges(p, q);
  double sum = 0.0;
  for (std::size_t b = 0; b < p.probabilities.size(); ++b) {
    sum += std::abs(p.probabilities[b] - q.probabilities[b]);
  }
  return 0.5 * sum;
}

MetricResult worst_case_kl(const Dataset& dataset,
                           const SubgroupPartition& partition,
                           const DivergenceOptions& options) {
  if (partition.subgroups.size() < 2) {
    throw UsageError(kModule, "need at least 2 included subgroups, partition has " +
                                  std::to_string(partition.subgroups.size()));
  }
  FieldRequirement requirement;
  requirement.score = true;

  std::map<std::string, std::vector<double>> scores;
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  for (const auto& subgroup : partition.subgroups) {
    require_fields(dataset, subgroup.member_indices, requirement, kModule);
    auto& values = scores[subgroup_label(subgroup)];
    for (std::size_t i : subgroup.member_indices) {
      const double score = *dataset[i].score;
      if (!std::isfinite(score)) {
        throw UsageError(kModule, "record " + std::to_string(i) +
                                      " has a non-finite score");
      }
      values.push_back(score);
      lo = first ? score : std::min(lo, score);
      hi = first ? score : std::max(hi, score);
      first = false;
    }
  }
  const auto edges = BinEdges::equal_width(lo, hi, options.bins);

  std::map<std::string, DistributionEstimate> estimates;
  for (const auto& [label, values] : scores) {
    estimates.emplace(label, estimate_distribution(values, edges, options.smoothing));
  }

  const bool kl = options.divergence == Divergence::kKl;
  MetricResult result;
  result.metric_id = "wdkl";
  result.kind = MetricKind::kDivergence;
  auto& pairwise = result.breakdowns["pairwise"];
  for (const auto& [from, p] : estimates) {
    double row_worst = 0.0;
    for (const auto& [to, q] : estimates) {
      if (from == to) continue;
      const double d = kl ? kl_divergence(p, q) : total_variation(p, q);
      pairwise.emplace(from + " || " + to, d);
      row_worst = std::max(row_worst, d);
      if (!result.value || d > *result.value) {
        result.value = d;
        result.worst_pair = {from, to};
      }
    }
    result.per_subgroup.emplace(from, row_worst);
  }
  result.notes.push_back(std::to_string(options.bins) +
                         " equal-width bins over the pooled score range");
  result.notes.emplace_back(kl ? "divergence: KL (nats)"
                               : "divergence: total variation");
  add_partition_notes(result, partition);
  return result;
}

}  // namespace sgfair
