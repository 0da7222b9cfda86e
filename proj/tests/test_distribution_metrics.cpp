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

#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "sgfair/distribution_metrics.hpp"
#include "sgfair/error.hpp"

using namespace sgfair;

namespace {

std::vector<double> Normal(std::uint64_t seed, std::size_t n, double mean, double sd = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(mean, sd);
  std::vector<double> out(n);
  for (double& x : out) x = dist(rng);
  return out;
}

Dataset Scores(const std::vector<std::vector<double>>& groups) {
  std::vector<std::string> labels;
  std::vector<Record> records;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    labels.push_back("s" + std::to_string(g));
    for (double x : groups[g]) records.push_back({{labels.back()}, {}, {}, x, {}});
  }
  return Dataset({{"grp", labels}}, std::move(records));
}

SubgroupPartition All(const Dataset& ds) {
  const std::vector<std::string> names{"grp"};
  return build_partition(ds, names);
}

double Sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("bin edges") {
  const auto e = BinEdges::equal_width(0.0, 1.0, 4);
  CHECK(e.bins() == 4);
  CHECK(e.edges() == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(e.bin_of(-3.0) == 0);
  CHECK(e.bin_of(0.25) == 1);
  CHECK(e.bin_of(0.9999) == 3);
  CHECK(e.bin_of(1.0) == 3);
  CHECK(e.bin_of(7.0) == 3);
  // A zero-width range is widened around the point.
  CHECK(BinEdges::equal_width(2.0, 2.0, 2).edges() == std::vector<double>{1.5, 2.0, 2.5});
  CHECK_THROWS_AS(BinEdges::equal_width(0.0, 1.0, 0), UsageError);
  CHECK_THROWS_AS(BinEdges::equal_width(1.0, 0.0, 4), UsageError);
  CHECK_THROWS_AS(BinEdges({0.0}), UsageError);
  CHECK_THROWS_AS(BinEdges({0.0, 1.0, 1.0}), UsageError);
  CHECK_THROWS_AS(BinEdges({0.0, INFINITY}), UsageError);
}

TEST_CASE("estimate_distribution") {
  SUBCASE("point mass") {
    const std::vector<double> xs(50, 0.3);
    const auto e = estimate_distribution(xs, BinEdges::equal_width(0.0, 1.0, 10));
    CHECK(e.sample_count == 50);
    CHECK(e.probabilities[3] == doctest::Approx(1.0).epsilon(1e-7));
    for (std::size_t b = 0; b < 10; ++b) {
      CHECK(e.probabilities[b] > 0.0);
      if (b != 3) CHECK(e.probabilities[b] < 2e-9);
    }
    CHECK(std::fabs(Sum(e.probabilities) - 1.0) < 1e-12);
  }
  SUBCASE("uniform samples fill ten bins evenly") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> xs(1000);
    for (double& x : xs) x = u(rng);
    const auto e = estimate_distribution(xs, BinEdges::equal_width(0.0, 1.0, 10));
    for (double p : e.probabilities) CHECK(std::fabs(p - 0.1) < 0.05);
  }
  SUBCASE("identical inputs give identical estimates") {
    const auto xs = Normal(3, 500, 0.0);
    const auto edges = BinEdges::equal_width(-4.0, 4.0, 32);
    const auto a = estimate_distribution(xs, edges);
    const auto b = estimate_distribution(std::vector<double>(xs), edges);
    CHECK(a.probabilities == b.probabilities);
  }
  SUBCASE("out of range scores are clamped") {
    const std::vector<double> xs{-10.0, 10.0};
    const auto e = estimate_distribution(xs, BinEdges::equal_width(0.0, 1.0, 2));
    CHECK(e.probabilities[0] == doctest::Approx(0.5));
    CHECK(e.probabilities[1] == doctest::Approx(0.5));
  }
  SUBCASE("errors") {
    const auto edges = BinEdges::equal_width(0.0, 1.0, 2);
    CHECK_THROWS_AS(estimate_distribution(std::vector<double>{}, edges), UsageError);
    CHECK_THROWS_AS(estimate_distribution(std::vector<double>{NAN}, edges), UsageError);
    CHECK_THROWS_AS(estimate_distribution(std::vector<double>{0.5}, edges, 0.0), UsageError);
  }
}

TEST_CASE("kl_divergence") {
  const auto edges = BinEdges::equal_width(-6.0, 7.0, 64);
  const auto p = estimate_distribution(Normal(1, 100000, 0.0), edges);
  const auto q = estimate_distribution(Normal(2, 100000, 1.0), edges);

  CHECK(kl_divergence(p, p) == 0.0);
  // Analytic value for unit-variance normals one apart is 0.5 nats.
  CHECK(kl_divergence(p, q) == doctest::Approx(0.5).epsilon(0.1));
  CHECK(kl_divergence(p, q) >= 0.0);

  SUBCASE("asymmetric when variances differ") {
    const auto wide = estimate_distribution(Normal(4, 100000, 1.0, 2.0), edges);
    const double forward = kl_divergence(p, wide);
    const double backward = kl_divergence(wide, p);
    CHECK(std::fabs(forward - backward) > 0.1);
    // Closed forms: 0.443 and 1.307 nats.
    CHECK(forward == doctest::Approx(std::log(2.0) + (1.0 + 1.0) / 8.0 - 0.5).epsilon(0.1));
  }
  SUBCASE("hand-built histograms") {
    const auto two = BinEdges::equal_width(0.0, 1.0, 2);
    const auto a = estimate_distribution(std::vector<double>{0.1, 0.2, 0.7, 0.8}, two);
    const auto b = estimate_distribution(std::vector<double>{0.1, 0.2, 0.3, 0.8}, two);
    const double expected = 0.5 * std::log(0.5 / 0.75) + 0.5 * std::log(0.5 / 0.25);
    CHECK(kl_divergence(a, b) == doctest::Approx(expected).epsilon(1e-8));
    CHECK(total_variation(a, b) == doctest::Approx(0.25).epsilon(1e-8));
  }
  SUBCASE("edges must match") {
    const auto other = estimate_distribution(Normal(1, 100, 0.0), BinEdges::equal_width(-6.0, 7.0, 32));
    CHECK_THROWS_AS(kl_divergence(p, other), UsageError);
    CHECK_THROWS_AS(total_variation(p, other), UsageError);
  }
}

TEST_CASE("worst_case_kl") {
  SUBCASE("identical subgroups") {
    const auto xs = Normal(5, 2000, 0.0);
    const auto ds = Scores({xs, xs, xs});
    const auto r = worst_case_kl(ds, All(ds));
    CHECK(*r.value == 0.0);
    CHECK(r.kind == MetricKind::kDivergence);
    CHECK(r.metric_id == "wdkl");
  }
  SUBCASE("third subgroup equal to the first") {
    const auto a = Normal(6, 20000, 0.0);
    const auto b = Normal(7, 20000, 1.0);
    const auto ds = Scores({a, b, a});
    const auto r = worst_case_kl(ds, All(ds));
    CHECK(r.breakdowns.at("pairwise").size() == 6);

    // Enumerate the two-distribution value on the same shared bins.
    double lo = std::min(*std::min_element(a.begin(), a.end()), *std::min_element(b.begin(), b.end()));
    double hi = std::max(*std::max_element(a.begin(), a.end()), *std::max_element(b.begin(), b.end()));
    const auto edges = BinEdges::equal_width(lo, hi, kDefaultBins);
    const auto pa = estimate_distribution(a, edges);
    const auto pb = estimate_distribution(b, edges);
    const double two = std::max(kl_divergence(pa, pb), kl_divergence(pb, pa));
    CHECK(*r.value == doctest::Approx(two).epsilon(1e-12));
    CHECK(r.breakdowns.at("pairwise").at("grp=s0 || grp=s2") == 0.0);
    REQUIRE(r.worst_pair);
    CHECK(r.worst_pair->first != r.worst_pair->second);
    for (const auto& [pair, value] : r.breakdowns.at("pairwise")) CHECK(value <= *r.value);
  }
  SUBCASE("relabeling subgroups changes nothing") {
    const auto a = Normal(8, 3000, 0.0);
    const auto b = Normal(9, 3000, 0.7);
    const auto c = Normal(10, 3000, -0.3);
    const auto ds1 = Scores({a, b, c});
    const auto ds2 = Scores({c, a, b});
    CHECK(*worst_case_kl(ds1, All(ds1)).value == *worst_case_kl(ds2, All(ds2)).value);
  }
  SUBCASE("total variation") {
    const auto ds = Scores({{0.1, 0.2}, {0.8, 0.9}});
    DivergenceOptions options;
    options.bins = 2;
    options.divergence = Divergence::kTotalVariation;
    const auto r = worst_case_kl(ds, All(ds), options);
    CHECK(*r.value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.metric_id == "wdkl");
    CHECK(std::find(r.notes.begin(), r.notes.end(), "divergence: total variation") != r.notes.end());
  }
  SUBCASE("errors") {
    const auto one = Scores({{0.1, 0.2}});
    CHECK_THROWS_AS(worst_case_kl(one, All(one)), UsageError);
    const Dataset missing({{"grp", {"a", "b"}}},
                          {{{"a"}, {}, {}, 0.5, {}}, {{"b"}, {}, {}, std::nullopt, {}}});
    CHECK_THROWS_AS(worst_case_kl(missing, All(missing)), FieldRequirementError);
  }
}
