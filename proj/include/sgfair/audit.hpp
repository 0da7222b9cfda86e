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
#include <optional>
#include <string>
#include <vector>

#include "sgfair/data_model.hpp"
#include "sgfair/distribution_metrics.hpp"
#include "sgfair/metric_result.hpp"
#include "sgfair/ranking_metrics.hpp"

namespace sgfair {

inline constexpr const char* kToolName = "sgfair";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSchemaVersion = "1";
inline constexpr double kFourFifths = 0.8;

enum class Command { kClassify, kDist, kRank, kAudit };
enum class OutputFormat { kJson, kMarkdown };

const char* to_string(Command command);

// Metric identifiers accepted by --metrics.
//   classify: dpr di cspr eopp tpr-parity tnr-parity fpr-parity fnr-parity
//             eodds gbr meodd (and any single id in --rates-file mode)
//   dist:     wdkl
//   rank:     skew attention
struct AuditConfig {
  Command command = Command::kAudit;

  std::string data_path;
  std::string rank_data_path;
  std::string rates_path;
  std::string population_path;  // explicit skew population fractions

  std::vector<std::string> protected_attributes;
  std::string pred_col;
  std::string label_col;
  std::string score_col;
  std::string rank_col = "rank";
  std::string id_col;
  char delimiter = ',';

  std::string positive_label = "1";
  std::vector<std::string> metrics;  // empty: defaults for the command
  std::size_t min_support = kDefaultMinSupport;
  std::string legit_filter;
  AttentionModel attention;
  std::optional<std::size_t> k;  // skew cutoff; default min(10, |list|)
  std::size_t bins = kDefaultBins;
  Divergence divergence = Divergence::kKl;
  double threshold = kFourFifths;
  OutputFormat format = OutputFormat::kJson;
  bool strict = false;
  bool meodd_true_label = false;
};

// Throws ConfigError when the config cannot describe a runnable audit.
void validate(const AuditConfig& config);

struct Verdict {
  std::string rule;  // "four-fifths" or "four-fifths (extended)"
  double threshold;
  std::optional<bool> pass;  // std::nullopt when the metric is UNDEFINED
};

struct MetricEntry {
  MetricResult result;
  std::optional<Verdict> verdict;  // divergences carry none
};

struct PartitionSummary {
  struct Group {
    std::string label;
    std::size_t members;
    std::string status;  // "included", "empty", "below_support"
  };
  std::vector<std::string> attributes;
  std::size_t total_candidates = 0;
  std::size_t included = 0;
  std::vector<Group> groups;  // included, then excluded; candidate order
  std::size_t unassigned = 0;
  std::size_t records = 0;
};

PartitionSummary summarize(const SubgroupPartition& partition,
                           std::size_t record_count);

struct InputDigest {
  std::string role;
  std::string path;
  std::string sha256;
  std::size_t bytes = 0;
};

struct AuditReport {
  AuditConfig config;  // effective values, defaults resolved
  std::vector<InputDigest> inputs;
  std::optional<PartitionSummary> partition;
  std::vector<MetricEntry> metrics;

  std::size_t failed_verdicts() const;
};

AuditReport run_audit(const AuditConfig& config);

// 0 when every verdict passes, 2 when at least one fails.
int exit_code(const AuditReport& report);

// Canonical JSON (fixed key order, 6 significant digits) or markdown.
std::string emit_report(const AuditReport& report, OutputFormat format);

// Lower-case hex SHA-256 of a file's bytes.
InputDigest digest_file(const std::string& role, const std::string& path);

// Reads a two-column (label, value) file; a first row whose second field is
// not numeric is treated as a header.
std::vector<std::pair<std::string, double>> load_label_values(
    const std::string& path, char delimiter);

}  // namespace sgfair
