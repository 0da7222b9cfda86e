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

#include "sgfair/audit.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <map>
#include <memory>
#include <set>

#include "sgfair/classification_metrics.hpp"
#include "sgfair/csv.hpp"
#include "sgfair/error.hpp"

namespace sgfair {

namespace {

constexpr const char* kModule = "audit_cli";

const std::vector<std::string> kClassifyMetrics = {
    "dpr",        "di",         "cspr",  "eopp", "tpr-parity", "tnr-parity",
    "fpr-parity", "fnr-parity", "eodds", "gbr",  "meodd"};
const std::vector<std::string> kDistMetrics = {"wdkl"};
const std::vector<std::string> kRankMetrics = {"skew", "attention"};

bool Contains(const std::vector<std::string>& list, const std::string& id) {
  return std::find(list.begin(), list.end(), id) != list.end();
}

bool NeedsLabels(const std::string& id) {
  return id == "eopp" || id == "tpr-parity" || id == "tnr-parity" ||
         id == "fpr-parity" || id == "fnr-parity" || id == "eodds" ||
         id == "gbr";
}

bool RatesMode(const AuditConfig& config) { return !config.rates_path.empty(); }

std::vector<std::string> DefaultMetrics(const AuditConfig& config) {
  std::vector<std::string> metrics;
  const bool classify = config.command == Command::kClassify ||
                        (config.command == Command::kAudit &&
                         !config.data_path.empty() && !config.pred_col.empty());
  const bool dist = config.command == Command::kDist ||
                    (config.command == Command::kAudit &&
                     !config.data_path.empty() && !config.score_col.empty());
  const bool rank = config.command == Command::kRank ||
                    (config.command == Command::kAudit &&
                     !config.rank_data_path.empty());
  if (RatesMode(config)) return {"min-max-ratio"};
  if (classify) {
    metrics.insert(metrics.end(), {"dpr", "di"});
    if (!config.legit_filter.empty()) metrics.emplace_back("cspr");
    if (!config.label_col.empty()) {
      metrics.insert(metrics.end(), {"eopp", "tnr-parity", "fpr-parity",
                                     "fnr-parity", "eodds", "gbr"});
    }
  }
  if (dist) metrics.emplace_back("wdkl");
  if (rank) metrics.insert(metrics.end(), kRankMetrics.begin(), kRankMetrics.end());
  return metrics;
}

bool MetricAllowed(Command command, const std::string& id) {
  switch (command) {
    case Command::kClassify:
      return Contains(kClassifyMetrics, id);
    case Command::kDist:
      return Contains(kDistMetrics, id);
    case Command::kRank:
      return Contains(kRankMetrics, id);
    case Command::kAudit:
      return Contains(kClassifyMetrics, id) || Contains(kDistMetrics, id) ||
             Contains(kRankMetrics, id);
  }
  return false;
}

std::optional<double> ParseDouble(const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) return std::nullopt;
  return value;
}

Verdict MakeVerdict(const MetricResult& result, double threshold) {
  Verdict verdict;
  verdict.rule = result.metric_id == "di" ? "four-fifths" : "four-fifths (extended)";
  verdict.threshold = threshold;
  if (result.value) verdict.pass = !(*result.value < threshold);
  return verdict;
}

}  // namespace

const char* to_string(Command command) {
  switch (command) {
    case Command::kClassify:
      return "classify";
    case Command::kDist:
      return "dist";
    case Command::kRank:
      return "rank";
    case Command::kAudit:
      return "audit";
  }
  return "unknown";
}

void validate(const AuditConfig& config) {
  if (!(config.threshold > 0.0 && config.threshold <= 1.0)) {
    throw ConfigError(kModule, "threshold must be in (0, 1]");
  }
  if (config.bins == 0) throw ConfigError(kModule, "bin count must be positive");
  if (config.attention.kind == AttentionModel::Kind::kGeometric &&
      !(config.attention.p > 0.0 && config.attention.p < 1.0)) {
    throw ConfigError(kModule, "geometric attention needs p in (0, 1)");
  }
  if (config.k && *config.k == 0) throw ConfigError(kModule, "k must be >= 1");

  if (RatesMode(config)) {
    if (config.command != Command::kClassify) {
      throw ConfigError(kModule, "--rates-file is only valid with classify");
    }
    if (config.metrics.size() > 1) {
      throw ConfigError(kModule, "--rates-file takes at most one metric id");
    }
    return;
  }

  std::set<std::string> seen;
  for (const auto& id : config.metrics) {
    if (!MetricAllowed(config.command, id)) {
      throw ConfigError(kModule, "metric '" + id + "' is not available for " +
                                     to_string(config.command));
    }
    if (!seen.insert(id).second) {
      throw ConfigError(kModule, "metric '" + id + "' selected twice");
    }
  }
  if (config.protected_attributes.empty()) {
    throw ConfigError(kModule, "--protected is required");
  }
  switch (config.command) {
    case Command::kClassify:
    case Command::kDist:
      if (config.data_path.empty()) throw ConfigError(kModule, "--data is required");
      break;
    case Command::kRank:
      if (config.rank_data_path.empty()) {
        throw ConfigError(kModule, "--rank-data is required");
      }
      break;
    case Command::kAudit:
      if (config.data_path.empty() && config.rank_data_path.empty()) {
        throw ConfigError(kModule, "--data or --rank-data is required");
      }
      break;
  }
}

PartitionSummary summarize(const SubgroupPartition& partition,
                           std::size_t record_count) {
  PartitionSummary summary;
  summary.attributes = partition.attribute_names;
  summary.total_candidates = partition.total_candidates;
  summary.included = partition.subgroups.size();
  summary.unassigned = partition.unassigned.size();
  summary.records = record_count;

  for (const auto& subgroup : partition.subgroups) {
    summary.groups.push_back({subgroup_label(subgroup), subgroup.size(), "included"});
  }
  for (const auto& excluded : partition.excluded) {
    summary.groups.push_back({subgroup_label(excluded.subgroup),
                              excluded.subgroup.size(), to_string(excluded.reason)});
  }
  return summary;
}

std::size_t AuditReport::failed_verdicts() const {
  std::size_t failed = 0;
  for (const auto& entry : metrics) {
    if (entry.verdict && entry.verdict->pass && !*entry.verdict->pass) ++failed;
  }
  return failed;
}

int exit_code(const AuditReport& report) {
  return report.failed_verdicts() > 0 ? 2 : 0;
}

InputDigest digest_file(const std::string& role, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(kModule, "cannot open '" + path + "'");
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());

  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1) {
    throw Error(kModule, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xF]);
  }
  return {role, path, hex, bytes.size()};
}

std::vector<std::pair<std::string, double>> load_label_values(
    const std::string& path, char delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(kModule, "cannot open '" + path + "'");
  csv::Reader reader(in, delimiter);
  std::vector<std::pair<std::string, double>> rows;
  std::set<std::string> seen;
  std::vector<std::string> fields;
  bool first = true;
  while (reader.next(fields)) {
    if (fields.size() != 2) {
      throw ParseError(reader.row(), "expected 2 fields, found " +
                                         std::to_string(fields.size()));
    }
    auto value = ParseDouble(fields[1]);
    if (!value) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw ParseError(reader.row(), "'" + fields[1] + "' is not a number");
    }
    first = false;
    if (!seen.insert(fields[0]).second) {
      throw ParseError(reader.row(), "label '" + fields[0] + "' appears twice");
    }
    rows.emplace_back(fields[0], *value);
  }
  return rows;
}

AuditReport run_audit(const AuditConfig& input_config) {
  validate(input_config);
  AuditReport report;
  report.config = input_config;
  AuditConfig& config = report.config;
  if (config.metrics.empty()) config.metrics = DefaultMetrics(config);
  if (config.metrics.empty()) {
    throw ConfigError(kModule, "no metric applies to the supplied inputs");
  }

  const MetricOptions options{config.strict};
  auto add = [&](MetricResult result) {
    MetricEntry entry;
    if (result.kind == MetricKind::kRatio) {
      entry.verdict = MakeVerdict(result, config.threshold);
    }
    entry.result = std::move(result);
    report.metrics.push_back(std::move(entry));
  };

  if (RatesMode(config)) {
    report.inputs.push_back(digest_file("rates", config.rates_path));
    std::map<std::string, double> values;
    for (auto& [label, value] : load_label_values(config.rates_path, config.delimiter)) {
      values.emplace(std::move(label), value);
    }
    if (values.empty()) {
      throw ParseError(1, "rates file '" + config.rates_path + "' has no rows");
    }
    auto result = min_max_ratio(values, config.metrics.front());
    result.notes.emplace_back("precomputed per-subgroup rates");
    add(std::move(result));
    return report;
  }

  const auto wants = [&](const std::string& id) { return Contains(config.metrics, id); };
  const bool wants_classify = std::any_of(
      config.metrics.begin(), config.metrics.end(),
      [](const std::string& id) { return Contains(kClassifyMetrics, id); });
  const bool wants_rank = wants("skew") || wants("attention");

  const auto filter = LegitimateFilter::parse(config.legit_filter);

  ColumnRoles roles;
  roles.protected_columns = config.protected_attributes;
  roles.predicted_column = config.pred_col;
  roles.true_column = config.label_col;
  roles.score_column = config.score_col;
  roles.legitimate_columns = filter.flags();
  roles.delimiter = config.delimiter;
  {
    // A flag may be tested twice in one filter; the column is read once.
    auto& legit = roles.legitimate_columns;
    std::sort(legit.begin(), legit.end());
    legit.erase(std::unique(legit.begin(), legit.end()), legit.end());
  }

  if (wants_classify && config.pred_col.empty()) {
    throw ConfigError(kModule, "classification metrics need --pred-col");
  }
  for (const auto& id : config.metrics) {
    if (NeedsLabels(id) && config.label_col.empty()) {
      throw ConfigError(kModule, "metric '" + id + "' needs --label-col");
    }
  }
  if (wants("cspr") && config.legit_filter.empty()) {
    throw ConfigError(kModule, "metric 'cspr' needs --legit-filter");
  }
  if (wants("wdkl") && config.score_col.empty()) {
    throw ConfigError(kModule, "metric 'wdkl' needs --score-col");
  }
  if (wants_rank && config.rank_data_path.empty()) {
    throw ConfigError(kModule, "ranking metrics need --rank-data");
  }
  if ((wants_classify || wants("wdkl")) && config.data_path.empty()) {
    throw ConfigError(kModule, "metric needs --data");
  }

  // The population for ranking is --data when given, else the ranked items.
  std::optional<Dataset> dataset;
  if (!config.data_path.empty()) {
    report.inputs.push_back(digest_file("data", config.data_path));
    dataset = load_dataset(std::filesystem::path(config.data_path), roles);
  }
  std::optional<Dataset> rank_population;
  if (wants_rank) {
    report.inputs.push_back(digest_file("rank-data", config.rank_data_path));
    if (!dataset) {
      ColumnRoles rank_roles;
      rank_roles.protected_columns = config.protected_attributes;
      rank_roles.delimiter = config.delimiter;
      rank_population = load_dataset(std::filesystem::path(config.rank_data_path),
                                     rank_roles);
    }
  }
  const Dataset& population = dataset ? *dataset : *rank_population;
  const auto partition =
      build_partition(population, config.protected_attributes, config.min_support);
  report.partition = summarize(partition, population.size());

  std::optional<RankedList> ranked;
  PopulationShares shares;
  if (wants_rank) {
    std::ifstream in(config.rank_data_path, std::ios::binary);
    if (!in) throw ConfigError(kModule, "cannot open '" + config.rank_data_path + "'");
    ranked = load_ranked_list(in, population,
                              {config.rank_col, config.id_col, config.delimiter});
    if (ranked->size() == 0) throw UsageError(kModule, "ranked list is empty");
    if (!config.k) config.k = std::min<std::size_t>(10, ranked->size());
    if (!config.population_path.empty()) {
      report.inputs.push_back(digest_file("population", config.population_path));
      for (auto& [label, share] :
           load_label_values(config.population_path, config.delimiter)) {
        shares.emplace(std::move(label), share);
      }
    }
  }

  const std::string& positive = config.positive_label;
  for (const auto& id : config.metrics) {
    const Dataset& data = population;
    if (id == "dpr") {
      add(demographic_parity_ratio(data, partition, positive, options));
    } else if (id == "di") {
      add(disparate_impact(data, partition, positive, options));
    } else if (id == "cspr") {
      add(conditional_statistical_parity_ratio(data, partition, positive, filter,
                                               options));
    } else if (id == "eopp") {
      add(equal_opportunity_ratio(data, partition, positive, options));
    } else if (id == "tpr-parity") {
      add(rate_parity_ratio(data, partition, positive, RateKind::tpr(), options));
    } else if (id == "tnr-parity") {
      add(rate_parity_ratio(data, partition, positive, RateKind::tnr(), options));
    } else if (id == "fpr-parity") {
      add(rate_parity_ratio(data, partition, positive, RateKind::fpr(), options));
    } else if (id == "fnr-parity") {
      add(rate_parity_ratio(data, partition, positive, RateKind::fnr(), options));
    } else if (id == "eodds") {
      add(equalized_odds_ratio(data, partition, positive, options));
    } else if (id == "gbr") {
      add(group_benefit_ratio_intersectional(data, partition, positive, options));
    } else if (id == "meodd") {
      add(multiclass_equalized_odds_ratio(data, partition,
                                          {options, config.meodd_true_label}));
    } else if (id == "wdkl") {
      add(worst_case_kl(data, partition,
                        {config.bins, kDefaultSmoothing, config.divergence}));
    } else if (id == "skew") {
      add(skew_ratio_at_k(*ranked, partition, *config.k,
                          config.population_path.empty() ? nullptr : &shares,
                          options));
    } else if (id == "attention") {
      add(attention_ratio(*ranked, partition, config.attention, options));
    }
  }
  return report;
}

}  // namespace sgfair
