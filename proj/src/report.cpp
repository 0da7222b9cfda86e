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

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "json.hpp"
#include "sgfair/audit.hpp"

namespace sgfair {

namespace {

using Json = nlohmann::ordered_json;

// Reports carry 6 significant digits; internal values keep full precision.
double Round6(double value) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return std::strtod(buf, nullptr);
}

std::string Format6(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

Json Number(std::optional<double> value) {
  if (!value) return nullptr;
  return Round6(*value);
}

Json Labeled(const std::map<std::string, double>& values) {
  Json out = Json::object();
  for (const auto& [label, value] : values) out[label] = Round6(value);
  return out;
}

std::string DelimiterName(char delimiter) {
  if (delimiter == '\t') return "tab";
  if (delimiter == ',') return "comma";
  return std::string(1, delimiter);
}

std::string AttentionName(const AttentionModel& model) {
  return model.kind == AttentionModel::Kind::kGeometric ? "geometric" : "log";
}

Json ConfigEcho(const AuditConfig& config) {
  Json echo;
  echo["command"] = to_string(config.command);
  echo["data"] = config.data_path;
  echo["rank_data"] = config.rank_data_path;
  echo["rates_file"] = config.rates_path;
  echo["population_file"] = config.population_path;
  echo["protected"] = config.protected_attributes;
  echo["pred_col"] = config.pred_col;
  echo["label_col"] = config.label_col;
  echo["score_col"] = config.score_col;
  echo["rank_col"] = config.rank_col;
  echo["id_col"] = config.id_col;
  echo["delimiter"] = DelimiterName(config.delimiter);
  echo["positive"] = config.positive_label;
  echo["metrics"] = config.metrics;
  echo["min_support"] = config.min_support;
  echo["legit_filter"] = config.legit_filter;
  echo["attention"] = AttentionName(config.attention);
  echo["attention_p"] = Round6(config.attention.p);
  echo["k"] = config.k ? Json(*config.k) : Json(nullptr);
  echo["bins"] = config.bins;
  echo["divergence"] = config.divergence == Divergence::kKl ? "kl" : "tv";
  echo["threshold"] = Round6(config.threshold);
  echo["format"] = config.format == OutputFormat::kJson ? "json" : "markdown";
  echo["strict"] = config.strict;
  echo["meodd_true_label"] = config.meodd_true_label;
  return echo;
}

std::string UndefinedReason(const MetricResult& result) {
  return result.notes.empty() ? "undefined" : result.notes.front();
}

std::string VerdictStatus(const Verdict& verdict) {
  if (!verdict.pass) return "undefined";
  return *verdict.pass ? "pass" : "fail";
}

Json MetricJson(const MetricEntry& entry) {
  const MetricResult& result = entry.result;
  Json out;
  out["id"] = result.metric_id;
  out["kind"] = result.kind == MetricKind::kRatio ? "ratio" : "divergence";
  out["value"] = Number(result.value);
  if (!result.value) out["undefined_reason"] = UndefinedReason(result);
  out["min_subgroup"] = result.min_subgroup;
  out["max_subgroup"] = result.max_subgroup;
  if (result.worst_pair) {
    out["worst_pair"] = Json::array({result.worst_pair->first, result.worst_pair->second});
  } else {
    out["worst_pair"] = nullptr;
  }
  out["per_subgroup"] = Labeled(result.per_subgroup);
  Json breakdowns = Json::object();
  for (const auto& [name, values] : result.breakdowns) breakdowns[name] = Labeled(values);
  out["breakdowns"] = std::move(breakdowns);
  out["notes"] = result.notes;
  if (entry.verdict) {
    out["verdict"] = {{"rule", entry.verdict->rule},
                      {"threshold", Round6(entry.verdict->threshold)},
                      {"status", VerdictStatus(*entry.verdict)}};
  } else {
    out["verdict"] = nullptr;
  }
  return out;
}

std::string EmitJson(const AuditReport& report) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  Json inputs = Json::array();
  for (const auto& input : report.inputs) {
    inputs.push_back({{"role", input.role},
                      {"path", input.path},
                      {"sha256", input.sha256},
                      {"bytes", input.bytes}});
  }
  doc["inputs"] = std::move(inputs);
  doc["config"] = ConfigEcho(report.config);
  if (report.partition) {
    const auto& p = *report.partition;
    Json groups = Json::array();
    for (const auto& group : p.groups) {
      groups.push_back({{"label", group.label},
                        {"members", group.members},
                        {"status", group.status}});
    }
    doc["partition"] = {{"attributes", p.attributes},
                        {"records", p.records},
                        {"total_candidates", p.total_candidates},
                        {"included", p.included},
                        {"excluded", p.total_candidates - p.included},
                        {"unassigned", p.unassigned},
                        {"subgroups", std::move(groups)}};
  } else {
    doc["partition"] = nullptr;
  }
  Json metrics = Json::array();
  for (const auto& entry : report.metrics) metrics.push_back(MetricJson(entry));
  doc["metrics"] = std::move(metrics);
  const std::size_t failed = report.failed_verdicts();
  doc["summary"] = {{"verdicts_failed", failed}, {"exit_code", exit_code(report)}};
  return doc.dump(2) + "\n";
}

// Pipes would break a markdown table cell.
std::string Cell(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '|') out += "\\|";
    else out.push_back(c);
  }
  return out;
}

std::string EmitMarkdown(const AuditReport& report) {
  std::ostringstream md;
  md << "# Intersectional fairness audit\n\n";
  md << "- tool: " << kToolName << ' ' << kToolVersion << " (report schema "
     << kSchemaVersion << ")\n";
  md << "- command: " << to_string(report.config.command) << "\n";
  for (const auto& input : report.inputs) {
    md << "- " << input.role << ": `" << input.path << "` sha256 " << input.sha256
       << " (" << input.bytes << " bytes)\n";
  }
  md << "- threshold: " << Format6(report.config.threshold) << "\n\n";

  if (report.partition) {
    const auto& p = *report.partition;
    md << "## Partition\n\n";
    md << "- attributes:";
    for (const auto& a : p.attributes) md << ' ' << a;
    md << "\n- records: " << p.records << "\n- candidates: " << p.total_candidates
       << "\n- included: " << p.included << "\n- unassigned: " << p.unassigned
       << "\n\n| subgroup | members | status |\n|---|---:|---|\n";
    for (const auto& group : p.groups) {
      md << "| " << Cell(group.label) << " | " << group.members << " | "
         << group.status << " |\n";
    }
    md << '\n';
  }

  for (const auto& entry : report.metrics) {
    const auto& result = entry.result;
    md << "## " << result.metric_id << "\n\n";
    md << "- value: " << (result.value ? Format6(*result.value) : "undefined") << "\n";
    if (entry.verdict) {
      md << "- verdict: " << VerdictStatus(*entry.verdict) << " ("
         << entry.verdict->rule << ", threshold "
         << Format6(entry.verdict->threshold) << ")\n";
    }
    if (!result.min_subgroup.empty()) {
      md << "- min: " << result.min_subgroup << "\n- max: " << result.max_subgroup
         << "\n";
    }
    if (result.worst_pair) {
      md << "- worst pair: " << result.worst_pair->first << " || "
         << result.worst_pair->second << "\n";
    }
    md << "\n| subgroup | statistic |\n|---|---:|\n";
    for (const auto& [label, value] : result.per_subgroup) {
      md << "| " << Cell(label) << " | " << Format6(value) << " |\n";
    }
    for (const auto& [name, values] : result.breakdowns) {
      md << "\n### " << name << "\n\n| subgroup | statistic |\n|---|---:|\n";
      for (const auto& [label, value] : values) {
        md << "| " << Cell(label) << " | " << Format6(value) << " |\n";
      }
    }
    if (!result.notes.empty()) {
      md << "\nNotes:\n\n";
      for (const auto& note : result.notes) md << "- " << note << "\n";
    }
    md << '\n';
  }
  md << "Failed verdicts: " << report.failed_verdicts() << "\n";
  return md.str();
}

}  // namespace

std::string emit_report(const AuditReport& report, OutputFormat format) {
  return format == OutputFormat::kJson ? EmitJson(report) : EmitMarkdown(report);
}

}  // namespace sgfair
