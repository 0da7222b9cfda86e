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

#include "sgfair/cli.hpp"

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sgfair/audit.hpp"
#include "sgfair/error.hpp"

namespace sgfair {

namespace {

struct RawOptions {
  std::string attention = "log";
  double attention_p = 0.5;
  std::string divergence = "kl";
  std::string format = "json";
  std::string delimiter = "comma";
  std::string output;
  std::size_t k = 0;
};

void AddOptions(CLI::App& app, AuditConfig& config, RawOptions& raw) {
  app.add_option("--data", config.data_path, "Delimited file of recorded model outputs");
  app.add_option("--rank-data", config.rank_data_path,
                 "Ranked list with a 1-based rank column");
  app.add_option("--protected", config.protected_attributes,
                 "Protected attribute columns, e.g. race,gender")
      ->delimiter(',');
  app.add_option("--pred-col", config.pred_col, "Predicted label column");
  app.add_option("--label-col", config.label_col, "Ground-truth label column");
  app.add_option("--score-col", config.score_col, "Continuous score column");
  app.add_option("--rank-col", config.rank_col, "Rank column of --rank-data")
      ->capture_default_str();
  app.add_option("--id-col", config.id_col, "Item id column of --rank-data");
  app.add_option("--positive", config.positive_label, "Positive outcome label")
      ->capture_default_str();
  app.add_option("--metrics", config.metrics, "Metric ids, comma separated")
      ->delimiter(',');
  app.add_option("--min-support", config.min_support,
                 "Exclude subgroups with fewer members")
      ->capture_default_str();
  app.add_option("--legit-filter", config.legit_filter,
                 "Conjunction of flag=true|false tests joined by '&'");
  app.add_option("--attention", raw.attention, "Attention model")
      ->check(CLI::IsMember({"log", "geometric"}))
      ->capture_default_str();
  app.add_option("--attention-p", raw.attention_p, "Geometric attention parameter")
      ->capture_default_str();
  app.add_option("--k", raw.k, "Skew cutoff (default min(10, list length))");
  app.add_option("--bins", config.bins, "Histogram bins for divergences")
      ->capture_default_str();
  app.add_option("--divergence", raw.divergence, "Distribution comparison")
      ->check(CLI::IsMember({"kl", "tv"}))
      ->capture_default_str();
  app.add_option("--threshold", config.threshold, "Verdict threshold in (0, 1]")
      ->capture_default_str();
  app.add_option("--format", raw.format, "Report format")
      ->check(CLI::IsMember({"json", "markdown"}))
      ->capture_default_str();
  app.add_option("--rates-file", config.rates_path,
                 "Two-column (subgroup label, rate) file; classify only");
  app.add_option("--population-file", config.population_path,
                 "Two-column (subgroup label, fraction) file for skew");
  app.add_option("--delimiter", raw.delimiter, "Field delimiter")
      ->check(CLI::IsMember({"comma", "tab", ",", "\\t"}))
      ->capture_default_str();
  app.add_option("--output", raw.output, "Write the report here instead of stdout");
  app.add_flag("--strict", config.strict,
               "Fail instead of excluding subgroups with undefined statistics");
  app.add_flag("--meodd-true-label", config.meodd_true_label,
               "Condition multiclass rates on the true label (extension)");
}

void Resolve(AuditConfig& config, const RawOptions& raw) {
  if (raw.attention == "geometric") {
    config.attention = {AttentionModel::Kind::kGeometric, raw.attention_p};
  } else {
    config.attention = {AttentionModel::Kind::kLogarithmic, raw.attention_p};
  }
  config.divergence = raw.divergence == "tv" ? Divergence::kTotalVariation
                                              : Divergence::kKl;
  config.format = raw.format == "markdown" ? OutputFormat::kMarkdown
                                           : OutputFormat::kJson;
  config.delimiter = (raw.delimiter == "tab" || raw.delimiter == "\\t") ? '\t' : ',';
  if (raw.k > 0) config.k = raw.k;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Intersectional group fairness audit over recorded model outputs",
               kToolName};
  app.set_version_flag("--version", kToolVersion);
  app.set_config("--config", "", "TOML/INI file supplying any long option");
  app.require_subcommand(1);

  const std::map<std::string, Command> commands = {
      {"classify", Command::kClassify},
      {"dist", Command::kDist},
      {"rank", Command::kRank},
      {"audit", Command::kAudit}};
  const std::map<std::string, std::string> descriptions = {
      {"classify", "Classification parity metrics (or --rates-file)"},
      {"dist", "Worst-case divergence of score distributions"},
      {"rank", "Skew@k and attention ratios of a ranked list"},
      {"audit", "Any combination of the above"}};

  AuditConfig config;
  RawOptions raw;
  std::map<std::string, CLI::App*> subcommands;
  for (const auto& [name, command] : commands) {
    auto* sub = app.add_subcommand(name, descriptions.at(name));
    AddOptions(*sub, config, raw);
    subcommands[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    for (const auto& [name, sub] : subcommands) {
      if (sub->parsed()) config.command = commands.at(name);
    }
    Resolve(config, raw);
    const AuditReport report = run_audit(config);
    const std::string text = emit_report(report, config.format);
    if (raw.output.empty()) {
      out << text;
    } else {
      std::ofstream file(raw.output, std::ios::binary);
      if (!file) throw ConfigError("audit_cli", "cannot write '" + raw.output + "'");
      file << text;
    }
    return exit_code(report);
  } catch (const Error& e) {
    err << "error [" << e.module() << "]: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return 1;
}

}  // namespace sgfair
