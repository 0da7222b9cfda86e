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

#include "sgfair/data_model.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "sgfair/csv.hpp"
#include "sgfair/error.hpp"

namespace sgfair {

namespace {

constexpr const char* kModule = "data_model";

std::optional<std::string> OptionalText(const std::string& field) {
  if (field.empty()) return std::nullopt;
  return field;
}

std::optional<double> ParseScore(const std::string& field, std::size_t row) {
  if (field.empty()) return std::nullopt;
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(row, "score '" + field + "' is not a number");
  }
  return value;
}

std::optional<bool> ParseFlag(const std::string& field, std::size_t row) {
  if (field.empty()) return std::nullopt;
  if (field == "1" || field == "true" || field == "TRUE" || field == "True") {
    return true;
  }
  if (field == "0" || field == "false" || field == "FALSE" ||
      field == "False") {
    return false;
  }
  throw ParseError(row, "flag value '" + field + "' is not a boolean");
}

std::size_t ColumnIndex(const std::unordered_map<std::string, std::size_t>& by_name,
                        const std::string& name) {
  auto it = by_name.find(name);
  if (it == by_name.end()) {
    throw ConfigError(kModule, "missing required column '" + name + "'");
  }
  return it->second;
}

void CheckDomain(const AttributeSchema& attribute) {
  std::set<std::string> seen;
  for (const auto& label : attribute.domain) {
    if (!seen.insert(label).second) {
      throw SchemaError(kModule, "domain of '" + attribute.name +
                                     "' lists '" + label + "' twice");
    }
  }
}

std::string FormatScore(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace

std::optional<std::size_t> AttributeSchema::index_of(
    std::string_view label) const {
  auto it = std::find(domain.begin(), domain.end(), label);
  if (it == domain.end()) return std::nullopt;
  return static_cast<std::size_t>(it - domain.begin());
}

Dataset::Dataset(std::vector<AttributeSchema> schema,
                 std::vector<Record> records,
                 std::vector<std::string> declared_classes,
                 std::vector<std::string> legitimate_names)
    : schema_(std::move(schema)),
      records_(std::move(records)),
      legitimate_names_(std::move(legitimate_names)) {
  std::set<std::string> names;
  for (const auto& attribute : schema_) {
    if (!names.insert(attribute.name).second) {
      throw SchemaError(kModule, "protected attribute '" + attribute.name +
                                     "' declared twice");
    }
    CheckDomain(attribute);
  }

  std::vector<std::unordered_set<std::string>> domains(schema_.size());
  for (std::size_t a = 0; a < schema_.size(); ++a) {
    domains[a].insert(schema_[a].domain.begin(), schema_[a].domain.end());
  }

  std::set<std::string> observed_classes;
  for (std::size_t r = 0; r < records_.size(); ++r) {
    const Record& record = records_[r];
    if (record.attributes.size() != schema_.size()) {
      throw SchemaError(kModule, "record " + std::to_string(r) + " has " +
                                     std::to_string(record.attributes.size()) +
                                     " attribute values, schema has " +
                                     std::to_string(schema_.size()));
    }
    for (std::size_t a = 0; a < schema_.size(); ++a) {
      const auto& value = record.attributes[a];
      if (value && !domains[a].contains(*value)) {
        throw SchemaError(kModule, "record " + std::to_string(r) + ": '" +
                                       *value + "' is not in the domain of '" +
                                       schema_[a].name + "'");
      }
    }
    if (record.predicted_label) observed_classes.insert(*record.predicted_label);
    if (record.true_label) observed_classes.insert(*record.true_label);
  }

  if (declared_classes.empty()) {
    class_set_.assign(observed_classes.begin(), observed_classes.end());
  } else {
    std::set<std::string> declared(declared_classes.begin(),
                                   declared_classes.end());
    if (declared.size() != declared_classes.size()) {
      throw SchemaError(kModule, "class set lists a label twice");
    }
    for (const auto& label : observed_classes) {
      if (!declared.contains(label)) {
        throw SchemaError(kModule, "label '" + label +
                                       "' is not in the declared class set");
      }
    }
    class_set_ = std::move(declared_classes);
  }
}

std::optional<std::size_t> Dataset::attribute_index(
    std::string_view name) const {
  for (std::size_t a = 0; a < schema_.size(); ++a) {
    if (schema_[a].name == name) return a;
  }
  return std::nullopt;
}

Dataset load_dataset(std::istream& source, const ColumnRoles& roles) {
  csv::Reader reader(source, roles.delimiter);
  std::vector<std::string> header;
  if (!reader.next(header)) throw ParseError(1, "input has no header row");

  std::unordered_map<std::string, std::size_t> by_name;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (!by_name.emplace(header[c], c).second) {
      throw ParseError(reader.row(), "duplicate column '" + header[c] + "'");
    }
  }

  {
    std::set<std::string> unique(roles.protected_columns.begin(),
                                 roles.protected_columns.end());
    if (unique.size() != roles.protected_columns.size()) {
      throw ConfigError(kModule, "a protected column is listed twice");
    }
  }
  for (const auto& [name, domain] : roles.declared_domains) {
    if (std::find(roles.protected_columns.begin(), roles.protected_columns.end(),
                  name) == roles.protected_columns.end()) {
      throw ConfigError(kModule, "domain declared for '" + name +
                                     "', which is not a protected column");
    }
    if (domain.empty()) {
      throw SchemaError(kModule, "declared domain of '" + name + "' is empty");
    }
  }

  std::vector<std::size_t> protected_idx;
  for (const auto& name : roles.protected_columns) {
    protected_idx.push_back(ColumnIndex(by_name, name));
  }
  auto optional_column = [&](const std::string& name) -> std::optional<std::size_t> {
    if (name.empty()) return std::nullopt;
    return ColumnIndex(by_name, name);
  };
  const auto predicted_idx = optional_column(roles.predicted_column);
  const auto true_idx = optional_column(roles.true_column);
  const auto score_idx = optional_column(roles.score_column);
  std::vector<std::size_t> legit_idx;
  for (const auto& name : roles.legitimate_columns) {
    legit_idx.push_back(ColumnIndex(by_name, name));
  }

  std::vector<const std::vector<std::string>*> declared(protected_idx.size());
  std::vector<std::unordered_set<std::string>> declared_sets(protected_idx.size());
  for (std::size_t a = 0; a < protected_idx.size(); ++a) {
    auto it = roles.declared_domains.find(roles.protected_columns[a]);
    if (it != roles.declared_domains.end()) {
      declared[a] = &it->second;
      declared_sets[a].insert(it->second.begin(), it->second.end());
    }
  }

  std::vector<Record> records;
  std::vector<std::set<std::string>> observed(protected_idx.size());
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    if (fields.size() != header.size()) {
      throw ParseError(reader.row(), "expected " + std::to_string(header.size()) +
                                         " fields, found " +
                                         std::to_string(fields.size()));
    }
    Record record;
    record.attributes.reserve(protected_idx.size());
    for (std::size_t a = 0; a < protected_idx.size(); ++a) {
      auto value = OptionalText(fields[protected_idx[a]]);
      if (value) {
        if (declared[a] && !declared_sets[a].contains(*value)) {
          throw SchemaError(kModule, "row " + std::to_string(reader.row()) +
                                         ": '" + *value +
                                         "' is outside the declared domain of '" +
                                         roles.protected_columns[a] + "'");
        }
        observed[a].insert(*value);
      }
      record.attributes.push_back(std::move(value));
    }
    if (predicted_idx) record.predicted_label = OptionalText(fields[*predicted_idx]);
    if (true_idx) record.true_label = OptionalText(fields[*true_idx]);
    if (score_idx) record.score = ParseScore(fields[*score_idx], reader.row());
    for (std::size_t l = 0; l < legit_idx.size(); ++l) {
      if (auto flag = ParseFlag(fields[legit_idx[l]], reader.row())) {
        record.legitimate_flags.emplace(roles.legitimate_columns[l], *flag);
      }
    }
    records.push_back(std::move(record));
  }

  std::vector<AttributeSchema> schema;
  for (std::size_t a = 0; a < protected_idx.size(); ++a) {
    AttributeSchema attribute{roles.protected_columns[a], {}};
    if (declared[a]) {
      attribute.domain = *declared[a];
    } else {
      attribute.domain.assign(observed[a].begin(), observed[a].end());
    }
    schema.push_back(std::move(attribute));
  }
  return Dataset(std::move(schema), std::move(records), roles.declared_classes,
                 roles.legitimate_columns);
}

Dataset load_dataset(const std::filesystem::path& path,
                     const ColumnRoles& roles) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(kModule, "cannot open '" + path.string() + "'");
  }
  return load_dataset(in, roles);
}

void write_dataset(std::ostream& out, const Dataset& dataset, char delimiter) {
  const auto records = dataset.records();
  const bool has_predicted = std::any_of(records.begin(), records.end(),
      [](const Record& r) { return r.predicted_label.has_value(); });
  const bool has_true = std::any_of(records.begin(), records.end(),
      [](const Record& r) { return r.true_label.has_value(); });
  const bool has_score = std::any_of(records.begin(), records.end(),
      [](const Record& r) { return r.score.has_value(); });

  std::vector<std::string> header;
  for (const auto& attribute : dataset.schema()) header.push_back(attribute.name);
  if (has_predicted) header.emplace_back("predicted");
  if (has_true) header.emplace_back("true");
  if (has_score) header.emplace_back("score");
  for (const auto& name : dataset.legitimate_names()) header.push_back(name);

  auto write_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << delimiter;
      out << csv::quote_field(row[i], delimiter);
    }
    out << '\n';
  };
  write_row(header);

  std::vector<std::string> row;
  for (const auto& record : records) {
    row.clear();
    for (const auto& value : record.attributes) row.push_back(value.value_or(""));
    if (has_predicted) row.push_back(record.predicted_label.value_or(""));
    if (has_true) row.push_back(record.true_label.value_or(""));
    if (has_score) row.push_back(record.score ? FormatScore(*record.score) : "");
    for (const auto& name : dataset.legitimate_names()) {
      auto it = record.legitimate_flags.find(name);
      row.push_back(it == record.legitimate_flags.end()
                        ? ""
                        : (it->second ? "true" : "false"));
    }
    write_row(row);
  }
}

ColumnRoles canonical_roles(const Dataset& dataset) {
  ColumnRoles roles;
  const auto records = dataset.records();
  for (const auto& attribute : dataset.schema()) {
    roles.protected_columns.push_back(attribute.name);
    if (!attribute.domain.empty()) {
      roles.declared_domains[attribute.name] = attribute.domain;
    }
  }
  auto any = [&](auto member) {
    return std::any_of(records.begin(), records.end(),
                       [&](const Record& r) { return (r.*member).has_value(); });
  };
  if (any(&Record::predicted_label)) roles.predicted_column = "predicted";
  if (any(&Record::true_label)) roles.true_column = "true";
  if (any(&Record::score)) roles.score_column = "score";
  roles.legitimate_columns = dataset.legitimate_names();
  roles.declared_classes = dataset.class_set();
  return roles;
}

namespace {

std::vector<std::string> MissingFields(const Record& record,
                                       const FieldRequirement& requirement) {
  std::vector<std::string> missing;
  if (requirement.predicted && !record.predicted_label) {
    missing.emplace_back("predicted");
  }
  if (requirement.true_label && !record.true_label) missing.emplace_back("true");
  if (requirement.score && !record.score) missing.emplace_back("score");
  for (const auto& flag : requirement.legitimate_flags) {
    if (!record.legitimate_flags.contains(flag)) missing.push_back(flag);
  }
  return missing;
}

}  // namespace

std::vector<Violation> validate_for_metric(const Dataset& dataset,
                                           const FieldRequirement& requirement) {
  std::vector<Violation> violations;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    auto missing = MissingFields(dataset[i], requirement);
    if (!missing.empty()) violations.push_back({i, std::move(missing)});
  }
  return violations;
}

void require_fields(const Dataset& dataset,
                    std::span<const std::size_t> indices,
                    const FieldRequirement& requirement,
                    const std::string& module) {
  for (std::size_t i : indices) {
    auto missing = MissingFields(dataset[i], requirement);
    if (!missing.empty()) throw FieldRequirementError(module, i, missing.front());
  }
}

}  // namespace sgfair
