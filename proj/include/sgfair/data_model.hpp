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
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sgfair {

// A protected attribute and its finite, ordered set of category labels.
struct AttributeSchema {
  std::string name;
  std::vector<std::string> domain;

  std::optional<std::size_t> index_of(std::string_view label) const;

  bool operator==(const AttributeSchema&) const = default;
};

// One row of recorded model output.
struct Record {
  // Aligned with Dataset::schema(). std::nullopt marks a missing value; such
  // records never join a subgroup over that attribute.
  std::vector<std::optional<std::string>> attributes;
  std::optional<std::string> predicted_label;
  std::optional<std::string> true_label;
  std::optional<double> score;
  std::map<std::string, bool> legitimate_flags;

  bool operator==(const Record&) const = default;
};

// Immutable, validated table of records.
//
// Construction checks that attribute names are unique, domains hold no
// duplicate labels, every present attribute value belongs to its domain and
// every observed predicted/true label is in the class set. When
// `declared_classes` is empty the class set is inferred from the records and
// sorted lexicographically.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<AttributeSchema> schema, std::vector<Record> records,
          std::vector<std::string> declared_classes = {},
          std::vector<std::string> legitimate_names = {});

  const std::vector<AttributeSchema>& schema() const noexcept {
    return schema_;
  }
  std::span<const Record> records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  const Record& operator[](std::size_t i) const { return records_[i]; }

  const std::vector<std::string>& class_set() const noexcept {
    return class_set_;
  }
  const std::vector<std::string>& legitimate_names() const noexcept {
    return legitimate_names_;
  }

  std::optional<std::size_t> attribute_index(std::string_view name) const;

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<AttributeSchema> schema_;
  std::vector<Record> records_;
  std::vector<std::string> class_set_;
  std::vector<std::string> legitimate_names_;
};

// Maps input columns onto record fields. Empty strings mean "no such column".
struct ColumnRoles {
  std::vector<std::string> protected_columns;
  std::string predicted_column;
  std::string true_column;
  std::string score_column;
  std::vector<std::string> legitimate_columns;
  // Explicit domains keep structurally absent categories visible as empty
  // subgroups; undeclared attributes get the sorted set of observed values.
  std::map<std::string, std::vector<std::string>> declared_domains;
  std::vector<std::string> declared_classes;
  char delimiter = ',';
};

Dataset load_dataset(std::istream& source, const ColumnRoles& roles);
Dataset load_dataset(const std::filesystem::path& path,
                     const ColumnRoles& roles);

// Canonical text form: protected columns in schema order, then `predicted`,
// `true` and `score` when any record carries them, then legitimate flags.
void write_dataset(std::ostream& out, const Dataset& dataset,
                   char delimiter = ',');

// Roles (with explicit domains and classes) that reload write_dataset()
// output into an identical Dataset.
ColumnRoles canonical_roles(const Dataset& dataset);

struct FieldRequirement {
  bool predicted = false;
  bool true_label = false;
  bool score = false;
  std::vector<std::string> legitimate_flags;
};

struct Violation {
  std::size_t record_index;
  std::vector<std::string> missing_fields;

  bool operator==(const Violation&) const = default;
};

// One violation per record lacking any required field, in record order.
std::vector<Violation> validate_for_metric(const Dataset& dataset,
                                           const FieldRequirement& requirement);

// Throws FieldRequirementError naming the first record among `indices` that
// lacks a required field.
void require_fields(const Dataset& dataset,
                    std::span<const std::size_t> indices,
                    const FieldRequirement& requirement,
                    const std::string& module);

}  // namespace sgfair
