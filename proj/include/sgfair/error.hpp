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
#include <stdexcept>
#include <string>

namespace sgfair {

// Base class for every error the library raises. `module()` names the
// component that detected the problem so the CLI can surface it verbatim.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& message)
      : std::runtime_error(message), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

// Malformed delimited input. `row()` is the 1-based physical line number
// (the header is line 1).
class ParseError : public Error {
 public:
  ParseError(std::size_t row, const std::string& message)
      : Error("data_model", "row " + std::to_string(row) + ": " + message),
        row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

// A record lacks a field the requested metric needs.
class FieldRequirementError : public Error {
 public:
  FieldRequirementError(std::string module, std::size_t record_index,
                        const std::string& field)
      : Error(std::move(module), "record " + std::to_string(record_index) +
                                     " is missing required field '" + field +
                                     "'"),
        record_index_(record_index) {}

  std::size_t record_index() const noexcept { return record_index_; }

 private:
  std::size_t record_index_;
};

}  // namespace sgfair
