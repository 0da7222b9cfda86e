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
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace sgfair::csv {

// Strips ASCII whitespace from both ends.
std::string_view trim(std::string_view text);

// Splits one physical line into fields. Fields may be wrapped in double
// quotes, in which case the delimiter is literal and `""` is an escaped
// quote. Every field is trimmed after unquoting. `row` is only used for
// error messages.
std::vector<std::string> split_line(std::string_view line, char delimiter,
                                    std::size_t row);

// Quotes `field` if it contains the delimiter or a double quote.
std::string quote_field(std::string_view field, char delimiter);

// Line-oriented reader over a delimited stream. Blank lines are skipped, a
// leading UTF-8 byte-order mark and trailing carriage returns are dropped.
class Reader {
 public:
  Reader(std::istream& in, char delimiter) : in_(in), delimiter_(delimiter) {}

  // Returns false at end of input.
  bool next(std::vector<std::string>& fields);

  // 1-based physical line number of the last row returned.
  std::size_t row() const noexcept { return row_; }

 private:
  std::istream& in_;
  char delimiter_;
  std::size_t row_ = 0;
  std::string line_;
};

}  // namespace sgfair::csv
