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

#include "sgfair/csv.hpp"

#include "sgfair/error.hpp"

namespace sgfair::csv {

namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
         c == '\v';
}

}  // namespace

std::string_view trim(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && IsSpace(text[begin])) ++begin;
  while (end > begin && IsSpace(text[end - 1])) --end;
  return text.substr(begin, end - begin);
}

std::vector<std::string> split_line(std::string_view line, char delimiter,
                                    std::size_t row) {
  std::vector<std::string> fields;
  std::string current;
  std::size_t i = 0;
  while (true) {
    current.clear();
    // Skip whitespace before a possible opening quote.
    std::size_t probe = i;
    while (probe < line.size() && line[probe] != delimiter &&
           IsSpace(line[probe])) {
      ++probe;
    }
    if (probe < line.size() && line[probe] == '"') {
      i = probe + 1;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            current.push_back('"');
            i += 2;
            continue;
          }
          closed = true;
          ++i;
          break;
        }
        current.push_back(line[i++]);
      }
      if (!closed) throw ParseError(row, "unterminated quoted field");
      while (i < line.size() && line[i] != delimiter) {
        if (!IsSpace(line[i])) {
          throw ParseError(row, "unexpected character after quoted field");
        }
        ++i;
      }
      fields.emplace_back(trim(current));
    } else {
      std::size_t end = line.find(delimiter, i);
      if (end == std::string_view::npos) end = line.size();
      fields.emplace_back(trim(line.substr(i, end - i)));
      i = end;
    }
    if (i >= line.size()) break;
    ++i;  // delimiter
  }
  return fields;
}

std::string quote_field(std::string_view field, char delimiter) {
  bool needs_quotes = field.find(delimiter) != std::string_view::npos ||
                      field.find('"') != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

bool Reader::next(std::vector<std::string>& fields) {
  while (std::getline(in_, line_)) {
    ++row_;
    if (row_ == 1 && line_.starts_with("\xEF\xBB\xBF")) line_.erase(0, 3);
    if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    if (trim(line_).empty()) continue;
    fields = split_line(line_, delimiter_, row_);
    return true;
  }
  return false;
}

}  // namespace sgfair::csv
