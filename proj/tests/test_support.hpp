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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle/brute_force.hpp"
#include "sgfair/data_model.hpp"

#ifndef SGFAIR_FIXTURE_DIR
#error "SGFAIR_FIXTURE_DIR must point at data/fixtures"
#endif

namespace testing {

inline std::string Fixture(const std::string& name) {
  return std::string(SGFAIR_FIXTURE_DIR) + "/" + name;
}

struct TableShape {
  std::size_t max_rows = 200;
  std::size_t max_attrs = 3;
  std::size_t max_domain = 3;
  std::size_t classes = 2;      // predicted/true labels drawn from 0..classes-1
  double missing = 0.0;         // chance a protected value is blank
  bool with_truth = true;
  bool with_scores = false;
  bool with_flag = false;       // one legitimate flag named "legit"
};

// Random table with per-subgroup skew so ratios land away from 1.
inline oracle::Table RandomTable(std::mt19937_64& rng, const TableShape& shape) {
  auto uniform = [&rng](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  oracle::Table t;
  const std::size_t attrs = 1 + uniform(shape.max_attrs);
  std::vector<std::size_t> domain(attrs);
  for (std::size_t a = 0; a < attrs; ++a) {
    t.attr_names.push_back("a" + std::to_string(a));
    domain[a] = 1 + uniform(shape.max_domain);
  }
  const std::size_t rows = 1 + uniform(shape.max_rows);
  // Per-category bias shifts the label distribution of each row.
  std::vector<std::vector<double>> bias(attrs);
  for (std::size_t a = 0; a < attrs; ++a) {
    for (std::size_t v = 0; v < domain[a]; ++v) bias[a].push_back(unit(rng) - 0.5);
  }
  for (std::size_t r = 0; r < rows; ++r) {
    oracle::Row row;
    double shift = 0.0;
    for (std::size_t a = 0; a < attrs; ++a) {
      const std::size_t v = uniform(domain[a]);
      shift += bias[a][v];
      if (unit(rng) < shape.missing) {
        row.attrs.push_back("");
      } else {
        row.attrs.push_back("v" + std::to_string(v));
      }
    }
    auto draw_label = [&]() {
      if (shape.classes == 2) {
        return std::string(unit(rng) < 0.5 + shift / 2.0 ? "1" : "0");
      }
      return std::to_string(uniform(shape.classes));
    };
    row.pred = draw_label();
    if (shape.with_truth) row.truth = draw_label();
    if (shape.with_scores) {
      std::normal_distribution<double> normal(shift, 1.0);
      row.score = normal(rng);
    }
    if (shape.with_flag) row.flags["legit"] = unit(rng) < 0.6;
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline std::string ToCsv(const oracle::Table& t, const TableShape& shape) {
  std::ostringstream out;
  for (const auto& name : t.attr_names) out << name << ',';
  out << "pred";
  if (shape.with_truth) out << ",truth";
  if (shape.with_scores) out << ",score";
  if (shape.with_flag) out << ",legit";
  out << '\n';
  char buf[40];
  for (const auto& row : t.rows) {
    for (const auto& v : row.attrs) out << v << ',';
    out << row.pred;
    if (shape.with_truth) out << ',' << row.truth;
    if (shape.with_scores) {
      std::snprintf(buf, sizeof(buf), "%.17g", row.score);
      out << ',' << buf;
    }
    if (shape.with_flag) out << ',' << (row.flags.at("legit") ? "true" : "false");
    out << '\n';
  }
  return out.str();
}

inline sgfair::ColumnRoles Roles(const oracle::Table& t, const TableShape& shape) {
  sgfair::ColumnRoles roles;
  roles.protected_columns = t.attr_names;
  roles.predicted_column = "pred";
  if (shape.with_truth) roles.true_column = "truth";
  if (shape.with_scores) roles.score_column = "score";
  if (shape.with_flag) roles.legitimate_columns = {"legit"};
  return roles;
}

inline sgfair::Dataset ToDataset(const oracle::Table& t, const TableShape& shape) {
  std::istringstream in(ToCsv(t, shape));
  return sgfair::load_dataset(in, Roles(t, shape));
}

inline sgfair::Dataset LoadCsv(const std::string& text, const sgfair::ColumnRoles& roles) {
  std::istringstream in(text);
  return sgfair::load_dataset(in, roles);
}

inline bool Close(double a, double b, double tol = 1e-12) {
  return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(b));
}

}  // namespace testing
