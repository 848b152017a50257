//
// Copyright 2026 The privhist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef PRIVHIST_DATASET_HPP_
#define PRIVHIST_DATASET_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "privhist/random.hpp"

namespace privhist {

// Declared shape of a CSV dataset: per-column kind plus the binary label
// column and its two value strings.
struct Schema {
  struct Column {
    std::string name;
    bool numeric = false;
  };
  std::vector<Column> columns;  // data columns, label excluded
  std::string label_column;
  std::string positive_label;
  std::string negative_label;
  // Field contents treated as missing; such rows are dropped at load.
  std::vector<std::string> missing_tokens = {"", "?"};

  // Index into `columns` by name; -1 when absent.
  int column_index(const std::string& name) const;
};

// Parses a schema document:
//   {"label": {"column": ..., "positive": ..., "negative": ...},
//    "columns": [{"name": ..., "kind": "numeric"|"categorical"}, ...],
//    "missing": [...]}  (optional; default ["", "?"])
Schema parse_schema(const std::string& text);
Schema load_schema(const std::string& path);

// In-memory dataset, column-major. Numeric columns hold doubles,
// categorical columns strings; labels are 1 for positive, 0 for negative.
struct Dataset {
  Schema schema;
  std::vector<std::vector<double>> numeric_columns;     // by column order
  std::vector<std::vector<std::string>> string_columns;
  // For column i: which store and which slot within it.
  std::vector<uint32_t> column_slot;
  std::vector<uint8_t> labels;

  size_t size() const { return labels.size(); }
  const std::vector<double>& numeric_column(int column) const;
  const std::vector<std::string>& string_column(int column) const;

  // Row subset in the given order.
  Dataset subset(const std::vector<uint32_t>& rows) const;
};

struct LoadReport {
  uint64_t rows_read = 0;      // data rows in the file
  uint64_t rows_kept = 0;
  uint64_t dropped_missing = 0;
  uint64_t dropped_bad_numeric = 0;
};

// Loads an RFC-4180-style CSV (first row header, quoted fields allowed)
// against the schema. The header must contain exactly the declared columns
// plus the label column, in any order. Rows containing a missing token or an
// unparseable numeric field are dropped and counted in the report. A label
// value outside the declared pair is a ParseError.
Dataset load_csv(const std::string& path, const Schema& schema,
                 LoadReport* report = nullptr);
Dataset parse_csv(const std::string& text, const Schema& schema,
                  LoadReport* report = nullptr);

// Serializes a dataset back to CSV in schema column order (label last).
// Numbers use shortest round-trip formatting, so save -> load is lossless.
std::string serialize_csv(const Dataset& dataset);
void save_csv(const Dataset& dataset, const std::string& path);

// Stratified k-fold split: shuffles each class with `rng` and deals
// round-robin, so per-fold class counts differ from perfect proportion by
// at most one record. Returns per-fold test row indices (ascending within a
// fold). Requires 2 <= k <= dataset size.
std::vector<std::vector<uint32_t>> stratified_kfold(const Dataset& dataset,
                                                    int k, RandomSource& rng);

// Error rate on `test_labels` of always predicting the training majority
// class (ties predict positive).
double majority_error(const std::vector<uint8_t>& train_labels,
                      const std::vector<uint8_t>& test_labels);

}  // namespace privhist

#endif  // PRIVHIST_DATASET_HPP_
