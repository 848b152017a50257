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

#include "privhist/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "privhist/errors.hpp"

namespace privhist {
namespace {

using nlohmann::json;

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError(std::string("cannot open ") + what + " file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string trim_spaces(const std::string& s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return s.substr(b, e - b);
}

// RFC-4180-style record reader: quoted fields may contain commas, doubled
// quotes, and newlines; unquoted fields are trimmed of surrounding blanks.
std::vector<std::vector<std::string>> parse_csv_records(
    const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> row;
  std::string field;
  size_t i = 0;
  const size_t n = text.size();
  bool row_started = false;

  auto end_field = [&](bool quoted) {
    row.push_back(quoted ? field : trim_spaces(field));
    field.clear();
  };
  auto end_row = [&]() {
    records.push_back(std::move(row));
    row.clear();
    row_started = false;
  };

  while (i < n) {
    row_started = true;
    bool quoted = false;
    if (text[i] == '"') {
      quoted = true;
      ++i;
      while (true) {
        if (i >= n) {
          throw ParseError("csv: unterminated quoted field");
        }
        if (text[i] == '"') {
          if (i + 1 < n && text[i + 1] == '"') {
            field.push_back('"');
            i += 2;
          } else {
            ++i;
            break;
          }
        } else {
          field.push_back(text[i++]);
        }
      }
      if (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
        throw ParseError("csv: unexpected character after closing quote");
      }
    } else {
      while (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
        if (text[i] == '"') {
          throw ParseError("csv: stray quote inside unquoted field");
        }
        field.push_back(text[i++]);
      }
    }
    if (i >= n) {
      end_field(quoted);
      end_row();
      break;
    }
    if (text[i] == ',') {
      end_field(quoted);
      ++i;
      continue;
    }
    // Newline (LF or CRLF) terminates the record.
    end_field(quoted);
    if (text[i] == '\r') {
      ++i;
      if (i < n && text[i] == '\n') ++i;
    } else {
      ++i;
    }
    end_row();
  }
  if (row_started || !row.empty()) {
    if (!field.empty()) row.push_back(field);
    if (!row.empty()) records.push_back(std::move(row));
  }
  return records;
}

bool parse_double(const std::string& s, double* out) {
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto [p, ec] = std::from_chars(b, e, *out);
  return ec == std::errc() && p == e && !s.empty();
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

std::string csv_escape(const std::string& s) {
  const bool needs_quotes =
      s.find_first_of(",\"\r\n") != std::string::npos || s != trim_spaces(s);
  if (!needs_quotes) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

int Schema::column_index(const std::string& name) const {
  for (size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == name) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

Schema parse_schema(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("schema: invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("label") || !doc.contains("columns")) {
    throw ParseError("schema: expected an object with 'label' and 'columns'");
  }
  Schema schema;
  const auto& label = doc["label"];
  if (!label.is_object() || !label.contains("column") ||
      !label.contains("positive") || !label.contains("negative")) {
    throw ParseError(
        "schema: 'label' needs 'column', 'positive' and 'negative'");
  }
  schema.label_column = label["column"].get<std::string>();
  schema.positive_label = label["positive"].get<std::string>();
  schema.negative_label = label["negative"].get<std::string>();
  if (schema.positive_label == schema.negative_label) {
    throw ParseError("schema: label values must be distinct");
  }

  if (!doc["columns"].is_array() || doc["columns"].empty()) {
    throw ParseError("schema: 'columns' must be a non-empty array");
  }
  std::set<std::string> seen;
  for (const auto& jc : doc["columns"]) {
    if (!jc.is_object() || !jc.contains("name") || !jc.contains("kind")) {
      throw ParseError("schema: column needs 'name' and 'kind'");
    }
    Schema::Column col;
    col.name = jc["name"].get<std::string>();
    const std::string kind = jc["kind"].get<std::string>();
    if (kind == "numeric" || kind == "numerical") {
      col.numeric = true;
    } else if (kind == "categorical") {
      col.numeric = false;
    } else {
      throw ParseError("schema: column '" + col.name + "': unknown kind '" +
                       kind + "'");
    }
    if (col.name == schema.label_column) {
      throw ParseError("schema: the label column must not be listed in "
                       "'columns'");
    }
    if (!seen.insert(col.name).second) {
      throw ParseError("schema: duplicate column '" + col.name + "'");
    }
    schema.columns.push_back(std::move(col));
  }

  if (doc.contains("missing")) {
    if (!doc["missing"].is_array()) {
      throw ParseError("schema: 'missing' must be an array of strings");
    }
    schema.missing_tokens.clear();
    for (const auto& m : doc["missing"]) {
      schema.missing_tokens.push_back(m.get<std::string>());
    }
  }
  return schema;
}

Schema load_schema(const std::string& path) {
  return parse_schema(read_file(path, "schema"));
}

const std::vector<double>& Dataset::numeric_column(int column) const {
  return numeric_columns[column_slot[column]];
}

const std::vector<std::string>& Dataset::string_column(int column) const {
  return string_columns[column_slot[column]];
}

Dataset Dataset::subset(const std::vector<uint32_t>& rows) const {
  Dataset out;
  out.schema = schema;
  out.column_slot = column_slot;
  out.numeric_columns.resize(numeric_columns.size());
  out.string_columns.resize(string_columns.size());
  for (size_t c = 0; c < numeric_columns.size(); ++c) {
    out.numeric_columns[c].reserve(rows.size());
    for (uint32_t r : rows) out.numeric_columns[c].push_back(numeric_columns[c][r]);
  }
  for (size_t c = 0; c < string_columns.size(); ++c) {
    out.string_columns[c].reserve(rows.size());
    for (uint32_t r : rows) out.string_columns[c].push_back(string_columns[c][r]);
  }
  out.labels.reserve(rows.size());
  for (uint32_t r : rows) out.labels.push_back(labels[r]);
  return out;
}

Dataset parse_csv(const std::string& text, const Schema& schema,
                  LoadReport* report) {
  const auto records = parse_csv_records(text);
  if (records.empty()) {
    throw ParseError("csv: empty file");
  }
  const auto& header = records.front();

  // The header must be a permutation of the declared columns plus the label.
  std::vector<int> field_to_column(header.size(), -1);
  int label_field = -1;
  std::set<std::string> seen;
  for (size_t f = 0; f < header.size(); ++f) {
    if (!seen.insert(header[f]).second) {
      throw ParseError("csv: duplicate header column '" + header[f] + "'");
    }
    if (header[f] == schema.label_column) {
      label_field = static_cast<int>(f);
      continue;
    }
    const int c = schema.column_index(header[f]);
    if (c < 0) {
      throw ParseError("csv: unknown column '" + header[f] + "'");
    }
    field_to_column[f] = c;
  }
  if (label_field < 0) {
    throw ParseError("csv: label column '" + schema.label_column +
                     "' not found");
  }
  if (header.size() != schema.columns.size() + 1) {
    throw ParseError("csv: header does not cover all declared columns");
  }

  Dataset out;
  out.schema = schema;
  out.column_slot.resize(schema.columns.size());
  size_t n_num = 0;
  size_t n_str = 0;
  for (size_t c = 0; c < schema.columns.size(); ++c) {
    out.column_slot[c] = static_cast<uint32_t>(
        schema.columns[c].numeric ? n_num++ : n_str++);
  }
  out.numeric_columns.resize(n_num);
  out.string_columns.resize(n_str);

  LoadReport rep;
  const auto is_missing = [&](const std::string& v) {
    return std::find(schema.missing_tokens.begin(),
                     schema.missing_tokens.end(),
                     v) != schema.missing_tokens.end();
  };

  std::vector<double> nums(schema.columns.size(), 0.0);
  for (size_t r = 1; r < records.size(); ++r) {
    const auto& row = records[r];
    if (row.size() == 1 && row[0].empty()) {
      continue;  // blank line
    }
    ++rep.rows_read;
    if (row.size() != header.size()) {
      throw ParseError("csv: row " + std::to_string(r + 1) + " has " +
                       std::to_string(row.size()) + " fields, expected " +
                       std::to_string(header.size()));
    }
    bool missing = false;
    for (const std::string& v : row) {
      if (is_missing(v)) {
        missing = true;
        break;
      }
    }
    if (missing) {
      ++rep.dropped_missing;
      continue;
    }
    const std::string& lab = row[label_field];
    uint8_t y;
    if (lab == schema.positive_label) {
      y = 1;
    } else if (lab == schema.negative_label) {
      y = 0;
    } else {
      throw ParseError("csv: row " + std::to_string(r + 1) +
                       ": label '" + lab + "' is neither '" +
                       schema.positive_label + "' nor '" +
                       schema.negative_label + "'");
    }
    bool bad_numeric = false;
    for (size_t f = 0; f < row.size(); ++f) {
      const int c = field_to_column[f];
      if (c < 0 || !schema.columns[c].numeric) {
        continue;
      }
      if (!parse_double(row[f], &nums[c])) {
        bad_numeric = true;
        break;
      }
    }
    if (bad_numeric) {
      ++rep.dropped_bad_numeric;
      continue;
    }
    for (size_t f = 0; f < row.size(); ++f) {
      const int c = field_to_column[f];
      if (c < 0) continue;
      if (schema.columns[c].numeric) {
        out.numeric_columns[out.column_slot[c]].push_back(nums[c]);
      } else {
        out.string_columns[out.column_slot[c]].push_back(row[f]);
      }
    }
    out.labels.push_back(y);
    ++rep.rows_kept;
  }
  if (report != nullptr) {
    *report = rep;
  }
  return out;
}

Dataset load_csv(const std::string& path, const Schema& schema,
                 LoadReport* report) {
  return parse_csv(read_file(path, "csv"), schema, report);
}

std::string serialize_csv(const Dataset& dataset) {
  const Schema& schema = dataset.schema;
  std::string out;
  for (const auto& col : schema.columns) {
    out += csv_escape(col.name);
    out.push_back(',');
  }
  out += csv_escape(schema.label_column);
  out.push_back('\n');

  for (size_t r = 0; r < dataset.size(); ++r) {
    for (size_t c = 0; c < schema.columns.size(); ++c) {
      if (schema.columns[c].numeric) {
        out += format_double(dataset.numeric_column(static_cast<int>(c))[r]);
      } else {
        out += csv_escape(dataset.string_column(static_cast<int>(c))[r]);
      }
      out.push_back(',');
    }
    out += csv_escape(dataset.labels[r] ? schema.positive_label
                                        : schema.negative_label);
    out.push_back('\n');
  }
  return out;
}

void save_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write csv file: " + path);
  }
  out << serialize_csv(dataset);
}

std::vector<std::vector<uint32_t>> stratified_kfold(const Dataset& dataset,
                                                    int k, RandomSource& rng) {
  if (k < 2 || static_cast<size_t>(k) > dataset.size()) {
    throw std::invalid_argument("stratified_kfold: need 2 <= k <= #records");
  }
  std::vector<uint32_t> by_class[2];
  for (size_t r = 0; r < dataset.size(); ++r) {
    by_class[dataset.labels[r]].push_back(static_cast<uint32_t>(r));
  }
  std::vector<std::vector<uint32_t>> folds(k);
  for (auto& cls : by_class) {
    // Fisher-Yates shuffle, then deal round-robin so per-fold class counts
    // differ by at most one.
    for (size_t i = cls.size(); i > 1; --i) {
      const size_t j = rng.uniform_int(i);
      std::swap(cls[i - 1], cls[j]);
    }
    for (size_t i = 0; i < cls.size(); ++i) {
      folds[i % k].push_back(cls[i]);
    }
  }
  for (auto& fold : folds) {
    std::sort(fold.begin(), fold.end());
  }
  return folds;
}

double majority_error(const std::vector<uint8_t>& train_labels,
                      const std::vector<uint8_t>& test_labels) {
  if (train_labels.empty() || test_labels.empty()) {
    throw std::invalid_argument("majority_error: empty label vector");
  }
  uint64_t pos = 0;
  for (uint8_t y : train_labels) pos += y;
  // Ties predict positive, matching the histogram classifier's tie rule.
  const uint8_t majority = (2 * pos >= train_labels.size()) ? 1 : 0;
  uint64_t wrong = 0;
  for (uint8_t y : test_labels) wrong += (y != majority);
  return static_cast<double>(wrong) / static_cast<double>(test_labels.size());
}

}  // namespace privhist
