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

#include "privhist/histogram_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "privhist/errors.hpp"

namespace privhist {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json grid_header(const std::vector<const Hierarchy*>& hierarchies,
                         const std::vector<std::string>& attributes,
                         const GridLevels& levels) {
  ordered_json grid;
  grid["features"] = attributes;
  grid["levels"] = levels;
  ordered_json sizes = ordered_json::array();
  for (size_t a = 0; a < levels.size(); ++a) {
    sizes.push_back(hierarchies[a]->level_size(levels[a]));
  }
  grid["level_sizes"] = sizes;
  return grid;
}

ordered_json cell_row(const std::vector<const Hierarchy*>& hierarchies,
                      const GridLevels& levels,
                      const std::vector<uint32_t>& ordinals,
                      const std::array<int64_t, 2>& counts) {
  ordered_json row;
  row["cell"] = ordinals;
  ordered_json labels = ordered_json::array();
  for (size_t a = 0; a < ordinals.size(); ++a) {
    const Hierarchy& h = *hierarchies[a];
    labels.push_back(h.node(h.level_nodes(levels[a])[ordinals[a]]).label);
  }
  row["labels"] = labels;
  row["positive"] = counts[1];
  row["negative"] = counts[0];
  return row;
}

ordered_json ledger_json(const std::vector<BudgetAccountant::Entry>& entries) {
  ordered_json budget = ordered_json::array();
  for (const auto& entry : entries) {
    ordered_json step;
    step["step"] = entry.label;
    step["fraction"] = {entry.num, entry.den};
    step["epsilon"] = entry.epsilon;
    budget.push_back(step);
  }
  return budget;
}

const ordered_json& require(const ordered_json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) {
    throw ParseError(std::string("histogram document: missing key '") + key +
                     "'");
  }
  return *it;
}

}  // namespace

std::string serialize_histogram(const Histogram& hist) {
  ordered_json doc;
  doc["type"] = "histogram";
  doc["grid"] = grid_header(hist.hierarchies, hist.attributes, hist.levels);
  doc["total_records"] = hist.total_records();
  ordered_json cells = ordered_json::array();
  for (const auto& [key, counts] : hist.cells) {
    cells.push_back(cell_row(hist.hierarchies, hist.levels, key, counts));
  }
  doc["cells"] = std::move(cells);
  return doc.dump(2) + "\n";
}

std::string serialize_noisy_histogram(const NoisyHistogram& histogram) {
  ordered_json doc;
  doc["type"] = "noisy-histogram";
  doc["grid"] =
      grid_header(histogram.hierarchies, histogram.attributes,
                  histogram.levels);
  doc["epsilon"] = histogram.epsilon_total;
  doc["seed"] = histogram.seed;
  doc["budget"] = ledger_json(histogram.ledger);
  doc["deviation_flags"] = histogram.deviation_flags;
  ordered_json cells = ordered_json::array();
  for (uint64_t flat = 0; flat < histogram.cell_count(); ++flat) {
    cells.push_back(cell_row(histogram.hierarchies, histogram.levels,
                             histogram.cell_ordinals(flat),
                             histogram.cells[flat]));
  }
  doc["cells"] = std::move(cells);
  return doc.dump(2) + "\n";
}

NoisyHistogram parse_noisy_histogram(
    const std::string& text, const std::vector<Hierarchy>& hierarchies) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("noisy histogram: invalid JSON: ") +
                     e.what());
  }
  if (!doc.is_object() || require(doc, "type") != "noisy-histogram") {
    throw ParseError("noisy histogram: not a noisy-histogram document");
  }

  NoisyHistogram out;
  const ordered_json& grid = require(doc, "grid");
  const ordered_json& features = require(grid, "features");
  const ordered_json& levels = require(grid, "levels");
  if (!features.is_array() || !levels.is_array() ||
      features.size() != levels.size() || features.empty()) {
    throw ParseError("noisy histogram: malformed grid header");
  }
  for (size_t a = 0; a < features.size(); ++a) {
    const std::string name = features[a].get<std::string>();
    const Hierarchy* found = nullptr;
    for (const Hierarchy& h : hierarchies) {
      if (h.attribute() == name) {
        found = &h;
        break;
      }
    }
    if (found == nullptr) {
      throw ParseError("noisy histogram: no hierarchy for feature '" + name +
                       "'");
    }
    const int level = levels[a].get<int>();
    if (level < 1 || level > found->height()) {
      throw ParseError("noisy histogram: level out of range for feature '" +
                       name + "'");
    }
    out.hierarchies.push_back(found);
    out.attributes.push_back(name);
    out.levels.push_back(level);
  }

  out.epsilon_total = require(doc, "epsilon").get<double>();
  out.seed = require(doc, "seed").get<uint64_t>();
  for (const ordered_json& step : require(doc, "budget")) {
    BudgetAccountant::Entry entry;
    entry.label = require(step, "step").get<std::string>();
    const ordered_json& fraction = require(step, "fraction");
    if (!fraction.is_array() || fraction.size() != 2) {
      throw ParseError("noisy histogram: malformed budget fraction");
    }
    entry.num = fraction[0].get<int64_t>();
    entry.den = fraction[1].get<int64_t>();
    entry.epsilon = require(step, "epsilon").get<double>();
    out.ledger.push_back(entry);
  }
  for (const ordered_json& flag : require(doc, "deviation_flags")) {
    out.deviation_flags.push_back(flag.get<std::string>());
  }

  uint64_t cell_count = 1;
  for (size_t a = 0; a < out.levels.size(); ++a) {
    cell_count *= out.hierarchies[a]->level_size(out.levels[a]);
  }
  const ordered_json& cells = require(doc, "cells");
  if (!cells.is_array() || cells.size() != cell_count) {
    throw ParseError("noisy histogram: expected " +
                     std::to_string(cell_count) + " cells, found " +
                     std::to_string(cells.size()));
  }
  out.cells.resize(cell_count);
  for (uint64_t flat = 0; flat < cell_count; ++flat) {
    const ordered_json& row = cells[flat];
    const ordered_json& ordinals = require(row, "cell");
    const std::vector<uint32_t> expected = out.cell_ordinals(flat);
    if (!ordinals.is_array() || ordinals.size() != expected.size()) {
      throw ParseError("noisy histogram: malformed cell key");
    }
    for (size_t a = 0; a < expected.size(); ++a) {
      if (ordinals[a].get<uint32_t>() != expected[a]) {
        throw ParseError(
            "noisy histogram: cells out of ascending flat order");
      }
    }
    const ordered_json& labels = require(row, "labels");
    for (size_t a = 0; a < expected.size(); ++a) {
      const Hierarchy& h = *out.hierarchies[a];
      const std::string& want =
          h.node(h.level_nodes(out.levels[a])[expected[a]]).label;
      if (labels[a].get<std::string>() != want) {
        throw ParseError("noisy histogram: cell label '" +
                         labels[a].get<std::string>() +
                         "' does not match hierarchy node '" + want + "'");
      }
    }
    const int64_t pos = require(row, "positive").get<int64_t>();
    const int64_t neg = require(row, "negative").get<int64_t>();
    if (pos < 0 || neg < 0) {
      throw ParseError("noisy histogram: negative cell count");
    }
    out.cells[flat] = {neg, pos};
  }
  return out;
}

NoisyHistogram load_noisy_histogram(
    const std::string& path, const std::vector<Hierarchy>& hierarchies) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open histogram file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_noisy_histogram(buffer.str(), hierarchies);
}

void save_noisy_histogram(const NoisyHistogram& histogram,
                          const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ParseError("cannot write histogram file: " + path);
  }
  out << serialize_noisy_histogram(histogram);
}

}  // namespace privhist
