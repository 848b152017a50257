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

#include "privhist/grids.hpp"

#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "privhist/errors.hpp"

namespace privhist {

IndexedDataset IndexedDataset::project(const std::vector<int>& attrs) const {
  IndexedDataset out;
  for (int a : attrs) {
    out.hierarchies.push_back(hierarchies[a]);
    out.attributes.push_back(attributes[a]);
    out.leaf.push_back(leaf[a]);
  }
  out.labels = labels;
  out.dropped_out_of_domain = dropped_out_of_domain;
  return out;
}

IndexedDataset IndexedDataset::subset(const std::vector<uint32_t>& rows) const {
  IndexedDataset out;
  out.hierarchies = hierarchies;
  out.attributes = attributes;
  out.leaf.resize(leaf.size());
  for (size_t a = 0; a < leaf.size(); ++a) {
    out.leaf[a].reserve(rows.size());
    for (uint32_t r : rows) {
      out.leaf[a].push_back(leaf[a][r]);
    }
  }
  out.labels.reserve(rows.size());
  for (uint32_t r : rows) {
    out.labels.push_back(labels[r]);
  }
  return out;
}

IndexedDataset bind_dataset(const Dataset& dataset,
                            const std::vector<Hierarchy>& hierarchies) {
  std::vector<const Hierarchy*> pointers;
  pointers.reserve(hierarchies.size());
  for (const Hierarchy& h : hierarchies) {
    pointers.push_back(&h);
  }
  return bind_dataset(dataset, pointers);
}

IndexedDataset bind_dataset(const Dataset& dataset,
                            const std::vector<const Hierarchy*>& hierarchies) {
  IndexedDataset out;
  std::vector<int> columns;
  for (const Hierarchy* hp : hierarchies) {
    const Hierarchy& h = *hp;
    const int c = dataset.schema.column_index(h.attribute());
    if (c < 0) {
      throw ParseError("hierarchy attribute '" + h.attribute() +
                       "' is not a schema column");
    }
    if (dataset.schema.columns[c].numeric != h.numeric()) {
      throw ParseError("hierarchy attribute '" + h.attribute() +
                       "' kind does not match the schema column");
    }
    out.hierarchies.push_back(&h);
    out.attributes.push_back(h.attribute());
    columns.push_back(c);
  }

  const size_t n = dataset.size();
  const size_t d = out.hierarchies.size();
  std::vector<std::vector<uint32_t>> leaf(d);
  std::vector<uint8_t> in_domain(n, 1);
  for (size_t a = 0; a < d; ++a) {
    leaf[a].resize(n);
    const Hierarchy& h = *out.hierarchies[a];
    if (h.numeric()) {
      const auto& col = dataset.numeric_column(columns[a]);
      for (size_t r = 0; r < n; ++r) {
        if (!in_domain[r]) continue;
        try {
          leaf[a][r] = h.leaf_ordinal(col[r]);
        } catch (const std::domain_error&) {
          in_domain[r] = 0;
        }
      }
    } else {
      const auto& col = dataset.string_column(columns[a]);
      for (size_t r = 0; r < n; ++r) {
        if (!in_domain[r]) continue;
        try {
          leaf[a][r] = h.leaf_ordinal(col[r]);
        } catch (const std::domain_error&) {
          in_domain[r] = 0;
        }
      }
    }
  }

  out.leaf.assign(d, {});
  for (size_t a = 0; a < d; ++a) {
    out.leaf[a].reserve(n);
  }
  for (size_t r = 0; r < n; ++r) {
    if (!in_domain[r]) {
      ++out.dropped_out_of_domain;
      continue;
    }
    for (size_t a = 0; a < d; ++a) {
      out.leaf[a].push_back(leaf[a][r]);
    }
    out.labels.push_back(dataset.labels[r]);
  }
  return out;
}

uint64_t grid_cell_count(const std::vector<const Hierarchy*>& hierarchies,
                         const GridLevels& levels) {
  if (levels.size() != hierarchies.size()) {
    throw std::invalid_argument("grid_cell_count: level/hierarchy mismatch");
  }
  uint64_t prod = 1;
  for (size_t a = 0; a < levels.size(); ++a) {
    const uint64_t s = hierarchies[a]->level_size(levels[a]);
    if (prod > std::numeric_limits<uint64_t>::max() / s) {
      return std::numeric_limits<uint64_t>::max();  // saturate
    }
    prod *= s;
  }
  return prod;
}

CandidatePool enumerate_grids(const std::vector<const Hierarchy*>& hierarchies,
                              uint64_t max_cells, uint64_t cap) {
  if (hierarchies.empty()) {
    throw std::invalid_argument("enumerate_grids: no hierarchies");
  }
  if (max_cells < 1) {
    throw std::invalid_argument("enumerate_grids: max_cells must be >= 1");
  }
  CandidatePool pool;
  pool.hierarchies = hierarchies;
  pool.max_cells = max_cells;

  const size_t d = hierarchies.size();
  GridLevels current(d, 1);
  // Depth-first over level tuples in lexicographic order. Partition sizes
  // are non-decreasing in the level, so once a prefix product exceeds the
  // threshold every deeper level of that attribute does too.
  const std::function<bool(size_t, uint64_t)> rec = [&](size_t i,
                                                        uint64_t prod) {
    if (i == d) {
      if (cap != 0 && pool.grids.size() == cap) {
        pool.truncated = true;
        return false;
      }
      pool.grids.push_back(current);
      return true;
    }
    const Hierarchy& h = *hierarchies[i];
    for (int level = 1; level <= h.height(); ++level) {
      const uint64_t size = h.level_size(level);
      if (prod > max_cells / size) {
        break;
      }
      current[i] = level;
      if (!rec(i + 1, prod * size)) {
        return false;
      }
    }
    current[i] = 1;
    return true;
  };
  rec(0, 1);
  return pool;
}

uint64_t Histogram::cell_count() const {
  return grid_cell_count(hierarchies, levels);
}

uint64_t Histogram::total_records() const {
  uint64_t total = 0;
  for (const auto& [key, counts] : cells) {
    total += static_cast<uint64_t>(counts[0] + counts[1]);
  }
  return total;
}

std::vector<uint32_t> cell_key(const IndexedDataset& data,
                               const GridLevels& levels, size_t record) {
  std::vector<uint32_t> key(levels.size());
  for (size_t a = 0; a < levels.size(); ++a) {
    key[a] = data.hierarchies[a]->ancestor_at_level(
        levels[a])[data.leaf[a][record]];
  }
  return key;
}

Histogram build_histogram(const IndexedDataset& data, const GridLevels& levels,
                          int threads) {
  if (levels.size() != data.hierarchies.size()) {
    throw std::invalid_argument("build_histogram: level/hierarchy mismatch");
  }
  Histogram hist;
  hist.hierarchies = data.hierarchies;
  hist.attributes = data.attributes;
  hist.levels = levels;

  const size_t n = data.size();
  using CellMap = std::map<std::vector<uint32_t>, std::array<int64_t, 2>>;
  const auto count_range = [&](size_t begin, size_t end, CellMap* into) {
    for (size_t r = begin; r < end; ++r) {
      auto& counts = (*into)[cell_key(data, levels, r)];
      ++counts[data.labels[r]];
    }
  };

  if (threads <= 1 || n < 4096) {
    count_range(0, n, &hist.cells);
    return hist;
  }

  const size_t shards = static_cast<size_t>(threads);
  std::vector<CellMap> partial(shards);
  std::vector<std::thread> workers;
  for (size_t s = 0; s < shards; ++s) {
    const size_t begin = n * s / shards;
    const size_t end = n * (s + 1) / shards;
    workers.emplace_back(count_range, begin, end, &partial[s]);
  }
  for (auto& w : workers) {
    w.join();
  }
  // Integer merge: identical to the sequential result in any order.
  for (const auto& p : partial) {
    for (const auto& [key, counts] : p) {
      auto& acc = hist.cells[key];
      acc[0] += counts[0];
      acc[1] += counts[1];
    }
  }
  return hist;
}

}  // namespace privhist
