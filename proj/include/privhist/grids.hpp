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

#ifndef PRIVHIST_GRIDS_HPP_
#define PRIVHIST_GRIDS_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "privhist/dataset.hpp"
#include "privhist/taxonomy.hpp"

namespace privhist {

// Dataset bound to a set of hierarchies: per attribute, the leaf ordinal of
// every record, precomputed once so grid histograms reduce to table lookups.
// Records whose values fall outside a hierarchy's domain are rejected at
// binding and counted.
struct IndexedDataset {
  std::vector<const Hierarchy*> hierarchies;
  std::vector<std::string> attributes;  // names, parallel to hierarchies
  std::vector<std::vector<uint32_t>> leaf;  // [attribute][record]
  std::vector<uint8_t> labels;
  uint64_t dropped_out_of_domain = 0;

  size_t size() const { return labels.size(); }

  // Restriction to a subset of its attributes (indices into `hierarchies`).
  IndexedDataset project(const std::vector<int>& attrs) const;

  // Row subset in the given order (indices into the bound records).
  IndexedDataset subset(const std::vector<uint32_t>& rows) const;
};

// Binds `dataset` to the hierarchies whose attributes appear in the schema.
// Every hierarchy attribute must name a schema column of the matching kind
// (ParseError otherwise).
IndexedDataset bind_dataset(const Dataset& dataset,
                            const std::vector<Hierarchy>& hierarchies);
IndexedDataset bind_dataset(const Dataset& dataset,
                            const std::vector<const Hierarchy*>& hierarchies);

// One candidate grid: a generalization level per attribute (1 = root).
using GridLevels = std::vector<int>;

// Number of cells of a grid: the product of per-level partition sizes.
uint64_t grid_cell_count(const std::vector<const Hierarchy*>& hierarchies,
                         const GridLevels& levels);

// Candidate pool: every level combination whose cell count is within the
// threshold, in lexicographic order over (attribute order, levels).
struct CandidatePool {
  std::vector<const Hierarchy*> hierarchies;
  std::vector<GridLevels> grids;
  uint64_t max_cells = 0;
  // True when enumeration stopped at `cap` grids; the pool size is then a
  // lower bound on the true pool size.
  bool truncated = false;
};

// Enumerates grids with cell count <= max_cells. Partition sizes are
// non-decreasing in the level, so enumeration prunes on prefix products.
// cap = 0 means unlimited. Requires max_cells >= 1 and at least one
// hierarchy.
CandidatePool enumerate_grids(const std::vector<const Hierarchy*>& hierarchies,
                              uint64_t max_cells, uint64_t cap = 0);

// Sparse two-class histogram of a dataset under one grid. Keys are
// node ordinals per attribute; only cells with at least one record are
// stored. The map's lexicographic key order equals ascending flat cell
// index.
struct Histogram {
  std::vector<const Hierarchy*> hierarchies;
  std::vector<std::string> attributes;
  GridLevels levels;
  std::map<std::vector<uint32_t>, std::array<int64_t, 2>> cells;  // {n-, n+}

  uint64_t cell_count() const;  // full grid size, empty cells included
  uint64_t total_records() const;
};

// Cell key of one record under a grid.
std::vector<uint32_t> cell_key(const IndexedDataset& data,
                               const GridLevels& levels, size_t record);

// Builds the histogram of `data` under `levels`. With threads > 1 records
// are sharded and the integer counts merged, so the result is identical to
// the sequential one.
Histogram build_histogram(const IndexedDataset& data, const GridLevels& levels,
                          int threads = 1);

}  // namespace privhist

#endif  // PRIVHIST_GRIDS_HPP_
