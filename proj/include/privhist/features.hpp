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

#ifndef PRIVHIST_FEATURES_HPP_
#define PRIVHIST_FEATURES_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "privhist/grids.hpp"
#include "privhist/random.hpp"

namespace privhist {

// Observed predictor-by-label counts. Rows are the predictor's leaf-level
// categories (zero rows kept for unobserved ones); columns index the label
// (0 = negative, 1 = positive).
struct ContingencyTable {
  std::vector<std::array<int64_t, 2>> observed;
  std::vector<int64_t> row_total;
  std::array<int64_t, 2> column_total = {0, 0};
  int64_t total = 0;
};

// Builds a table from raw observed counts (marginals derived).
ContingencyTable make_contingency(
    const std::vector<std::array<int64_t, 2>>& observed);

// Tallies attribute `attr` (leaf level of its hierarchy) against the label.
ContingencyTable contingency(const IndexedDataset& data, size_t attr);

// Independence-expected counts e_ij = row_i * col_j / N. Requires N > 0.
std::vector<std::array<double, 2>> expected_counts(
    const ContingencyTable& table);

// Pearson chi-square statistic, sum of (o-e)^2/e. Reference implementation
// only: its sensitivity grows with the dataset, so it is never used for
// private selection. Throws std::domain_error when any expected count is 0.
double chi_square(const ContingencyTable& table);

// Sum of absolute deviations from independence, sum |o_ij - e_ij|. The
// low-sensitivity correlation used for private feature selection. An empty
// table scores 0.
double cor(const ContingencyTable& table);

// Number of features to keep: ceil(2*log(T)/log(b)), at least 1. Requires
// T >= 2 and branching b >= 2.
int num_features(uint64_t threshold, double branching);

// Privately selects k attributes: the correlation of every attribute with
// the label is computed once, then k sequential exponential-mechanism draws
// without replacement, each at budget epsilon_fs/k with sensitivity 2.
// Returns the selected attribute indices in draw order; optionally exposes
// the (non-private) correlation scores. Throws when k exceeds the number
// of attributes or k < 1.
std::vector<int> select_features(const IndexedDataset& data, int k,
                                 double epsilon_fs, RandomSource& rng,
                                 std::vector<double>* cor_out = nullptr);

}  // namespace privhist

#endif  // PRIVHIST_FEATURES_HPP_
