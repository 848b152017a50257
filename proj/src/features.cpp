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

#include "privhist/features.hpp"

#include <cmath>
#include <stdexcept>

#include "privhist/mechanisms.hpp"

namespace privhist {

ContingencyTable make_contingency(
    const std::vector<std::array<int64_t, 2>>& observed) {
  ContingencyTable table;
  table.observed = observed;
  table.row_total.reserve(observed.size());
  for (const auto& row : observed) {
    if (row[0] < 0 || row[1] < 0) {
      throw std::invalid_argument("contingency counts must be non-negative");
    }
    table.row_total.push_back(row[0] + row[1]);
    table.column_total[0] += row[0];
    table.column_total[1] += row[1];
    table.total += row[0] + row[1];
  }
  return table;
}

ContingencyTable contingency(const IndexedDataset& data, size_t attr) {
  std::vector<std::array<int64_t, 2>> observed(
      data.hierarchies[attr]->leaf_count(), {0, 0});
  const auto& leaf = data.leaf[attr];
  for (size_t r = 0; r < data.size(); ++r) {
    ++observed[leaf[r]][data.labels[r]];
  }
  return make_contingency(observed);
}

std::vector<std::array<double, 2>> expected_counts(
    const ContingencyTable& table) {
  if (table.total <= 0) {
    throw std::invalid_argument("expected_counts: empty table");
  }
  const double n = static_cast<double>(table.total);
  std::vector<std::array<double, 2>> expected(table.observed.size());
  for (size_t i = 0; i < expected.size(); ++i) {
    const double row = static_cast<double>(table.row_total[i]);
    expected[i][0] = row * static_cast<double>(table.column_total[0]) / n;
    expected[i][1] = row * static_cast<double>(table.column_total[1]) / n;
  }
  return expected;
}

double chi_square(const ContingencyTable& table) {
  const auto expected = expected_counts(table);
  double stat = 0.0;
  for (size_t i = 0; i < expected.size(); ++i) {
    for (int j = 0; j < 2; ++j) {
      const double e = expected[i][j];
      if (e <= 0.0) {
        throw std::domain_error(
            "chi_square: zero expected count leaves the statistic undefined");
      }
      const double d = static_cast<double>(table.observed[i][j]) - e;
      stat += d * d / e;
    }
  }
  return stat;
}

double cor(const ContingencyTable& table) {
  if (table.total == 0) {
    return 0.0;
  }
  const auto expected = expected_counts(table);
  double sum = 0.0;
  for (size_t i = 0; i < expected.size(); ++i) {
    for (int j = 0; j < 2; ++j) {
      sum += std::abs(static_cast<double>(table.observed[i][j]) -
                      expected[i][j]);
    }
  }
  return sum;
}

int num_features(uint64_t threshold, double branching) {
  if (threshold < 2) {
    throw std::invalid_argument("num_features: threshold must be >= 2");
  }
  if (!(branching >= 2.0)) {
    throw std::invalid_argument("num_features: branching must be >= 2");
  }
  const double k =
      2.0 * std::log(static_cast<double>(threshold)) / std::log(branching);
  // The guard keeps an exact-integer ratio (e.g. T = b^2) from being bumped
  // up by its last-ulp representation error.
  const int result = static_cast<int>(std::ceil(k - 1e-9));
  return result < 1 ? 1 : result;
}

std::vector<int> select_features(const IndexedDataset& data, int k,
                                 double epsilon_fs, RandomSource& rng,
                                 std::vector<double>* cor_out) {
  const int d = static_cast<int>(data.hierarchies.size());
  if (k < 1 || k > d) {
    throw std::invalid_argument("select_features: k out of range");
  }
  if (!(epsilon_fs > 0.0)) {
    throw std::invalid_argument("select_features: epsilon must be positive");
  }

  // Scores are computed once from the full data and reused by every draw;
  // each of the k draws spends an equal slice of the budget.
  std::vector<double> scores(d);
  for (int a = 0; a < d; ++a) {
    scores[a] = cor(contingency(data, a));
  }
  if (cor_out != nullptr) {
    *cor_out = scores;
  }

  const double per_draw = epsilon_fs / static_cast<double>(k);
  std::vector<int> remaining(d);
  for (int a = 0; a < d; ++a) {
    remaining[a] = a;
  }
  std::vector<double> live = scores;
  std::vector<int> selected;
  selected.reserve(k);
  for (int round = 0; round < k; ++round) {
    const size_t pick = exponential_select(live, per_draw, /*sensitivity=*/2.0,
                                           /*lower_is_better=*/false, rng);
    selected.push_back(remaining[pick]);
    remaining.erase(remaining.begin() + static_cast<long>(pick));
    live.erase(live.begin() + static_cast<long>(pick));
  }
  return selected;
}

}  // namespace privhist
