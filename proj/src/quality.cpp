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

#include "privhist/quality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "privhist/mechanisms.hpp"

namespace privhist {

namespace {

// g(t) = (e^{-eps*t}/2)(1 + eps*t/2); the survival mass of the noise
// difference beyond t, so F(t) = 1 - g(t) for t >= 0.
double half_tail(double t, double epsilon) {
  const double et = epsilon * t;
  return 0.5 * std::exp(-et) * (1.0 + 0.5 * et);
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be positive and finite");
  }
}

// Per-thread dense count buffer cap: 2M cells (32 MB). Larger grids fall
// back to the sparse path, which accumulates the identical sum.
constexpr uint64_t kDenseCellLimit = uint64_t{1} << 21;

// Quality of one grid, summed over cells in ascending flat-index order.
// The dense path adds exact zeros for empty cells, so it is bitwise equal
// to grid_quality over the sparse histogram (whose map iterates the same
// order). `dense` is a reusable scratch buffer.
double score_one_grid(const IndexedDataset& data, const GridLevels& levels,
                      double epsilon,
                      std::vector<std::array<int64_t, 2>>* dense) {
  const size_t d = levels.size();
  const uint64_t cells = grid_cell_count(data.hierarchies, levels);
  if (cells > kDenseCellLimit) {
    return grid_quality(build_histogram(data, levels), epsilon);
  }

  std::vector<uint64_t> stride(d);
  std::vector<const std::vector<uint32_t>*> ordinal(d);
  uint64_t s = 1;
  for (size_t a = d; a-- > 0;) {
    stride[a] = s;
    s *= data.hierarchies[a]->level_size(levels[a]);
    ordinal[a] = &data.hierarchies[a]->ancestor_at_level(levels[a]);
  }

  dense->assign(cells, {0, 0});
  const size_t n = data.size();
  for (size_t r = 0; r < n; ++r) {
    uint64_t idx = 0;
    for (size_t a = 0; a < d; ++a) {
      idx += stride[a] * (*ordinal[a])[data.leaf[a][r]];
    }
    ++(*dense)[idx][data.labels[r]];
  }

  double total = 0.0;
  for (const auto& counts : *dense) {
    if (counts[0] | counts[1]) {
      total += cell_expected_error(counts[1], counts[0], epsilon);
    }
  }
  return total;
}

}  // namespace

double laplace_diff_cdf(double y, double epsilon) {
  check_epsilon(epsilon);
  return y >= 0.0 ? 1.0 - half_tail(y, epsilon) : half_tail(-y, epsilon);
}

double prob_majority_preserved(double x, double epsilon) {
  check_epsilon(epsilon);
  if (!(x >= 0.0)) {
    throw std::invalid_argument("margin x must be non-negative");
  }
  return 1.0 - half_tail(x, epsilon);
}

double cell_expected_error(int64_t n_pos, int64_t n_neg, double epsilon) {
  check_epsilon(epsilon);
  if (n_pos < 0 || n_neg < 0) {
    throw std::invalid_argument("cell counts must be non-negative");
  }
  const double lo = static_cast<double>(std::min(n_pos, n_neg));
  const double hi = static_cast<double>(std::max(n_pos, n_neg));
  const double x = static_cast<double>(std::llabs(n_pos - n_neg));
  const double p = 1.0 - half_tail(x, epsilon);
  return lo * p + hi * (1.0 - p);
}

double grid_quality(const Histogram& hist, double epsilon_noise) {
  check_epsilon(epsilon_noise);
  double total = 0.0;
  for (const auto& [key, counts] : hist.cells) {
    total += cell_expected_error(counts[1], counts[0], epsilon_noise);
  }
  return total;
}

double quality_bound_at(double x, double epsilon) {
  check_epsilon(epsilon);
  if (!(x >= 1.0)) {
    throw std::invalid_argument("x must be >= 1");
  }
  // Moving one record across the majority gap of a cell with margin x-1:
  // the min-side count loses weight p(x-1)-p(x) per record, and the added
  // record itself is misclassified with probability 1-p(x-1).
  return x * (half_tail(x - 1.0, epsilon) - half_tail(x, epsilon)) +
         (1.0 - half_tail(x - 1.0, epsilon));
}

double quality_sensitivity_argmax(double epsilon) {
  check_epsilon(epsilon);
  const double e1 = std::exp(epsilon);
  const double e2 = std::exp(2.0 * epsilon);
  const double disc = 2.0 - (4.0 - epsilon * epsilon) * e1 + 2.0 * e2;
  // epsilon*(e^eps - 1), via expm1 for small budgets.
  const double denom = epsilon * std::expm1(epsilon);
  return (epsilon * e1 + std::sqrt(disc)) / denom;
}

double quality_sensitivity_bound(double epsilon) {
  const double x_star = quality_sensitivity_argmax(epsilon);
  return quality_bound_at(std::max(1.0, x_star), epsilon);
}

std::vector<double> score_pool(const IndexedDataset& data,
                               const CandidatePool& pool, double epsilon_noise,
                               int threads) {
  check_epsilon(epsilon_noise);
  const size_t m = pool.grids.size();
  std::vector<double> scores(m);
  const auto score_range = [&](size_t begin, size_t end) {
    std::vector<std::array<int64_t, 2>> dense;
    for (size_t i = begin; i < end; ++i) {
      scores[i] = score_one_grid(data, pool.grids[i], epsilon_noise, &dense);
    }
  };

  if (threads <= 1 || m < 2) {
    score_range(0, m);
    return scores;
  }
  const size_t workers = std::min<size_t>(threads, m);
  std::vector<std::thread> team;
  for (size_t w = 0; w < workers; ++w) {
    team.emplace_back(score_range, m * w / workers, m * (w + 1) / workers);
  }
  for (auto& t : team) {
    t.join();
  }
  return scores;
}

size_t select_grid(const IndexedDataset& data, const CandidatePool& pool,
                   double epsilon_sh, double epsilon_ph, RandomSource& rng,
                   std::vector<double>* scores_out, int threads) {
  if (pool.grids.empty()) {
    throw std::invalid_argument("select_grid: empty candidate pool");
  }
  const std::vector<double> scores =
      score_pool(data, pool, epsilon_ph, threads);
  const double bound = quality_sensitivity_bound(epsilon_ph);
  const size_t chosen = exponential_select(scores, epsilon_sh, bound,
                                           /*lower_is_better=*/true, rng);
  if (scores_out != nullptr) {
    *scores_out = scores;
  }
  return chosen;
}

}  // namespace privhist
