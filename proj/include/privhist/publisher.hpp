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

#ifndef PRIVHIST_PUBLISHER_HPP_
#define PRIVHIST_PUBLISHER_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "privhist/budget.hpp"
#include "privhist/dataset.hpp"
#include "privhist/grids.hpp"
#include "privhist/random.hpp"

namespace privhist {

// Run parameters of one private release.
struct PublishConfig {
  double epsilon = 1.0;
  // Cell-threshold coefficient: a grid is admissible when its cell count
  // stays within delta * N * epsilon / 2.
  double delta = 0.1;
  // Candidate-pool size cap; at or beyond it the pipeline first selects
  // features privately and re-enumerates.
  uint64_t max_pool = 200000;
  uint64_t seed = 0;
  int threads = 1;
};

// Largest admissible cell count: max(1, floor(delta * N * epsilon / 2)).
uint64_t cell_threshold(uint64_t n_records, double epsilon, double delta);

// A published noisy histogram: every cell of the chosen grid (empty ones
// included) carries independently perturbed, rounded, non-negative counts.
struct NoisyHistogram {
  std::vector<const Hierarchy*> hierarchies;
  std::vector<std::string> attributes;
  GridLevels levels;
  // One entry per grid cell in ascending flat order, {n-, n+}.
  std::vector<std::array<int64_t, 2>> cells;

  double epsilon_total = 0.0;
  std::vector<BudgetAccountant::Entry> ledger;
  uint64_t seed = 0;
  std::vector<std::string> deviation_flags;

  uint64_t cell_count() const { return cells.size(); }
  // Per-attribute node ordinals of the cell at a flat index.
  std::vector<uint32_t> cell_ordinals(uint64_t flat) const;
};

// Adds Laplace(1/epsilon_ph) noise to both counts of EVERY cell of the
// grid, rounds half away from zero, and clamps at 0. Exactly two draws per
// cell are consumed in ascending flat cell order (negative count first), so
// randomness consumption is independent of which cells hold data.
NoisyHistogram perturb_histogram(const Histogram& hist, double epsilon_ph,
                                 RandomSource& rng);

// Optional audit payload of one pipeline run. Everything in here except
// the final histogram is raw (not noise-protected); the CLI exposes it only
// behind an explicit unsafe-diagnostics flag.
struct PipelineDiagnostics {
  uint64_t threshold = 0;
  uint64_t initial_pool_size = 0;  // capped at max_pool
  bool initial_pool_truncated = false;
  bool feature_selection_used = false;
  bool feature_selection_skipped_k_clamp = false;
  int k = 0;
  int median_branching = 0;
  std::vector<double> cor_scores;  // per input attribute, raw
  std::vector<int> selected_attributes;  // indices into the input list
  std::vector<GridLevels> pool;  // the scored candidate pool
  std::vector<double> pool_scores;  // raw quality scores
  size_t chosen_index = 0;
};

// The full release pipeline: threshold, candidate enumeration, optional
// private feature selection, private grid selection, perturbation. The
// returned ledger always sums to exactly config.epsilon. Throws
// std::invalid_argument on an empty dataset and std::runtime_error when no
// grid fits the threshold (reporting the smallest achievable size).
NoisyHistogram run_pipeline(const IndexedDataset& data,
                            const PublishConfig& config,
                            PipelineDiagnostics* diagnostics = nullptr);

// Draws a synthetic dataset from a published histogram alone: per cell,
// n+ positive then n- negative records, each attribute value uniform over
// the leaf values (numeric: uniform in the bin) under the cell's node.
// Consumes no input other than the histogram and the given randomness, so
// it is post-processing by construction. Label strings are configurable;
// the label column must not collide with an attribute name.
Dataset synthesize(const NoisyHistogram& histogram, RandomSource& rng,
                   const std::string& label_column = "label",
                   const std::string& positive_label = "1",
                   const std::string& negative_label = "0");

}  // namespace privhist

#endif  // PRIVHIST_PUBLISHER_HPP_
