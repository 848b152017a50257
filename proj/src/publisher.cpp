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

#include "privhist/publisher.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "privhist/features.hpp"
#include "privhist/mechanisms.hpp"
#include "privhist/quality.hpp"

namespace privhist {

namespace {

// Hard ceiling on materialized grids: 2^26 cells (1 GB of counts).
constexpr uint64_t kMaterializeLimit = uint64_t{1} << 26;

std::vector<uint64_t> cell_strides(
    const std::vector<const Hierarchy*>& hierarchies, const GridLevels& levels,
    uint64_t* cells_out) {
  std::vector<uint64_t> stride(levels.size());
  uint64_t s = 1;
  for (size_t a = levels.size(); a-- > 0;) {
    stride[a] = s;
    s *= hierarchies[a]->level_size(levels[a]);
  }
  *cells_out = s;
  return stride;
}

int64_t clamp_round(double value) {
  const long long rounded = std::llround(value);  // half away from zero
  return rounded < 0 ? 0 : rounded;
}

}  // namespace

uint64_t cell_threshold(uint64_t n_records, double epsilon, double delta) {
  if (n_records < 1) {
    throw std::invalid_argument("cell_threshold: need at least one record");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("cell_threshold: epsilon must be positive");
  }
  if (!(delta > 0.0) || !(delta <= 1.0)) {
    throw std::invalid_argument("cell_threshold: delta must be in (0, 1]");
  }
  const double raw =
      std::floor(delta * static_cast<double>(n_records) * epsilon / 2.0);
  return raw < 1.0 ? 1 : static_cast<uint64_t>(raw);
}

std::vector<uint32_t> NoisyHistogram::cell_ordinals(uint64_t flat) const {
  std::vector<uint32_t> ordinals(levels.size());
  for (size_t a = levels.size(); a-- > 0;) {
    const uint64_t size = hierarchies[a]->level_size(levels[a]);
    ordinals[a] = static_cast<uint32_t>(flat % size);
    flat /= size;
  }
  return ordinals;
}

NoisyHistogram perturb_histogram(const Histogram& hist, double epsilon_ph,
                                 RandomSource& rng) {
  if (!(epsilon_ph > 0.0)) {
    throw std::invalid_argument("perturb_histogram: epsilon must be positive");
  }
  NoisyHistogram out;
  out.hierarchies = hist.hierarchies;
  out.attributes = hist.attributes;
  out.levels = hist.levels;

  uint64_t cells = 0;
  const std::vector<uint64_t> stride =
      cell_strides(hist.hierarchies, hist.levels, &cells);
  if (cells > kMaterializeLimit) {
    throw std::invalid_argument(
        "perturb_histogram: grid too large to materialize");
  }

  // Dense raw counts first: the noise must cover every cell, occupied or
  // not, in one fixed order.
  std::vector<std::array<int64_t, 2>> raw(cells, {0, 0});
  for (const auto& [key, counts] : hist.cells) {
    uint64_t flat = 0;
    for (size_t a = 0; a < key.size(); ++a) {
      flat += stride[a] * key[a];
    }
    raw[flat] = counts;
  }

  const double scale = 1.0 / epsilon_ph;
  out.cells.resize(cells);
  for (uint64_t c = 0; c < cells; ++c) {
    for (int label = 0; label < 2; ++label) {
      const double noisy =
          static_cast<double>(raw[c][label]) + rng.laplace(scale);
      out.cells[c][label] = clamp_round(noisy);
    }
  }
  return out;
}

NoisyHistogram run_pipeline(const IndexedDataset& data,
                            const PublishConfig& config,
                            PipelineDiagnostics* diagnostics) {
  if (data.size() == 0) {
    throw std::invalid_argument("run_pipeline: empty dataset");
  }
  if (data.hierarchies.empty()) {
    throw std::invalid_argument("run_pipeline: no hierarchies bound");
  }
  if (config.max_pool < 1) {
    throw std::invalid_argument("run_pipeline: max_pool must be >= 1");
  }

  RandomSource root(config.seed);
  BudgetAccountant ledger(config.epsilon);
  PipelineDiagnostics local_diag;
  PipelineDiagnostics& diag =
      diagnostics != nullptr ? *diagnostics : local_diag;
  diag = PipelineDiagnostics{};

  const uint64_t threshold =
      cell_threshold(data.size(), config.epsilon, config.delta);
  diag.threshold = threshold;

  CandidatePool pool =
      enumerate_grids(data.hierarchies, threshold, config.max_pool);
  diag.initial_pool_size = pool.grids.size();
  diag.initial_pool_truncated = pool.truncated;

  std::vector<std::string> flags;
  const int d = static_cast<int>(data.hierarchies.size());
  bool with_fs = pool.truncated || pool.grids.size() >= config.max_pool;

  // Feature selection only helps when fewer than all attributes would be
  // kept; otherwise spending budget to select everything is pure loss.
  int k = 0;
  int branching = 0;
  if (with_fs) {
    try {
      branching = median_first_branching(data.hierarchies);
    } catch (const std::invalid_argument&) {
      branching = 0;
    }
    if (threshold < 2 || branching < 2) {
      with_fs = false;
      flags.push_back("feature-selection-skipped-degenerate-branching");
    } else {
      k = num_features(threshold, static_cast<double>(branching));
      if (k >= d) {
        with_fs = false;
        flags.push_back("feature-selection-skipped-k-clamp");
      }
    }
    if (!with_fs) {
      // Fallback to the no-selection branch: the pool must be complete, so
      // enumerate again without the cap.
      pool = enumerate_grids(data.hierarchies, threshold, 0);
    }
  }
  diag.k = k;
  diag.median_branching = branching;
  diag.feature_selection_used = with_fs;
  diag.feature_selection_skipped_k_clamp =
      !with_fs && (diag.initial_pool_truncated ||
                   diag.initial_pool_size >= config.max_pool);

  const BudgetSplit split = budget_split(config.epsilon, with_fs);

  IndexedDataset projected;
  const IndexedDataset* working = &data;
  if (with_fs) {
    ledger.charge("feature-selection", split.fs_num, split.fs_den, split.fs);
    RandomSource fs_rng = root.stream("feature-selection");
    std::vector<int> selected =
        select_features(data, k, split.fs, fs_rng, &diag.cor_scores);
    std::sort(selected.begin(), selected.end());
    diag.selected_attributes = selected;
    projected = data.project(selected);
    working = &projected;
    pool = enumerate_grids(working->hierarchies, threshold, 0);
  } else {
    diag.selected_attributes.resize(d);
    for (int a = 0; a < d; ++a) {
      diag.selected_attributes[a] = a;
    }
  }

  if (pool.grids.empty()) {
    // Unreachable with level-1 roots (the one-cell grid always fits), but
    // kept as an actionable guard.
    GridLevels coarsest(working->hierarchies.size(), 1);
    throw std::runtime_error(
        "run_pipeline: no grid fits the cell threshold " +
        std::to_string(threshold) + "; the smallest achievable grid has " +
        std::to_string(grid_cell_count(working->hierarchies, coarsest)) +
        " cells");
  }

  ledger.charge("grid-selection", split.sh_num, split.sh_den, split.sh);
  RandomSource sh_rng = root.stream("grid-selection");
  const size_t chosen = select_grid(*working, pool, split.sh, split.ph, sh_rng,
                                    &diag.pool_scores, config.threads);
  diag.pool = pool.grids;
  diag.chosen_index = chosen;

  ledger.charge("perturbation", split.ph_num, split.ph_den, split.ph);
  const Histogram hist =
      build_histogram(*working, pool.grids[chosen], config.threads);
  RandomSource ph_rng = root.stream("perturbation");
  NoisyHistogram noisy = perturb_histogram(hist, split.ph, ph_rng);

  if (!ledger.exhausted_exactly() || ledger.spent() != config.epsilon) {
    throw std::logic_error("run_pipeline: budget ledger does not sum to the "
                           "configured total");
  }

  flags.push_back("selection-exponent-divided-by-quality-sensitivity");
  if (quality_sensitivity_bound(split.ph) > 1.0) {
    flags.push_back("quality-sensitivity-bound-above-1");
  }

  noisy.epsilon_total = config.epsilon;
  noisy.ledger = ledger.entries();
  noisy.seed = config.seed;
  noisy.deviation_flags = std::move(flags);
  return noisy;
}

Dataset synthesize(const NoisyHistogram& histogram, RandomSource& rng,
                   const std::string& label_column,
                   const std::string& positive_label,
                   const std::string& negative_label) {
  Dataset out;
  out.schema.label_column = label_column;
  out.schema.positive_label = positive_label;
  out.schema.negative_label = negative_label;
  const size_t d = histogram.attributes.size();
  for (size_t a = 0; a < d; ++a) {
    if (histogram.attributes[a] == label_column) {
      throw std::invalid_argument(
          "synthesize: label column collides with attribute '" +
          histogram.attributes[a] + "'");
    }
    out.schema.columns.push_back(
        {histogram.attributes[a], histogram.hierarchies[a]->numeric()});
    if (histogram.hierarchies[a]->numeric()) {
      out.column_slot.push_back(
          static_cast<uint32_t>(out.numeric_columns.size()));
      out.numeric_columns.emplace_back();
    } else {
      out.column_slot.push_back(
          static_cast<uint32_t>(out.string_columns.size()));
      out.string_columns.emplace_back();
    }
  }

  const auto emit = [&](const std::vector<uint32_t>& ordinals, uint8_t label) {
    for (size_t a = 0; a < d; ++a) {
      const Hierarchy& h = *histogram.hierarchies[a];
      const int node_id = h.level_nodes(histogram.levels[a])[ordinals[a]];
      const Hierarchy::Node& node = h.node(node_id);
      if (h.numeric()) {
        const double v = node.lo + rng.uniform() * (node.hi - node.lo);
        out.numeric_columns[out.column_slot[a]].push_back(v);
      } else {
        const uint64_t pick = rng.uniform_int(node.values.size());
        out.string_columns[out.column_slot[a]].push_back(node.values[pick]);
      }
    }
    out.labels.push_back(label);
  };

  for (uint64_t flat = 0; flat < histogram.cell_count(); ++flat) {
    const std::vector<uint32_t> ordinals = histogram.cell_ordinals(flat);
    for (int64_t i = 0; i < histogram.cells[flat][1]; ++i) {
      emit(ordinals, 1);
    }
    for (int64_t i = 0; i < histogram.cells[flat][0]; ++i) {
      emit(ordinals, 0);
    }
  }
  return out;
}

}  // namespace privhist
