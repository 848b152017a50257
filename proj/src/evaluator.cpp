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

#include "privhist/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace privhist {

namespace {

std::vector<uint64_t> flat_strides(
    const std::vector<const Hierarchy*>& hierarchies,
    const GridLevels& levels) {
  std::vector<uint64_t> stride(levels.size());
  uint64_t s = 1;
  for (size_t a = levels.size(); a-- > 0;) {
    stride[a] = s;
    s *= hierarchies[a]->level_size(levels[a]);
  }
  return stride;
}

// Column of `data` holding each classifier attribute (matched by name, so
// the test set may carry more attributes than the grid uses).
std::vector<size_t> attribute_map(const HistogramClassifier& classifier,
                                  const IndexedDataset& data) {
  std::vector<size_t> map(classifier.attributes.size());
  for (size_t a = 0; a < classifier.attributes.size(); ++a) {
    const auto it = std::find(data.attributes.begin(), data.attributes.end(),
                              classifier.attributes[a]);
    if (it == data.attributes.end()) {
      throw std::invalid_argument("evaluate: test set lacks attribute '" +
                                  classifier.attributes[a] + "'");
    }
    map[a] = static_cast<size_t>(it - data.attributes.begin());
  }
  return map;
}

uint64_t flat_cell_of(const HistogramClassifier& classifier,
                      const std::vector<uint64_t>& stride,
                      const std::vector<size_t>& attr_of,
                      const IndexedDataset& data, size_t record) {
  uint64_t flat = 0;
  for (size_t a = 0; a < classifier.levels.size(); ++a) {
    flat += stride[a] *
            classifier.hierarchies[a]->ancestor_at_level(
                classifier.levels[a])[data.leaf[attr_of[a]][record]];
  }
  return flat;
}

// Complement of `rows` (ascending) within [0, n).
std::vector<uint32_t> complement_rows(const std::vector<uint32_t>& rows,
                                      size_t n) {
  std::vector<uint32_t> out;
  out.reserve(n - rows.size());
  size_t j = 0;
  for (uint32_t r = 0; r < n; ++r) {
    if (j < rows.size() && rows[j] == r) {
      ++j;
    } else {
      out.push_back(r);
    }
  }
  return out;
}

}  // namespace

HistogramClassifier fit_histogram_classifier(const NoisyHistogram& histogram) {
  HistogramClassifier classifier;
  classifier.hierarchies = histogram.hierarchies;
  classifier.attributes = histogram.attributes;
  classifier.levels = histogram.levels;
  classifier.cell_label.reserve(histogram.cells.size());
  int64_t total_neg = 0;
  int64_t total_pos = 0;
  for (const auto& counts : histogram.cells) {
    classifier.cell_label.push_back(counts[1] >= counts[0] ? 1 : 0);
    total_neg += counts[0];
    total_pos += counts[1];
  }
  classifier.fallback_label = total_pos >= total_neg ? 1 : 0;
  return classifier;
}

double evaluate(const HistogramClassifier& classifier,
                const IndexedDataset& test) {
  if (test.size() == 0) {
    throw std::invalid_argument("evaluate: empty test set");
  }
  const std::vector<uint64_t> stride =
      flat_strides(classifier.hierarchies, classifier.levels);
  const std::vector<size_t> attr_of = attribute_map(classifier, test);
  uint64_t wrong = 0;
  for (size_t r = 0; r < test.size(); ++r) {
    const uint64_t flat = flat_cell_of(classifier, stride, attr_of, test, r);
    if (classifier.cell_label[flat] != test.labels[r]) {
      ++wrong;
    }
  }
  return static_cast<double>(wrong) / static_cast<double>(test.size());
}

double evaluate(const HistogramClassifier& classifier, const Dataset& test) {
  const IndexedDataset bound = bind_dataset(test, classifier.hierarchies);
  if (bound.dropped_out_of_domain > 0) {
    throw std::domain_error("evaluate: test record outside a hierarchy's "
                            "domain");
  }
  return evaluate(classifier, bound);
}

CrossValidationResult cross_validate(const Dataset& dataset,
                                     const std::vector<Hierarchy>& hierarchies,
                                     const PublishConfig& config, int folds,
                                     int repeats) {
  if (repeats < 1) {
    throw std::invalid_argument("cross_validate: repeats must be >= 1");
  }
  const IndexedDataset all = bind_dataset(dataset, hierarchies);
  if (all.dropped_out_of_domain > 0) {
    throw std::domain_error(
        "cross_validate: record outside a hierarchy's domain");
  }

  RandomSource root(config.seed);
  RandomSource fold_rng = root.stream("cv-folds");
  const std::vector<std::vector<uint32_t>> fold_rows =
      stratified_kfold(dataset, folds, fold_rng);

  CrossValidationResult result;
  result.folds = folds;
  result.repeats = repeats;
  result.run_errors.reserve(static_cast<size_t>(folds) * repeats);

  double majority_sum = 0.0;
  for (int f = 0; f < folds; ++f) {
    const std::vector<uint32_t>& test_rows = fold_rows[f];
    const std::vector<uint32_t> train_rows =
        complement_rows(test_rows, dataset.size());
    const IndexedDataset train = all.subset(train_rows);
    const IndexedDataset test = all.subset(test_rows);
    majority_sum += majority_error(train.labels, test.labels);

    for (int rep = 0; rep < repeats; ++rep) {
      PublishConfig run_config = config;
      run_config.seed =
          root.stream("cv-run", static_cast<uint64_t>(f) * repeats + rep)
              .key();
      const NoisyHistogram noisy = run_pipeline(train, run_config);
      const HistogramClassifier classifier = fit_histogram_classifier(noisy);
      result.run_errors.push_back(evaluate(classifier, test));
    }
  }

  const double n = static_cast<double>(result.run_errors.size());
  const double mean =
      std::accumulate(result.run_errors.begin(), result.run_errors.end(),
                      0.0) /
      n;
  double var = 0.0;
  for (double e : result.run_errors) {
    var += (e - mean) * (e - mean);
  }
  result.mean_error = mean;
  result.stddev_error = std::sqrt(var / n);
  result.majority_error = majority_sum / static_cast<double>(folds);
  return result;
}

double noise_free_reference(const Dataset& dataset,
                            const std::vector<Hierarchy>& hierarchies,
                            int folds, uint64_t seed, uint64_t max_cells) {
  const IndexedDataset all = bind_dataset(dataset, hierarchies);
  if (all.dropped_out_of_domain > 0) {
    throw std::domain_error(
        "noise_free_reference: record outside a hierarchy's domain");
  }
  RandomSource root(seed);
  RandomSource fold_rng = root.stream("cv-folds");
  const std::vector<std::vector<uint32_t>> fold_rows =
      stratified_kfold(dataset, folds, fold_rng);

  if (max_cells == 0) {
    max_cells = dataset.size();
  }

  const CandidatePool pool =
      enumerate_grids(all.hierarchies, max_cells, /*cap=*/200000);

  double error_sum = 0.0;
  for (int f = 0; f < folds; ++f) {
    const std::vector<uint32_t> train_rows =
        complement_rows(fold_rows[f], dataset.size());
    const IndexedDataset train = all.subset(train_rows);
    const IndexedDataset test = all.subset(fold_rows[f]);

    // Exact selection: the grid with the smallest training
    // misclassification floor (first one on ties).
    size_t best = 0;
    int64_t best_floor = -1;
    for (size_t i = 0; i < pool.grids.size(); ++i) {
      const Histogram hist = build_histogram(train, pool.grids[i]);
      int64_t floor_count = 0;
      for (const auto& [key, counts] : hist.cells) {
        floor_count += std::min(counts[0], counts[1]);
      }
      if (best_floor < 0 || floor_count < best_floor) {
        best_floor = floor_count;
        best = i;
      }
    }

    const Histogram hist = build_histogram(train, pool.grids[best]);
    NoisyHistogram exact;
    exact.hierarchies = hist.hierarchies;
    exact.attributes = hist.attributes;
    exact.levels = hist.levels;
    exact.cells.assign(hist.cell_count(), {0, 0});
    const std::vector<uint64_t> stride =
        flat_strides(hist.hierarchies, hist.levels);
    for (const auto& [key, counts] : hist.cells) {
      uint64_t flat = 0;
      for (size_t a = 0; a < key.size(); ++a) {
        flat += stride[a] * key[a];
      }
      exact.cells[flat] = counts;
    }
    error_sum += evaluate(fit_histogram_classifier(exact), test);
  }
  return error_sum / static_cast<double>(folds);
}

}  // namespace privhist
