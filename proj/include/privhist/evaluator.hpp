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

#ifndef PRIVHIST_EVALUATOR_HPP_
#define PRIVHIST_EVALUATOR_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "privhist/grids.hpp"
#include "privhist/publisher.hpp"

namespace privhist {

// Majority-vote classifier over a grid's noisy cells. Every cell has a
// defined prediction; the fallback label (larger total, tie positive) is
// kept for completeness even though a bound record always lands in a cell.
struct HistogramClassifier {
  std::vector<const Hierarchy*> hierarchies;
  std::vector<std::string> attributes;
  GridLevels levels;
  std::vector<uint8_t> cell_label;  // by flat cell index
  uint8_t fallback_label = 1;
};

// Cell label = positive iff noisy n+ >= n- (ties predict positive).
HistogramClassifier fit_histogram_classifier(const NoisyHistogram& histogram);

// Misclassification rate on a test set. The IndexedDataset overload
// requires data already bound to the classifier's hierarchies in the same
// attribute order; the Dataset overload binds internally and throws
// std::domain_error if any test value falls outside a hierarchy's domain.
double evaluate(const HistogramClassifier& classifier,
                const IndexedDataset& test);
double evaluate(const HistogramClassifier& classifier, const Dataset& test);

// Cross-validated pipeline evaluation: one stratified k-fold split, then
// `repeats` full pipeline runs per fold (distinct derived seeds), each
// evaluated on the held-out fold. Mean/stddev are over all folds*repeats
// runs; the majority baseline is averaged over folds.
struct CrossValidationResult {
  double mean_error = 0.0;
  double stddev_error = 0.0;  // population stddev over all runs
  double majority_error = 0.0;
  int folds = 0;
  int repeats = 0;
  std::vector<double> run_errors;  // fold-major: run = fold*repeats + rep
};

CrossValidationResult cross_validate(const Dataset& dataset,
                                     const std::vector<Hierarchy>& hierarchies,
                                     const PublishConfig& config, int folds,
                                     int repeats);

// Noise-free reference: the same fold split, but each fold trains an exact
// histogram classifier on the grid minimizing the training
// misclassification floor (sum of per-cell minority counts) over the
// admissible pool. A non-private lower-bound companion to cross_validate.
double noise_free_reference(const Dataset& dataset,
                            const std::vector<Hierarchy>& hierarchies,
                            int folds, uint64_t seed,
                            uint64_t max_cells = 0);

}  // namespace privhist

#endif  // PRIVHIST_EVALUATOR_HPP_
