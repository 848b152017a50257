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

#ifndef PRIVHIST_QUALITY_HPP_
#define PRIVHIST_QUALITY_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "privhist/grids.hpp"
#include "privhist/random.hpp"

namespace privhist {

// CDF of the difference of two i.i.d. Laplace(1/epsilon) variables:
//   F(y) = 1 - (e^{-eps*y}/2)(1 + eps*y/2)   for y >= 0,
//   F(y) =     (e^{ eps*y}/2)(1 - eps*y/2)   for y <  0.
// Requires epsilon > 0.
double laplace_diff_cdf(double y, double epsilon);

// Probability that a cell's majority label survives the noise, as a
// function of the count margin x = |n+ - n-|:
//   p(x) = 1 - (e^{-eps*x}/2)(1 + eps*x/2) = F(x).
// Requires x >= 0 (throws std::invalid_argument) and epsilon > 0.
double prob_majority_preserved(double x, double epsilon);

// Expected number of misclassified records of one cell under the noisy
// majority rule: min(n+,n-) * p + max(n+,n-) * (1 - p). Symmetric in the
// two counts; 0 for an empty cell; between min and max otherwise.
double cell_expected_error(int64_t n_pos, int64_t n_neg, double epsilon);

// Grid quality: the expected number of records the noisy-histogram
// classifier misclassifies, summed over cells. Lower is better. Empty
// cells contribute exactly 0.
double grid_quality(const Histogram& hist, double epsilon_noise);

// The sensitivity integrand: the quality change from adding one record to
// a cell whose majority margin grows from x-1 to x (x >= 1).
double quality_bound_at(double x, double epsilon);

// Stationary point x* of the integrand (closed form).
double quality_sensitivity_argmax(double epsilon);

// Global sensitivity bound of grid_quality: B(eps) = the integrand at x*.
double quality_sensitivity_bound(double epsilon);

// Scores every candidate grid with grid_quality at epsilon_noise. Scoring
// parallelizes over candidates; each score is bitwise independent of the
// thread count.
std::vector<double> score_pool(const IndexedDataset& data,
                               const CandidatePool& pool, double epsilon_noise,
                               int threads = 1);

// Private grid selection: scores the pool with grid_quality(., epsilon_ph)
// and draws one candidate through the exponential mechanism at budget
// epsilon_sh with sensitivity B(epsilon_ph), lower scores preferred.
// Returns the index into pool.grids; optionally exposes the scores.
size_t select_grid(const IndexedDataset& data, const CandidatePool& pool,
                   double epsilon_sh, double epsilon_ph, RandomSource& rng,
                   std::vector<double>* scores_out = nullptr, int threads = 1);

}  // namespace privhist

#endif  // PRIVHIST_QUALITY_HPP_
