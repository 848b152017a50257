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

#ifndef PRIVHIST_MECHANISMS_HPP_
#define PRIVHIST_MECHANISMS_HPP_

#include <cstddef>
#include <vector>

#include "privhist/random.hpp"

namespace privhist {

// One draw of Laplace(0, scale) noise. Requires scale > 0.
double sample_laplace(double scale, RandomSource& rng);

// Exponential mechanism over a finite candidate list.
//
// Selects index i with probability proportional to
//   exp(epsilon * scores[i] / (2 * sensitivity)),
// with the score sign flipped when lower_is_better. Weights are formed in
// log-space relative to the best candidate, so only non-positive exponents
// are exponentiated; candidates whose exponent gap exceeds 700 underflow to
// weight zero, which is the correct limit. Consumes exactly one uniform
// draw. Throws std::invalid_argument on an empty list, a non-finite score,
// or non-positive epsilon/sensitivity.
size_t exponential_select(const std::vector<double>& scores, double epsilon,
                          double sensitivity, bool lower_is_better,
                          RandomSource& rng);

// Fixed split of a total privacy budget across the pipeline steps.
struct BudgetSplit {
  // Exact fractions of the total, and the floating-point amounts.
  // The amounts are constructed so that they sum to `total` exactly:
  // the largest component is computed directly and the remainder is exact
  // by Sterbenz's lemma (the subtrahend always lies in [total/2, total]).
  double fs = 0.0;  // feature selection
  double sh = 0.0;  // histogram selection
  double ph = 0.0;  // histogram perturbation
  int64_t fs_num = 0, fs_den = 1;
  int64_t sh_num = 0, sh_den = 1;
  int64_t ph_num = 0, ph_den = 1;
};

// With feature selection: (0.3, 0.3, 0.4) of the total.
// Without: (0, 3/7, 4/7). Throws std::invalid_argument unless total > 0.
BudgetSplit budget_split(double total, bool with_feature_selection);

}  // namespace privhist

#endif  // PRIVHIST_MECHANISMS_HPP_
