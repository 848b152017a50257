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

#include "privhist/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace privhist {

double sample_laplace(double scale, RandomSource& rng) {
  return rng.laplace(scale);
}

size_t exponential_select(const std::vector<double>& scores, double epsilon,
                          double sensitivity, bool lower_is_better,
                          RandomSource& rng) {
  if (scores.empty()) {
    throw std::invalid_argument("exponential_select: empty candidate list");
  }
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("exponential_select: epsilon must be > 0");
  }
  if (!(sensitivity > 0) || !std::isfinite(sensitivity)) {
    throw std::invalid_argument("exponential_select: sensitivity must be > 0");
  }
  for (double s : scores) {
    if (!std::isfinite(s)) {
      throw std::invalid_argument("exponential_select: non-finite score");
    }
  }

  const double factor =
      (lower_is_better ? -1.0 : 1.0) * epsilon / (2.0 * sensitivity);
  // Shift by the best score so every exponent is <= 0. Gaps beyond 700
  // underflow to zero weight, which is the correct limit and cannot
  // overflow.
  const double best = lower_is_better
                          ? *std::min_element(scores.begin(), scores.end())
                          : *std::max_element(scores.begin(), scores.end());
  std::vector<double> weights(scores.size());
  double total = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    const double exponent = factor * (scores[i] - best);
    weights[i] = exponent < -700.0 ? 0.0 : std::exp(exponent);
    total += weights[i];
  }

  const double u = rng.uniform() * total;
  double cum = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    cum += weights[i];
    if (u < cum) {
      return i;
    }
  }
  // Rounding left u == total; return the last candidate with positive weight.
  for (size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0.0) {
      return i;
    }
  }
  return weights.size() - 1;
}

BudgetSplit budget_split(double total, bool with_feature_selection) {
  if (!(total > 0) || !std::isfinite(total)) {
    throw std::invalid_argument("budget_split: total must be > 0");
  }
  BudgetSplit out;
  if (with_feature_selection) {
    // (0.3, 0.3, 0.4): the perturbation share is the exact remainder of the
    // first two. fs + sh = 0.6 * total >= total / 2, so total - (fs + sh) is
    // exact and the three doubles sum to total exactly.
    out.fs = 0.3 * total;
    out.sh = 0.3 * total;
    out.ph = total - (out.fs + out.sh);
    out.fs_num = 3;
    out.fs_den = 10;
    out.sh_num = 3;
    out.sh_den = 10;
    out.ph_num = 4;
    out.ph_den = 10;
  } else {
    // (3/7, 4/7): compute the larger share directly; 4*total/7 lies in
    // [total/2, total], so the selection share is an exact remainder and the
    // two doubles sum to total exactly.
    out.ph = 4.0 * total / 7.0;
    out.sh = total - out.ph;
    out.sh_num = 3;
    out.sh_den = 7;
    out.ph_num = 4;
    out.ph_den = 7;
  }
  return out;
}

}  // namespace privhist
