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

#ifndef PRIVHIST_ORACLES_HPP_
#define PRIVHIST_ORACLES_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "privhist/random.hpp"

namespace privhist {

// Independent validators for every closed form the pipeline relies on.
// Each oracle recomputes its target quantity by simulation or exhaustive
// search without calling the closed-form code it checks, so a bug must
// strike both sides identically to slip through.

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  uint64_t trials = 0;
};

// Expected misclassified records of one cell under noisy majority voting,
// by direct simulation of the raw (unrounded, unclamped) Laplace noise.
McEstimate mc_cell_error(int64_t n_pos, int64_t n_neg, double epsilon,
                         uint64_t trials, RandomSource& rng);

// Empirical P(Z1 - Z2 <= y) for two i.i.d. Laplace(1/epsilon) draws.
double mc_diff_cdf(double y, double epsilon, uint64_t trials,
                   RandomSource& rng);

// Empirical mean of max(0, round_half_away(Laplace(scale))): the value an
// empty cell publishes on average.
McEstimate mc_clamped_rounded_laplace(double scale, uint64_t trials,
                                      RandomSource& rng);

// Exhaustive search for the largest quality change a single added record
// can cause over all cells with counts <= cap.
struct QualitySensitivitySearch {
  double max_delta = 0.0;
  int64_t at_pos = 0;  // cell attaining the max
  int64_t at_neg = 0;
  int added_label = 0;  // 0 = negative, 1 = positive
};
QualitySensitivitySearch search_quality_sensitivity(double epsilon,
                                                    int64_t cap);

// Exhaustive search for the largest correlation-score change a single
// added record can cause over all tables with at most m_cap rows and every
// observed count <= count_cap.
struct CorSensitivitySearch {
  double max_delta = 0.0;
  std::vector<std::array<int64_t, 2>> at_table;
  int added_row = 0;
  int added_label = 0;
};
CorSensitivitySearch search_cor_sensitivity(int m_cap, int64_t count_cap);

// Chi-square change of the adversarial table family (one concentrated
// column plus a single off-column record) when the empty corner gains a
// record; equals (N^2+1)/(2N) for the family with N records.
double chi_square_adversarial_delta(int64_t n_records);

// Numeric maximization of the quality-sensitivity integrand over
// x in [1, 200]: coarse scan to bracket the peak (the integrand flattens
// to machine-1 at large x, which defeats plain golden-section), then
// golden-section inside the bracket.
struct MaxSearchResult {
  double arg = 0.0;
  double value = 0.0;
};
MaxSearchResult numeric_max_quality_bound(double epsilon);

// One certification line: a closed-form value against its oracle.
struct OracleReport {
  std::string name;
  double closed_form = 0.0;
  double oracle = 0.0;
  double tolerance = 0.0;
  std::string scope;  // trial counts / search space
  bool pass = false;
  // Advisory rows restate claimed properties; their failure marks the
  // claim, not the implementation.
  bool advisory = false;
};

// Runs the full certification suite. Deterministic in `seed`.
std::vector<OracleReport> run_certification(uint64_t seed);

// True when every non-advisory row passes.
bool certification_passed(const std::vector<OracleReport>& reports);

// Fixed-width text rendering of the report table.
std::string format_certification(const std::vector<OracleReport>& reports);

}  // namespace privhist

#endif  // PRIVHIST_ORACLES_HPP_
