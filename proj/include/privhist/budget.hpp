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

#ifndef PRIVHIST_BUDGET_HPP_
#define PRIVHIST_BUDGET_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace privhist {

// Privacy-budget ledger for one run under sequential composition.
//
// Every charge is an exact rational fraction of the total, carried alongside
// the floating-point epsilon actually handed to the mechanism. The rational
// view makes "the ledger sums to the configured total" an exact integer
// statement rather than a floating-point approximation.
class BudgetAccountant {
 public:
  struct Entry {
    std::string label;
    // Exact fraction of the total this entry consumes.
    int64_t num = 0;
    int64_t den = 1;
    // Floating-point epsilon used by the mechanism for this step.
    double epsilon = 0.0;
  };

  explicit BudgetAccountant(double total);

  // Records a charge of `epsilon`, declared as the exact fraction num/den of
  // the total. Throws std::invalid_argument if the fraction is malformed,
  // if the declared fraction would exceed 1, or if the floating-point sum
  // would exceed the total beyond 1 part in 1e12.
  void charge(std::string label, int64_t num, int64_t den, double epsilon);

  double total() const { return total_; }
  // Floating-point sum of all charges, accumulated in charge order.
  double spent() const { return spent_; }

  // True when the charged fractions sum to exactly 1 (integer arithmetic).
  bool exhausted_exactly() const;

  const std::vector<Entry>& entries() const { return entries_; }

 private:
  double total_;
  double spent_ = 0.0;
  // Running fraction sum num_/den_, kept in lowest terms.
  int64_t frac_num_ = 0;
  int64_t frac_den_ = 1;
  std::vector<Entry> entries_;
};

}  // namespace privhist

#endif  // PRIVHIST_BUDGET_HPP_
