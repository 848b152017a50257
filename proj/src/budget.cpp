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

#include "privhist/budget.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace privhist {

BudgetAccountant::BudgetAccountant(double total) : total_(total) {
  if (!(total > 0) || !std::isfinite(total)) {
    throw std::invalid_argument("budget total must be positive and finite");
  }
}

void BudgetAccountant::charge(std::string label, int64_t num, int64_t den,
                              double epsilon) {
  if (num <= 0 || den <= 0) {
    throw std::invalid_argument("budget fraction must be positive");
  }
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("budget charge must be positive and finite");
  }
  // new fraction sum = frac_num_/frac_den_ + num/den, in lowest terms.
  const int64_t g = std::gcd(frac_den_, den);
  const int64_t lcm = frac_den_ / g * den;
  const int64_t sum_num = frac_num_ * (lcm / frac_den_) + num * (lcm / den);
  if (sum_num > lcm) {
    throw std::invalid_argument("budget charge exceeds the configured total");
  }
  if (spent_ + epsilon > total_ * (1.0 + 1e-12)) {
    throw std::invalid_argument("budget charge exceeds the configured total");
  }
  const int64_t r = std::gcd(sum_num, lcm);
  frac_num_ = sum_num / r;
  frac_den_ = lcm / r;
  spent_ += epsilon;
  entries_.push_back(Entry{std::move(label), num, den, epsilon});
}

bool BudgetAccountant::exhausted_exactly() const {
  return frac_num_ == 1 && frac_den_ == 1;
}

}  // namespace privhist
