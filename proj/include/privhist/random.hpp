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

#ifndef PRIVHIST_RANDOM_HPP_
#define PRIVHIST_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <string_view>

namespace privhist {

// Deterministic random source with labeled sub-streams.
//
// Every randomized step of the pipeline draws from its own sub-stream,
// derived from (master seed, label path). Identical (seed, label) pairs
// produce bit-identical sequences across runs and across thread counts, so
// published noise cannot be perturbed by scheduling or by unrelated code
// consuming randomness elsewhere.
class RandomSource {
 public:
  explicit RandomSource(uint64_t seed, std::string_view label = {});

  // Child stream keyed by this stream's identity plus `label`.
  RandomSource stream(std::string_view label) const;
  // Child stream for indexed shards/workers under a common label.
  RandomSource stream(std::string_view label, uint64_t index) const;

  uint64_t next_u64();

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform();

  // Uniform on the open interval (0, 1); safe to pass to log().
  double uniform_open();

  // Unbiased uniform integer on [0, n). Requires n > 0.
  uint64_t uniform_int(uint64_t n);

  // Laplace(0, scale) as the scaled log-ratio of two open uniforms.
  // Consumes exactly two draws. Requires scale > 0.
  double laplace(double scale);

  // Stream identity; children derive from it.
  uint64_t key() const { return key_; }

 private:
  struct RawKey {};
  RandomSource(RawKey, uint64_t mixed_key);

  uint64_t key_;
  std::mt19937_64 engine_;
};

}  // namespace privhist

#endif  // PRIVHIST_RANDOM_HPP_
