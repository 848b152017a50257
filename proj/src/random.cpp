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

#include "privhist/random.hpp"

#include <cmath>
#include <stdexcept>

namespace privhist {
namespace {

// SplitMix64 finalizer; mixes stream keys so related labels land far apart.
uint64_t mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// FNV-1a over the label bytes; only used for stream derivation.
uint64_t hash_label(std::string_view label) {
  uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

uint64_t derive_key(uint64_t parent, std::string_view label) {
  return mix64(parent ^ mix64(hash_label(label)));
}

}  // namespace

RandomSource::RandomSource(RawKey, uint64_t mixed_key)
    : key_(mixed_key), engine_(mix64(mixed_key)) {}

RandomSource::RandomSource(uint64_t seed, std::string_view label)
    : RandomSource(RawKey{}, derive_key(mix64(seed), label)) {}

RandomSource RandomSource::stream(std::string_view label) const {
  return RandomSource(RawKey{}, derive_key(key_, label));
}

RandomSource RandomSource::stream(std::string_view label,
                                  uint64_t index) const {
  return RandomSource(RawKey{}, mix64(derive_key(key_, label) ^ mix64(index)));
}

uint64_t RandomSource::next_u64() { return engine_(); }

double RandomSource::uniform() {
  // 53 high bits scaled to [0, 1).
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::uniform_open() {
  // (k + 1/2) * 2^-53 lies in [2^-54, 1 - 2^-54].
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

uint64_t RandomSource::uniform_int(uint64_t n) {
  if (n == 0) {
    throw std::invalid_argument("uniform_int requires n > 0");
  }
  // Rejection sampling to avoid modulo bias.
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

double RandomSource::laplace(double scale) {
  if (!(scale > 0) || !std::isfinite(scale)) {
    throw std::invalid_argument("laplace requires a positive finite scale");
  }
  // log(u1/u2) is the difference of two Exp(1) variates, i.e. Laplace(0, 1).
  const double u1 = uniform_open();
  const double u2 = uniform_open();
  return scale * std::log(u1 / u2);
}

}  // namespace privhist
