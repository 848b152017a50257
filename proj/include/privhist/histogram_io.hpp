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

#ifndef PRIVHIST_HISTOGRAM_IO_HPP_
#define PRIVHIST_HISTOGRAM_IO_HPP_

#include <string>
#include <vector>

#include "privhist/grids.hpp"
#include "privhist/publisher.hpp"
#include "privhist/taxonomy.hpp"

namespace privhist {

// JSON document of a raw (exact, sparse) histogram: a header naming the
// grid's features and levels, then one row per non-empty cell in ascending
// flat order, each carrying the cell's node ordinals, node labels, and the
// positive/negative counts.
std::string serialize_histogram(const Histogram& hist);

// JSON document of a published noisy histogram. Unlike the raw format it
// carries EVERY cell of the grid plus the release metadata (total budget,
// ledger, seed, deviation flags). serialize -> parse is the identity.
std::string serialize_noisy_histogram(const NoisyHistogram& histogram);

// Parses a noisy-histogram document against the hierarchies it was built
// from (matched by attribute name; node labels are checked against the
// hierarchy). Throws ParseError on malformed or inconsistent input.
NoisyHistogram parse_noisy_histogram(
    const std::string& text, const std::vector<Hierarchy>& hierarchies);

NoisyHistogram load_noisy_histogram(
    const std::string& path, const std::vector<Hierarchy>& hierarchies);
void save_noisy_histogram(const NoisyHistogram& histogram,
                          const std::string& path);

}  // namespace privhist

#endif  // PRIVHIST_HISTOGRAM_IO_HPP_
