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

#ifndef PRIVHIST_MANIFEST_HPP_
#define PRIVHIST_MANIFEST_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "privhist/budget.hpp"

namespace privhist {

// Hex SHA-256 digests for auditability of run inputs/outputs.
std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

// Audit record written alongside every CLI run: what ran, with which
// resolved settings, over which exact input bytes, producing which exact
// output bytes, spending which budget. The wall time is the only
// non-deterministic field.
struct RunManifest {
  struct FileRecord {
    std::string path;
    std::string sha256;
  };

  std::string command;
  std::vector<std::pair<std::string, std::string>> config;  // ordered
  uint64_t seed = 0;
  std::vector<FileRecord> inputs;
  std::vector<FileRecord> outputs;
  std::vector<BudgetAccountant::Entry> budget;
  std::vector<std::string> deviation_flags;
  double wall_time_seconds = 0.0;

  void add_input(const std::string& path);
  void add_output(const std::string& path);
};

std::string serialize_manifest(const RunManifest& manifest);
void save_manifest(const RunManifest& manifest, const std::string& path);

}  // namespace privhist

#endif  // PRIVHIST_MANIFEST_HPP_
