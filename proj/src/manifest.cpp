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

#include "privhist/manifest.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>
#include <openssl/evp.h>

namespace privhist {

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("sha256_hex: digest computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("sha256_file: cannot open " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return sha256_hex(buffer.str());
}

void RunManifest::add_input(const std::string& path) {
  inputs.push_back({path, sha256_file(path)});
}

void RunManifest::add_output(const std::string& path) {
  outputs.push_back({path, sha256_file(path)});
}

std::string serialize_manifest(const RunManifest& manifest) {
  nlohmann::ordered_json doc;
  doc["command"] = manifest.command;
  nlohmann::ordered_json config;
  for (const auto& [key, value] : manifest.config) {
    config[key] = value;
  }
  doc["config"] = std::move(config);
  doc["seed"] = manifest.seed;
  const auto files = [](const std::vector<RunManifest::FileRecord>& records) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& record : records) {
      nlohmann::ordered_json row;
      row["path"] = record.path;
      row["sha256"] = record.sha256;
      list.push_back(row);
    }
    return list;
  };
  doc["inputs"] = files(manifest.inputs);
  doc["outputs"] = files(manifest.outputs);
  nlohmann::ordered_json budget = nlohmann::ordered_json::array();
  for (const auto& entry : manifest.budget) {
    nlohmann::ordered_json step;
    step["step"] = entry.label;
    step["fraction"] = {entry.num, entry.den};
    step["epsilon"] = entry.epsilon;
    budget.push_back(step);
  }
  doc["budget"] = std::move(budget);
  doc["deviation_flags"] = manifest.deviation_flags;
  doc["wall_time_seconds"] = manifest.wall_time_seconds;
  return doc.dump(2) + "\n";
}

void save_manifest(const RunManifest& manifest, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("save_manifest: cannot write " + path);
  }
  out << serialize_manifest(manifest);
}

}  // namespace privhist
