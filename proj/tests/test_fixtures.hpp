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

// Shared in-memory fixtures for the unit and acceptance tests.

#ifndef PRIVHIST_TESTS_TEST_FIXTURES_HPP_
#define PRIVHIST_TESTS_TEST_FIXTURES_HPP_

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "privhist/grids.hpp"
#include "privhist/random.hpp"
#include "privhist/taxonomy.hpp"

namespace privhist_test {

// Hierarchies plus a dataset bound to them. The hierarchy storage is heap
// allocated so moving the fixture keeps the bound pointers valid.
struct BoundFixture {
  std::shared_ptr<std::vector<privhist::Hierarchy>> hierarchies;
  privhist::IndexedDataset data;
};

// One categorical attribute "group" with leaves {A, B} under a two-level
// hierarchy.
inline std::vector<privhist::Hierarchy> two_leaf_hierarchy() {
  return privhist::parse_hierarchies(R"([
    {"attribute": "group",
     "root": {"label": "any", "values": ["A", "B"], "children": [
       {"label": "A", "values": ["A"]},
       {"label": "B", "values": ["B"]}]}}
  ])");
}

// Binds per-cell counts onto the two-leaf hierarchy: cell A holds
// (a_pos, a_neg), cell B holds (b_pos, b_neg).
inline BoundFixture two_cell_fixture(int a_pos, int a_neg, int b_pos,
                                     int b_neg) {
  BoundFixture fx;
  fx.hierarchies = std::make_shared<std::vector<privhist::Hierarchy>>(
      two_leaf_hierarchy());
  fx.data.hierarchies = {&(*fx.hierarchies)[0]};
  fx.data.attributes = {"group"};
  fx.data.leaf.resize(1);
  auto add = [&fx](uint32_t leaf, uint8_t label, int count) {
    for (int i = 0; i < count; ++i) {
      fx.data.leaf[0].push_back(leaf);
      fx.data.labels.push_back(label);
    }
  };
  add(0, 1, a_pos);
  add(0, 0, a_neg);
  add(1, 1, b_pos);
  add(1, 0, b_neg);
  return fx;
}

// `d` categorical attributes, each a two-level hierarchy over {x, y}, with
// `records` random rows whose label correlates with attribute 0.
inline BoundFixture many_attribute_fixture(int d, int records,
                                           uint64_t seed) {
  std::string doc = "[";
  for (int a = 0; a < d; ++a) {
    if (a > 0) doc += ",";
    const std::string name = "f" + std::to_string(a);
    doc += R"({"attribute": ")" + name + R"(",
      "root": {"label": "any", "values": ["x", "y"], "children": [
        {"label": "x", "values": ["x"]},
        {"label": "y", "values": ["y"]}]}})";
  }
  doc += "]";

  BoundFixture fx;
  fx.hierarchies = std::make_shared<std::vector<privhist::Hierarchy>>(
      privhist::parse_hierarchies(doc));
  fx.data.leaf.resize(static_cast<size_t>(d));
  for (int a = 0; a < d; ++a) {
    fx.data.hierarchies.push_back(&(*fx.hierarchies)[static_cast<size_t>(a)]);
    fx.data.attributes.push_back("f" + std::to_string(a));
  }
  privhist::RandomSource rng(seed, "many-attribute-fixture");
  for (int r = 0; r < records; ++r) {
    for (int a = 0; a < d; ++a) {
      fx.data.leaf[static_cast<size_t>(a)].push_back(
          static_cast<uint32_t>(rng.uniform_int(2)));
    }
    // Label follows attribute 0 three times out of four.
    const uint32_t lead = fx.data.leaf[0].back();
    const uint8_t label = rng.uniform() < 0.75
                              ? static_cast<uint8_t>(lead)
                              : static_cast<uint8_t>(1 - lead);
    fx.data.labels.push_back(label);
  }
  return fx;
}

// JSON for one random categorical hierarchy of height 1..3 over distinct
// leaf values. Internal levels group consecutive leaves.
inline std::string random_hierarchy_json(const std::string& attribute,
                                         privhist::RandomSource& rng) {
  const int height = 1 + static_cast<int>(rng.uniform_int(3));
  const int leaves = height == 1 ? 1 + static_cast<int>(rng.uniform_int(4))
                                 : 2 + static_cast<int>(rng.uniform_int(5));
  std::vector<std::string> values;
  values.reserve(static_cast<size_t>(leaves));
  for (int i = 0; i < leaves; ++i) {
    values.push_back("v" + std::to_string(i));
  }
  auto value_list = [](const std::vector<std::string>& vs, size_t lo,
                       size_t hi) {
    std::string out = "[";
    for (size_t i = lo; i < hi; ++i) {
      if (i > lo) out += ",";
      out += "\"" + vs[i] + "\"";
    }
    return out + "]";
  };
  auto leaf_nodes = [&](size_t lo, size_t hi) {
    std::string out;
    for (size_t i = lo; i < hi; ++i) {
      if (i > lo) out += ",";
      out += R"({"label": ")" + values[i] + R"(", "values": [")" +
             values[i] + "\"]}";
    }
    return out;
  };

  std::string root = R"({"attribute": ")" + attribute +
                     R"(", "root": {"label": "any", "values": )" +
                     value_list(values, 0, values.size());
  if (height == 1) {
    return root + "}}";
  }
  if (height == 2) {
    return root + R"(, "children": [)" + leaf_nodes(0, values.size()) + "]}}";
  }
  // Height 3: split the leaves into two or three consecutive groups.
  const size_t n = values.size();
  const int group_count =
      2 + static_cast<int>(rng.uniform_int(n >= 3 ? 2 : 1));
  std::vector<size_t> cuts = {0};
  for (int g = 1; g < group_count; ++g) {
    cuts.push_back(cuts.back() + 1 +
                   rng.uniform_int(n - cuts.back() -
                                   static_cast<size_t>(group_count - g)));
  }
  cuts.push_back(n);
  std::string children;
  for (size_t g = 0; g + 1 < cuts.size(); ++g) {
    if (g > 0) children += ",";
    children += R"({"label": "g)" + std::to_string(g) + R"(", "values": )" +
                value_list(values, cuts[g], cuts[g + 1]) +
                R"(, "children": [)" + leaf_nodes(cuts[g], cuts[g + 1]) +
                "]}";
  }
  return root + R"(, "children": [)" + children + "]}}";
}

// A set of `d` random hierarchies (heights 1..3) parsed from generated JSON.
inline std::vector<privhist::Hierarchy> random_hierarchies(
    int d, privhist::RandomSource& rng) {
  std::string doc = "[";
  for (int a = 0; a < d; ++a) {
    if (a > 0) doc += ",";
    doc += random_hierarchy_json("attr" + std::to_string(a), rng);
  }
  doc += "]";
  return privhist::parse_hierarchies(doc);
}

// Brute-force reference for enumerate_grids: every level combination in
// lexicographic order whose cell count is within the threshold.
inline std::vector<privhist::GridLevels> brute_force_grids(
    const std::vector<const privhist::Hierarchy*>& hierarchies,
    uint64_t max_cells) {
  std::vector<privhist::GridLevels> out;
  privhist::GridLevels levels(hierarchies.size(), 1);
  while (true) {
    if (privhist::grid_cell_count(hierarchies, levels) <= max_cells) {
      out.push_back(levels);
    }
    size_t i = levels.size();
    while (i > 0) {
      --i;
      if (levels[i] < hierarchies[i]->height()) {
        ++levels[i];
        for (size_t j = i + 1; j < levels.size(); ++j) levels[j] = 1;
        break;
      }
      if (i == 0) return out;
    }
  }
}

inline std::vector<const privhist::Hierarchy*> pointers_of(
    const std::vector<privhist::Hierarchy>& hierarchies) {
  std::vector<const privhist::Hierarchy*> out;
  out.reserve(hierarchies.size());
  for (const privhist::Hierarchy& h : hierarchies) out.push_back(&h);
  return out;
}

}  // namespace privhist_test

#endif  // PRIVHIST_TESTS_TEST_FIXTURES_HPP_
