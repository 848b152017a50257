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

#ifndef PRIVHIST_TAXONOMY_HPP_
#define PRIVHIST_TAXONOMY_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace privhist {

// Generalization hierarchy for one attribute.
//
// A hierarchy is a tree whose nodes each carry either a categorical value
// set or a numeric interval. Level 1 is the root (the whole domain), level
// `height()` is the leaf level. The children of every internal node
// partition the parent's value set, all leaves sit at the same depth, and
// the number of nodes per level is therefore non-decreasing in the level.
//
// Numeric intervals are half-open [lo, hi); the upper endpoint of the root
// domain is closed, so the rightmost bin of every level also contains the
// domain maximum.
class Hierarchy {
 public:
  struct Node {
    std::string label;
    std::vector<std::string> values;  // categorical nodes
    double lo = 0.0;                  // numeric nodes
    double hi = 0.0;
    int parent = -1;
    std::vector<int> children;
    int depth = 1;             // root = 1
    uint32_t level_ordinal = 0;  // position within its level's node order
  };

  const std::string& attribute() const { return attribute_; }
  bool numeric() const { return numeric_; }
  int height() const { return static_cast<int>(levels_.size()); }

  // Node ids at `level` (1-based), in canonical (document) order.
  const std::vector<int>& level_nodes(int level) const;
  size_t level_size(int level) const { return level_nodes(level).size(); }
  const Node& node(int id) const { return nodes_[id]; }
  size_t leaf_count() const { return levels_.back().size(); }

  // Number of root children. Requires height() >= 2.
  int first_branching() const;

  // Ordinal (within level order) of the unique level-`level` node whose
  // value set contains `value`. Throws std::domain_error when the value is
  // outside the domain, std::invalid_argument for a bad level or a value
  // kind mismatching the hierarchy kind.
  uint32_t node_ordinal_for(const std::string& value, int level) const;
  uint32_t node_ordinal_for(double value, int level) const;

  // Leaf ordinal of a value (equivalent to node_ordinal_for at leaf level).
  uint32_t leaf_ordinal(const std::string& value) const;
  uint32_t leaf_ordinal(double value) const;

  // Per-level map from leaf ordinal to the ordinal of its level-`level`
  // ancestor. Index by leaf ordinal.
  const std::vector<uint32_t>& ancestor_at_level(int level) const;

  // Construction is performed by the parser.
  friend std::vector<Hierarchy> parse_hierarchies(const std::string& text);

 private:
  void validate_and_index();

  std::string attribute_;
  bool numeric_ = false;
  std::vector<Node> nodes_;                 // nodes_[0] is the root
  std::vector<std::vector<int>> levels_;    // levels_[l-1] = node ids
  std::vector<std::vector<uint32_t>> leaf_ancestor_;  // [l-1][leaf ordinal]
  // Leaf lookup structures.
  std::vector<std::pair<std::string, uint32_t>> value_to_leaf_;  // sorted
  std::vector<double> leaf_edges_;  // numeric: leaf bin edges, size nleaves+1
};

// Parses the hierarchy spec format: a JSON array with one document per
// attribute, {"attribute": name, "root": node}, where a node is
// {"label": ..., "values": [...] | "range": [lo, hi], "children": [...]}.
// Throws ParseError on malformed input. parse -> serialize -> parse is the
// identity.
std::vector<Hierarchy> parse_hierarchies(const std::string& text);
std::vector<Hierarchy> load_hierarchies(const std::string& path);
std::string serialize_hierarchies(const std::vector<Hierarchy>& hierarchies);

// Lower median of the root branching factors of all hierarchies of height
// >= 2 (height-1 hierarchies admit no refinement and are skipped). Throws
// std::invalid_argument when no hierarchy has height >= 2.
int median_first_branching(const std::vector<Hierarchy>& hierarchies);
int median_first_branching(const std::vector<const Hierarchy*>& hierarchies);

}  // namespace privhist

#endif  // PRIVHIST_TAXONOMY_HPP_
