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

#include "privhist/taxonomy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "privhist/errors.hpp"

namespace privhist {
namespace {

using ordered_json = nlohmann::ordered_json;

void check_keys(const ordered_json& obj,
                const std::set<std::string>& allowed,
                const std::string& where) {
  for (const auto& item : obj.items()) {
    if (allowed.find(item.key()) == allowed.end()) {
      throw ParseError(where + ": unknown key '" + item.key() + "'");
    }
  }
}

}  // namespace

const std::vector<int>& Hierarchy::level_nodes(int level) const {
  if (level < 1 || level > height()) {
    throw std::invalid_argument("hierarchy '" + attribute_ +
                                "': level out of range");
  }
  return levels_[level - 1];
}

int Hierarchy::first_branching() const {
  if (height() < 2) {
    throw std::invalid_argument("hierarchy '" + attribute_ +
                                "': no refinement below the root");
  }
  return static_cast<int>(nodes_[0].children.size());
}

const std::vector<uint32_t>& Hierarchy::ancestor_at_level(int level) const {
  if (level < 1 || level > height()) {
    throw std::invalid_argument("hierarchy '" + attribute_ +
                                "': level out of range");
  }
  return leaf_ancestor_[level - 1];
}

uint32_t Hierarchy::leaf_ordinal(const std::string& value) const {
  if (numeric_) {
    throw std::invalid_argument("hierarchy '" + attribute_ +
                                "': numeric attribute given string value");
  }
  auto it = std::lower_bound(
      value_to_leaf_.begin(), value_to_leaf_.end(), value,
      [](const auto& entry, const std::string& v) { return entry.first < v; });
  if (it == value_to_leaf_.end() || it->first != value) {
    throw std::domain_error("hierarchy '" + attribute_ + "': value '" + value +
                            "' is outside the domain");
  }
  return it->second;
}

uint32_t Hierarchy::leaf_ordinal(double value) const {
  if (!numeric_) {
    throw std::invalid_argument("hierarchy '" + attribute_ +
                                "': categorical attribute given number");
  }
  if (std::isnan(value) || value < leaf_edges_.front() ||
      value > leaf_edges_.back()) {
    std::ostringstream msg;
    msg << "hierarchy '" << attribute_ << "': value " << value
        << " is outside the domain";
    throw std::domain_error(msg.str());
  }
  if (value == leaf_edges_.back()) {
    // The domain maximum belongs to the rightmost bin.
    return static_cast<uint32_t>(leaf_count() - 1);
  }
  auto it = std::upper_bound(leaf_edges_.begin(), leaf_edges_.end(), value);
  return static_cast<uint32_t>(it - leaf_edges_.begin() - 1);
}

uint32_t Hierarchy::node_ordinal_for(const std::string& value,
                                     int level) const {
  return ancestor_at_level(level)[leaf_ordinal(value)];
}

uint32_t Hierarchy::node_ordinal_for(double value, int level) const {
  return ancestor_at_level(level)[leaf_ordinal(value)];
}

void Hierarchy::validate_and_index() {
  const std::string where = "hierarchy '" + attribute_ + "'";

  // Group nodes by depth, preserving document (preorder) order.
  int max_depth = 0;
  for (const Node& n : nodes_) {
    max_depth = std::max(max_depth, n.depth);
  }
  levels_.assign(max_depth, {});
  for (size_t id = 0; id < nodes_.size(); ++id) {
    levels_[nodes_[id].depth - 1].push_back(static_cast<int>(id));
  }
  for (size_t id = 0; id < nodes_.size(); ++id) {
    Node& n = nodes_[id];
    auto& level = levels_[n.depth - 1];
    n.level_ordinal = static_cast<uint32_t>(
        std::find(level.begin(), level.end(), static_cast<int>(id)) -
        level.begin());
  }

  // Uniform leaf depth: every childless node must sit at the deepest level.
  for (const Node& n : nodes_) {
    if (n.children.empty() && n.depth != max_depth) {
      throw ParseError(where + ": ragged hierarchy (leaf '" + n.label +
                       "' at depth " + std::to_string(n.depth) +
                       ", leaf level is " + std::to_string(max_depth) + ")");
    }
  }

  // Sibling labels must be unique; children must partition the parent.
  for (const Node& n : nodes_) {
    if (n.children.empty()) {
      continue;
    }
    std::set<std::string> sibling_labels;
    for (int c : n.children) {
      if (!sibling_labels.insert(nodes_[c].label).second) {
        throw ParseError(where + ": duplicate sibling label '" +
                         nodes_[c].label + "' under '" + n.label + "'");
      }
    }
    if (numeric_) {
      double cursor = n.lo;
      for (int c : n.children) {
        if (nodes_[c].lo != cursor) {
          throw ParseError(where + ": children of '" + n.label +
                           "' do not tile the parent interval");
        }
        cursor = nodes_[c].hi;
      }
      if (cursor != n.hi) {
        throw ParseError(where + ": children of '" + n.label +
                         "' do not cover the parent interval");
      }
    } else {
      std::vector<std::string> merged;
      for (int c : n.children) {
        merged.insert(merged.end(), nodes_[c].values.begin(),
                      nodes_[c].values.end());
      }
      std::vector<std::string> parent_sorted = n.values;
      std::sort(merged.begin(), merged.end());
      std::sort(parent_sorted.begin(), parent_sorted.end());
      if (std::adjacent_find(merged.begin(), merged.end()) != merged.end()) {
        throw ParseError(where + ": children of '" + n.label +
                         "' overlap");
      }
      if (merged != parent_sorted) {
        throw ParseError(where + ": children of '" + n.label +
                         "' do not partition the parent value set");
      }
    }
  }

  // Leaf lookup structures.
  const auto& leaves = levels_.back();
  if (numeric_) {
    leaf_edges_.clear();
    leaf_edges_.push_back(nodes_[leaves.front()].lo);
    for (int id : leaves) {
      leaf_edges_.push_back(nodes_[id].hi);
    }
    for (size_t i = 1; i < leaf_edges_.size(); ++i) {
      if (!(leaf_edges_[i - 1] < leaf_edges_[i])) {
        throw ParseError(where + ": leaf bins are not ascending");
      }
    }
  } else {
    value_to_leaf_.clear();
    for (size_t j = 0; j < leaves.size(); ++j) {
      for (const std::string& v : nodes_[leaves[j]].values) {
        value_to_leaf_.emplace_back(v, static_cast<uint32_t>(j));
      }
    }
    std::sort(value_to_leaf_.begin(), value_to_leaf_.end());
  }

  // Ancestor-at-level tables, indexed by leaf ordinal.
  leaf_ancestor_.assign(levels_.size(), {});
  for (int level = 1; level <= height(); ++level) {
    auto& table = leaf_ancestor_[level - 1];
    table.resize(leaves.size());
    for (size_t j = 0; j < leaves.size(); ++j) {
      int id = leaves[j];
      while (nodes_[id].depth > level) {
        id = nodes_[id].parent;
      }
      table[j] = nodes_[id].level_ordinal;
    }
  }
}

std::vector<Hierarchy> parse_hierarchies(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("hierarchy spec: invalid JSON: ") + e.what());
  }
  if (!doc.is_array() || doc.empty()) {
    throw ParseError(
        "hierarchy spec: expected a non-empty array of attribute documents");
  }

  std::vector<Hierarchy> out;
  std::set<std::string> seen_attributes;
  for (const auto& entry : doc) {
    if (!entry.is_object()) {
      throw ParseError("hierarchy spec: attribute document must be an object");
    }
    check_keys(entry, {"attribute", "root"}, "hierarchy spec");
    if (!entry.contains("attribute") || !entry["attribute"].is_string() ||
        entry["attribute"].get<std::string>().empty()) {
      throw ParseError("hierarchy spec: missing or empty 'attribute'");
    }
    if (!entry.contains("root")) {
      throw ParseError("hierarchy spec: missing 'root'");
    }

    Hierarchy h;
    h.attribute_ = entry["attribute"].get<std::string>();
    if (!seen_attributes.insert(h.attribute_).second) {
      throw ParseError("hierarchy spec: duplicate attribute '" +
                       h.attribute_ + "'");
    }
    const std::string where = "hierarchy '" + h.attribute_ + "'";

    // Recursive node reader; fills the arena in preorder.
    bool kind_known = false;
    const std::function<void(const ordered_json&, int, int)> read_node =
        [&](const ordered_json& jn, int parent, int depth) {
          if (!jn.is_object()) {
            throw ParseError(where + ": node must be an object");
          }
          check_keys(jn, {"label", "values", "range", "children"}, where);
          if (!jn.contains("label") || !jn["label"].is_string() ||
              jn["label"].get<std::string>().empty()) {
            throw ParseError(where + ": node missing a non-empty 'label'");
          }
          const bool has_values = jn.contains("values");
          const bool has_range = jn.contains("range");
          if (has_values == has_range) {
            throw ParseError(where + ": node '" +
                             jn["label"].get<std::string>() +
                             "' must have exactly one of 'values'/'range'");
          }
          if (!kind_known) {
            h.numeric_ = has_range;
            kind_known = true;
          } else if (h.numeric_ != has_range) {
            throw ParseError(where + ": mixed 'values'/'range' node kinds");
          }

          Hierarchy::Node node;
          node.label = jn["label"].get<std::string>();
          node.parent = parent;
          node.depth = depth;
          if (has_range) {
            const auto& r = jn["range"];
            if (!r.is_array() || r.size() != 2 || !r[0].is_number() ||
                !r[1].is_number()) {
              throw ParseError(where + ": node '" + node.label +
                               "': 'range' must be [lo, hi]");
            }
            node.lo = r[0].get<double>();
            node.hi = r[1].get<double>();
            if (!(node.lo < node.hi)) {
              throw ParseError(where + ": node '" + node.label +
                               "': range requires lo < hi");
            }
          } else {
            const auto& vs = jn["values"];
            if (!vs.is_array() || vs.empty()) {
              throw ParseError(where + ": node '" + node.label +
                               "': 'values' must be a non-empty array");
            }
            std::set<std::string> uniq;
            for (const auto& v : vs) {
              if (!v.is_string()) {
                throw ParseError(where + ": node '" + node.label +
                                 "': values must be strings");
              }
              const std::string s = v.get<std::string>();
              if (!uniq.insert(s).second) {
                throw ParseError(where + ": node '" + node.label +
                                 "': duplicate value '" + s + "'");
              }
              node.values.push_back(s);
            }
          }

          const int id = static_cast<int>(h.nodes_.size());
          h.nodes_.push_back(std::move(node));
          if (parent >= 0) {
            h.nodes_[parent].children.push_back(id);
          }
          if (jn.contains("children")) {
            const auto& cs = jn["children"];
            if (!cs.is_array() || cs.empty()) {
              throw ParseError(where + ": 'children' must be a non-empty "
                               "array when present");
            }
            if (depth >= 64) {
              throw ParseError(where + ": hierarchy is too deep");
            }
            for (const auto& c : cs) {
              read_node(c, id, depth + 1);
            }
          }
        };
    read_node(entry["root"], -1, 1);
    h.validate_and_index();
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<Hierarchy> load_hierarchies(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open hierarchy spec file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_hierarchies(buf.str());
}

namespace {

ordered_json node_to_json(const Hierarchy& h, int id) {
  const Hierarchy::Node& n = h.node(id);
  ordered_json jn;
  jn["label"] = n.label;
  if (h.numeric()) {
    jn["range"] = {n.lo, n.hi};
  } else {
    jn["values"] = n.values;
  }
  if (!n.children.empty()) {
    ordered_json cs = ordered_json::array();
    for (int c : n.children) {
      cs.push_back(node_to_json(h, c));
    }
    jn["children"] = std::move(cs);
  }
  return jn;
}

}  // namespace

std::string serialize_hierarchies(const std::vector<Hierarchy>& hierarchies) {
  ordered_json doc = ordered_json::array();
  for (const Hierarchy& h : hierarchies) {
    ordered_json entry;
    entry["attribute"] = h.attribute();
    entry["root"] = node_to_json(h, 0);
    doc.push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

int median_first_branching(const std::vector<Hierarchy>& hierarchies) {
  std::vector<const Hierarchy*> pointers;
  pointers.reserve(hierarchies.size());
  for (const Hierarchy& h : hierarchies) {
    pointers.push_back(&h);
  }
  return median_first_branching(pointers);
}

int median_first_branching(const std::vector<const Hierarchy*>& hierarchies) {
  std::vector<int> branchings;
  for (const Hierarchy* h : hierarchies) {
    if (h->height() >= 2) {
      branchings.push_back(h->first_branching());
    }
  }
  if (branchings.empty()) {
    throw std::invalid_argument(
        "median_first_branching: no hierarchy admits a refinement");
  }
  std::sort(branchings.begin(), branchings.end());
  // Lower median: for even counts, take the smaller of the two middles.
  return branchings[(branchings.size() - 1) / 2];
}

}  // namespace privhist
