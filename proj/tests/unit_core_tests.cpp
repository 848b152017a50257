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

// Unit tests for the deterministic foundations: random streams, budget
// accounting, the base mechanisms, hierarchies, and dataset handling.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include "privhist/budget.hpp"
#include "privhist/dataset.hpp"
#include "privhist/errors.hpp"
#include "privhist/mechanisms.hpp"
#include "privhist/random.hpp"
#include "privhist/taxonomy.hpp"

using namespace privhist;

// ---------------------------------------------------------------------------
// RandomSource

TEST_CASE("random: identical seed and label replay identically") {
  RandomSource a(42, "alpha");
  RandomSource b(42, "alpha");
  for (int i = 0; i < 100; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
}

TEST_CASE("random: labels separate streams") {
  RandomSource root(42);
  RandomSource a = root.stream("alpha");
  RandomSource b = root.stream("beta");
  CHECK(a.key() != b.key());
  CHECK(a.next_u64() != b.next_u64());

  RandomSource i0 = root.stream("worker", 0);
  RandomSource i1 = root.stream("worker", 1);
  CHECK(i0.key() != i1.key());
}

TEST_CASE("random: child derivation is order independent and repeatable") {
  RandomSource root(7);
  const uint64_t k1 = root.stream("x").key();
  (void)root.stream("y");
  const uint64_t k2 = root.stream("x").key();
  CHECK(k1 == k2);  // deriving a child does not mutate the parent
}

TEST_CASE("random: uniform ranges") {
  RandomSource rng(3, "uniform");
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = rng.uniform_open();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("random: uniform_int covers its range") {
  RandomSource rng(4, "dice");
  std::set<uint64_t> seen;
  for (int i = 0; i < 10000; ++i) {
    const uint64_t v = rng.uniform_int(6);
    CHECK(v < 6);
    seen.insert(v);
  }
  CHECK(seen.size() == 6);
}

TEST_CASE("random: laplace consumes exactly two uniform draws") {
  RandomSource a(9, "lap");
  RandomSource b(9, "lap");
  (void)a.laplace(1.0);
  (void)b.uniform_open();
  (void)b.uniform_open();
  CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("random: laplace is symmetric in the bulk") {
  RandomSource rng(10, "lap-sym");
  int positive = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    if (rng.laplace(2.0) > 0.0) ++positive;
  }
  // 5 sigma on a fair coin at n = 100000 is about 0.008.
  CHECK(std::abs(positive / static_cast<double>(n) - 0.5) < 0.01);
}

// ---------------------------------------------------------------------------
// BudgetAccountant

TEST_CASE("budget: exact fraction bookkeeping") {
  BudgetAccountant acc(1.7);
  acc.charge("a", 3, 10, 0.51);
  acc.charge("b", 3, 10, 0.51);
  CHECK_FALSE(acc.exhausted_exactly());
  acc.charge("c", 4, 10, 0.68);
  CHECK(acc.exhausted_exactly());
  CHECK(acc.spent() == doctest::Approx(1.7).epsilon(1e-15));
  CHECK(acc.entries().size() == 3);
  CHECK(acc.entries()[2].label == "c");
  CHECK(acc.entries()[2].num == 4);
  CHECK(acc.entries()[2].den == 10);
}

TEST_CASE("budget: rejects overcommitment") {
  BudgetAccountant acc(1.0);
  acc.charge("a", 3, 7, 3.0 / 7.0);
  CHECK_THROWS_AS(acc.charge("b", 5, 7, 5.0 / 7.0), std::invalid_argument);
  CHECK_THROWS_AS(acc.charge("b", 0, 7, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(acc.charge("b", 1, -7, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(BudgetAccountant(0.0), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Mechanisms

TEST_CASE("mechanisms: budget split sums exactly to the total") {
  for (double total : {1.0, 0.05, 2.0, 1e-9, 1e9, 0.7371}) {
    const BudgetSplit with = budget_split(total, true);
    CHECK(with.fs + with.sh + with.ph == total);
    CHECK(with.fs_num == 3);
    CHECK(with.fs_den == 10);
    CHECK(with.sh_num == 3);
    CHECK(with.sh_den == 10);
    CHECK(with.ph_num == 4);
    CHECK(with.ph_den == 10);

    const BudgetSplit without = budget_split(total, false);
    CHECK(without.fs == 0.0);
    CHECK(without.sh + without.ph == total);
    CHECK(without.sh_num == 3);
    CHECK(without.sh_den == 7);
    CHECK(without.ph_num == 4);
    CHECK(without.ph_den == 7);
  }
  CHECK_THROWS_AS(budget_split(0.0, true), std::invalid_argument);
}

TEST_CASE("mechanisms: exponential mechanism basics") {
  RandomSource rng(5, "expmech");

  // A huge gap makes the better candidate a near-certain winner.
  const std::vector<double> gapped = {0.0, 10000.0};
  for (int i = 0; i < 50; ++i) {
    CHECK(exponential_select(gapped, 1.0, 1.0, false, rng) == 1);
    CHECK(exponential_select(gapped, 1.0, 1.0, true, rng) == 0);
  }

  // Equal scores split evenly.
  const std::vector<double> equal = {3.0, 3.0};
  int first = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    if (exponential_select(equal, 1.0, 1.0, false, rng) == 0) ++first;
  }
  CHECK(std::abs(first / static_cast<double>(n) - 0.5) < 0.01);

  CHECK_THROWS_AS(exponential_select({}, 1.0, 1.0, false, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(exponential_select({1.0}, -1.0, 1.0, false, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(exponential_select({1.0}, 1.0, 0.0, false, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      exponential_select({std::nan("")}, 1.0, 1.0, false, rng),
      std::invalid_argument);
}

TEST_CASE("mechanisms: exponential mechanism consumes one uniform draw") {
  RandomSource a(6, "expmech-draws");
  RandomSource b(6, "expmech-draws");
  (void)exponential_select({1.0, 2.0, 3.0}, 0.5, 1.0, false, a);
  (void)b.uniform();
  CHECK(a.next_u64() == b.next_u64());
}

// ---------------------------------------------------------------------------
// Taxonomy

namespace {

const char* kEducationDoc = R"([
  {"attribute": "education",
   "root": {"label": "any",
            "values": ["NoDiploma", "HSGrad", "SomeCollege", "Bachelors"],
            "children": [
              {"label": "Basic", "values": ["NoDiploma", "HSGrad"],
               "children": [
                 {"label": "NoDiploma", "values": ["NoDiploma"]},
                 {"label": "HSGrad", "values": ["HSGrad"]}]},
              {"label": "Higher", "values": ["SomeCollege", "Bachelors"],
               "children": [
                 {"label": "SomeCollege", "values": ["SomeCollege"]},
                 {"label": "Bachelors", "values": ["Bachelors"]}]}]}}
])";

const char* kAgeDoc = R"json([
  {"attribute": "age",
   "root": {"label": "[17,90)", "range": [17, 90], "children": [
     {"label": "[17,35)", "range": [17, 35]},
     {"label": "[35,55)", "range": [35, 55]},
     {"label": "[55,90)", "range": [55, 90]}]}}
])json";

}  // namespace

TEST_CASE("taxonomy: categorical parse and lookup") {
  const std::vector<Hierarchy> hs = parse_hierarchies(kEducationDoc);
  REQUIRE(hs.size() == 1);
  const Hierarchy& h = hs[0];
  CHECK(h.attribute() == "education");
  CHECK_FALSE(h.numeric());
  CHECK(h.height() == 3);
  CHECK(h.level_size(1) == 1);
  CHECK(h.level_size(2) == 2);
  CHECK(h.level_size(3) == 4);
  CHECK(h.leaf_count() == 4);
  CHECK(h.first_branching() == 2);

  CHECK(h.leaf_ordinal("NoDiploma") == 0);
  CHECK(h.leaf_ordinal("Bachelors") == 3);
  CHECK(h.node_ordinal_for(std::string("SomeCollege"), 2) == 1);
  CHECK(h.node_ordinal_for(std::string("HSGrad"), 1) == 0);
  CHECK_THROWS_AS(h.leaf_ordinal("PhD"), std::domain_error);
  CHECK_THROWS_AS(h.leaf_ordinal(1.5), std::invalid_argument);
  CHECK_THROWS_AS(h.node_ordinal_for(std::string("HSGrad"), 4),
                  std::invalid_argument);

  const std::vector<uint32_t>& anc = h.ancestor_at_level(2);
  REQUIRE(anc.size() == 4);
  CHECK(anc[0] == 0);
  CHECK(anc[1] == 0);
  CHECK(anc[2] == 1);
  CHECK(anc[3] == 1);
}

TEST_CASE("taxonomy: numeric bins are half open with a closed domain max") {
  const std::vector<Hierarchy> hs = parse_hierarchies(kAgeDoc);
  const Hierarchy& h = hs[0];
  CHECK(h.numeric());
  CHECK(h.height() == 2);
  CHECK(h.leaf_ordinal(17.0) == 0);
  CHECK(h.leaf_ordinal(34.999) == 0);
  CHECK(h.leaf_ordinal(35.0) == 1);
  CHECK(h.leaf_ordinal(89.999) == 2);
  CHECK(h.leaf_ordinal(90.0) == 2);  // the domain maximum stays in range
  CHECK_THROWS_AS(h.leaf_ordinal(16.999), std::domain_error);
  CHECK_THROWS_AS(h.leaf_ordinal(90.001), std::domain_error);
  CHECK_THROWS_AS(h.leaf_ordinal("35"), std::invalid_argument);
}

TEST_CASE("taxonomy: serialize then parse is the identity") {
  const std::vector<Hierarchy> hs = parse_hierarchies(kEducationDoc);
  const std::string doc = serialize_hierarchies(hs);
  const std::vector<Hierarchy> reparsed = parse_hierarchies(doc);
  CHECK(serialize_hierarchies(reparsed) == doc);
}

TEST_CASE("taxonomy: malformed documents are rejected") {
  // Ragged: one child is a leaf while its sibling has children.
  CHECK_THROWS_AS(parse_hierarchies(R"([
    {"attribute": "a",
     "root": {"label": "r", "values": ["x", "y", "z"], "children": [
       {"label": "x", "values": ["x"]},
       {"label": "yz", "values": ["y", "z"], "children": [
         {"label": "y", "values": ["y"]},
         {"label": "z", "values": ["z"]}]}]}}
  ])"),
                  ParseError);
  // Children fail to cover the parent.
  CHECK_THROWS_AS(parse_hierarchies(R"([
    {"attribute": "a",
     "root": {"label": "r", "values": ["x", "y"], "children": [
       {"label": "x", "values": ["x"]}]}}
  ])"),
                  ParseError);
  // Duplicate sibling labels.
  CHECK_THROWS_AS(parse_hierarchies(R"([
    {"attribute": "a",
     "root": {"label": "r", "values": ["x", "y"], "children": [
       {"label": "same", "values": ["x"]},
       {"label": "same", "values": ["y"]}]}}
  ])"),
                  ParseError);
  // Numeric children must partition the parent interval.
  CHECK_THROWS_AS(parse_hierarchies(R"([
    {"attribute": "a",
     "root": {"label": "r", "range": [0, 10], "children": [
       {"label": "lo", "range": [0, 4]},
       {"label": "hi", "range": [5, 10]}]}}
  ])"),
                  ParseError);
  CHECK_THROWS_AS(parse_hierarchies("not json"), ParseError);
}

TEST_CASE("taxonomy: lower median of the root branching factors") {
  RandomSource rng(11, "median");
  auto doc_with_branching = [](const std::string& name, int b) {
    std::string values = "[";
    std::string children;
    for (int i = 0; i < b; ++i) {
      if (i) {
        values += ",";
        children += ",";
      }
      const std::string v = "\"" + name + std::to_string(i) + "\"";
      values += v;
      children += R"({"label": )" + v + R"(, "values": [)" + v + "]}";
    }
    values += "]";
    return R"({"attribute": ")" + name + R"(", "root": {"label": "any",
      "values": )" + values + R"(, "children": [)" + children + "]}}";
  };

  const std::vector<Hierarchy> three = parse_hierarchies(
      "[" + doc_with_branching("a", 2) + "," + doc_with_branching("b", 3) +
      "," + doc_with_branching("c", 4) + "]");
  CHECK(median_first_branching(three) == 3);

  const std::vector<Hierarchy> two = parse_hierarchies(
      "[" + doc_with_branching("a", 2) + "," + doc_with_branching("b", 4) +
      "]");
  CHECK(median_first_branching(two) == 2);  // lower median

  // Height-1 hierarchies are skipped; all height-1 is an error.
  const std::vector<Hierarchy> flat = parse_hierarchies(R"([
    {"attribute": "a", "root": {"label": "any", "values": ["x"]}}
  ])");
  CHECK_THROWS_AS(median_first_branching(flat), std::invalid_argument);

  const std::vector<Hierarchy> mixed = parse_hierarchies(
      "[" + std::string(R"({"attribute": "flat",
        "root": {"label": "any", "values": ["x"]}})") + "," +
      doc_with_branching("b", 5) + "]");
  CHECK(median_first_branching(mixed) == 5);
}

// ---------------------------------------------------------------------------
// Dataset

namespace {

const char* kSchemaDoc = R"({
  "label": {"column": "income", "positive": "yes", "negative": "no"},
  "columns": [
    {"name": "age", "kind": "numeric"},
    {"name": "city", "kind": "categorical"}
  ]
})";

}  // namespace

TEST_CASE("dataset: schema parsing") {
  const Schema s = parse_schema(kSchemaDoc);
  CHECK(s.label_column == "income");
  CHECK(s.positive_label == "yes");
  CHECK(s.negative_label == "no");
  REQUIRE(s.columns.size() == 2);
  CHECK(s.columns[0].name == "age");
  CHECK(s.columns[0].numeric);
  CHECK_FALSE(s.columns[1].numeric);
  CHECK(s.column_index("city") == 1);
  CHECK(s.column_index("nope") == -1);
  CHECK(s.missing_tokens == std::vector<std::string>{"", "?"});

  CHECK_THROWS_AS(parse_schema("{}"), ParseError);
  CHECK_THROWS_AS(parse_schema(R"({"label": {}, "columns": []})"),
                  ParseError);
  CHECK_THROWS_AS(parse_schema("nonsense"), ParseError);
}

TEST_CASE("dataset: CSV loading with quoting, reordering, and drops") {
  const Schema s = parse_schema(kSchemaDoc);
  // Header order differs from the schema order; quoted fields carry commas
  // and escaped quotes.
  const std::string csv =
      "city,income,age\n"
      "\"San Jose, CA\",yes,31\n"
      "\"He said \"\"hi\"\"\",no,40\n"
      "?,yes,22\n"
      "Austin,no,not-a-number\n"
      "Lyon,no,55\n";
  LoadReport report;
  const Dataset d = parse_csv(csv, s, &report);
  CHECK(report.rows_read == 5);
  CHECK(report.rows_kept == 3);
  CHECK(report.dropped_missing == 1);
  CHECK(report.dropped_bad_numeric == 1);
  REQUIRE(d.size() == 3);
  CHECK(d.numeric_column(0) == std::vector<double>{31.0, 40.0, 55.0});
  CHECK(d.string_column(1) ==
        std::vector<std::string>{"San Jose, CA", "He said \"hi\"", "Lyon"});
  CHECK(d.labels == std::vector<uint8_t>{1, 0, 0});

  // Unknown label value.
  CHECK_THROWS_AS(parse_csv("city,income,age\nLyon,maybe,30\n", s),
                  ParseError);
  // Header missing a declared column.
  CHECK_THROWS_AS(parse_csv("city,income\nLyon,no\n", s), ParseError);
  // Header with an undeclared extra column.
  CHECK_THROWS_AS(
      parse_csv("city,income,age,extra\nLyon,no,30,1\n", s), ParseError);
}

TEST_CASE("dataset: serialize then parse round trips") {
  const Schema s = parse_schema(kSchemaDoc);
  const std::string csv =
      "age,city,income\n"
      "31.5,\"a,b\",yes\n"
      "1e-09,plain,no\n";
  const Dataset d = parse_csv(csv, s);
  const std::string out = serialize_csv(d);
  const Dataset d2 = parse_csv(out, s);
  CHECK(d2.numeric_column(0) == d.numeric_column(0));
  CHECK(d2.string_column(1) == d.string_column(1));
  CHECK(d2.labels == d.labels);
  CHECK(serialize_csv(d2) == out);
}

TEST_CASE("dataset: subset keeps order") {
  const Schema s = parse_schema(kSchemaDoc);
  const Dataset d = parse_csv(
      "age,city,income\n1,a,yes\n2,b,no\n3,c,yes\n4,d,no\n", s);
  const Dataset sub = d.subset({3, 0});
  REQUIRE(sub.size() == 2);
  CHECK(sub.numeric_column(0) == std::vector<double>{4.0, 1.0});
  CHECK(sub.string_column(1) == std::vector<std::string>{"d", "a"});
  CHECK(sub.labels == std::vector<uint8_t>{0, 1});
}

TEST_CASE("dataset: stratified folds balance both classes") {
  const Schema s = parse_schema(kSchemaDoc);
  std::string csv = "age,city,income\n";
  for (int i = 0; i < 100; ++i) {
    csv += std::to_string(i) + ",c," + (i < 30 ? "yes" : "no") + "\n";
  }
  const Dataset d = parse_csv(csv, s);
  RandomSource rng(13, "folds");
  const std::vector<std::vector<uint32_t>> folds =
      stratified_kfold(d, 10, rng);
  REQUIRE(folds.size() == 10);
  std::set<uint32_t> all;
  for (const auto& fold : folds) {
    CHECK(fold.size() == 10);
    int pos = 0;
    for (uint32_t row : fold) {
      CHECK(std::is_sorted(fold.begin(), fold.end()));
      all.insert(row);
      if (d.labels[row] == 1) ++pos;
    }
    CHECK(pos == 3);  // 30% positive, perfectly divisible
  }
  CHECK(all.size() == 100);  // a partition: disjoint and complete

  CHECK_THROWS_AS(stratified_kfold(d, 1, rng), std::invalid_argument);
  CHECK_THROWS_AS(stratified_kfold(d, 101, rng), std::invalid_argument);
}

TEST_CASE("dataset: majority baseline error") {
  // Train majority is negative (3 no vs 2 yes).
  const std::vector<uint8_t> train = {0, 0, 0, 1, 1};
  const std::vector<uint8_t> test = {1, 1, 0, 0};
  CHECK(majority_error(train, test) == doctest::Approx(0.5));
  // Tie predicts positive.
  const std::vector<uint8_t> tied = {0, 1};
  CHECK(majority_error(tied, {1, 1, 1, 0}) == doctest::Approx(0.25));
  // Constant-positive classifier on an all-negative test set.
  CHECK(majority_error({1, 1}, {0, 0, 0}) == doctest::Approx(1.0));
}
