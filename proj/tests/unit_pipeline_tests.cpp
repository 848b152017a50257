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

// Unit tests for candidate grids, the quality function, and feature
// selection. Expected constants were computed independently (closed forms
// evaluated in a separate environment) before being frozen here.

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include "privhist/dataset.hpp"
#include "privhist/errors.hpp"
#include "privhist/features.hpp"
#include "privhist/grids.hpp"
#include "privhist/quality.hpp"
#include "privhist/random.hpp"
#include "privhist/taxonomy.hpp"

#include "test_fixtures.hpp"

using namespace privhist;
using namespace privhist_test;

// ---------------------------------------------------------------------------
// Grids

TEST_CASE("grids: binding validates kinds and drops out-of-domain rows") {
  const Schema schema = parse_schema(R"({
    "label": {"column": "y", "positive": "1", "negative": "0"},
    "columns": [{"name": "group", "kind": "categorical"}]
  })");
  const Dataset d =
      parse_csv("group,y\nA,1\nB,0\nC,1\nA,0\n", schema);
  const std::vector<Hierarchy> hs = two_leaf_hierarchy();

  const IndexedDataset bound = bind_dataset(d, hs);
  CHECK(bound.size() == 3);  // the C row is outside the domain
  CHECK(bound.dropped_out_of_domain == 1);
  CHECK(bound.attributes == std::vector<std::string>{"group"});
  CHECK(bound.leaf[0] == std::vector<uint32_t>{0, 1, 0});
  CHECK(bound.labels == std::vector<uint8_t>{1, 0, 0});

  // A hierarchy whose attribute is not a schema column is rejected.
  const std::vector<Hierarchy> wrong = parse_hierarchies(R"([
    {"attribute": "nope", "root": {"label": "any", "values": ["A"]}}
  ])");
  CHECK_THROWS_AS(bind_dataset(d, wrong), ParseError);

  // Kind mismatch: numeric hierarchy against a categorical column.
  const std::vector<Hierarchy> numeric = parse_hierarchies(R"([
    {"attribute": "group", "root": {"label": "r", "range": [0, 1]}}
  ])");
  CHECK_THROWS_AS(bind_dataset(d, numeric), ParseError);
}

TEST_CASE("grids: projection and row subsets") {
  const BoundFixture fx = many_attribute_fixture(3, 40, 99);
  const IndexedDataset proj = fx.data.project({2, 0});
  CHECK(proj.attributes == std::vector<std::string>{"f2", "f0"});
  CHECK(proj.leaf[0] == fx.data.leaf[2]);
  CHECK(proj.leaf[1] == fx.data.leaf[0]);
  CHECK(proj.labels == fx.data.labels);

  const IndexedDataset rows = fx.data.subset({5, 1});
  CHECK(rows.size() == 2);
  CHECK(rows.leaf[1][0] == fx.data.leaf[1][5]);
  CHECK(rows.labels[1] == fx.data.labels[1]);
}

TEST_CASE("grids: cell counts multiply and saturate") {
  RandomSource rng(21, "cells");
  const std::vector<Hierarchy> hs = parse_hierarchies(
      "[" + random_hierarchy_json("a", rng) + "]");
  const std::vector<const Hierarchy*> ptrs = pointers_of(hs);
  for (int level = 1; level <= hs[0].height(); ++level) {
    CHECK(grid_cell_count(ptrs, {level}) == hs[0].level_size(level));
  }

  // Ten attributes with 100 leaves each overflow uint64 and saturate.
  std::string doc = "[";
  for (int a = 0; a < 10; ++a) {
    if (a) doc += ",";
    std::string values, children;
    for (int v = 0; v < 100; ++v) {
      const std::string name = "\"v" + std::to_string(v) + "\"";
      if (v) {
        values += ",";
        children += ",";
      }
      values += name;
      children += R"({"label": )" + name + R"(, "values": [)" + name + "]}";
    }
    doc += R"({"attribute": "w)" + std::to_string(a) +
           R"(", "root": {"label": "any", "values": [)" + values +
           R"(], "children": [)" + children + "]}}";
  }
  doc += "]";
  const std::vector<Hierarchy> wide = parse_hierarchies(doc);
  GridLevels leaf_levels(10, 2);
  CHECK(grid_cell_count(pointers_of(wide), leaf_levels) == UINT64_MAX);
}

TEST_CASE("grids: full enumeration size is the product of heights") {
  // Heights (3, 2, 2) admit exactly 3 * 2 * 2 = 12 grids.
  const std::vector<Hierarchy> hs = parse_hierarchies(R"([
    {"attribute": "a", "root": {"label": "any", "values": ["p","q","r","s"],
      "children": [
        {"label": "pq", "values": ["p","q"], "children": [
          {"label": "p", "values": ["p"]}, {"label": "q", "values": ["q"]}]},
        {"label": "rs", "values": ["r","s"], "children": [
          {"label": "r", "values": ["r"]}, {"label": "s", "values": ["s"]}]}]}},
    {"attribute": "b", "root": {"label": "any", "values": ["u","v"],
      "children": [
        {"label": "u", "values": ["u"]}, {"label": "v", "values": ["v"]}]}},
    {"attribute": "c", "root": {"label": "any", "values": ["m","n"],
      "children": [
        {"label": "m", "values": ["m"]}, {"label": "n", "values": ["n"]}]}}
  ])");
  const CandidatePool pool =
      enumerate_grids(pointers_of(hs), UINT64_MAX, 0);
  CHECK(pool.grids.size() == 12);
  CHECK_FALSE(pool.truncated);
}

TEST_CASE("grids: thresholded enumeration matches brute force") {
  RandomSource rng(606, "enum-fixtures");
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + static_cast<int>(rng.uniform_int(4));
    const std::vector<Hierarchy> hs = random_hierarchies(d, rng);
    const std::vector<const Hierarchy*> ptrs = pointers_of(hs);
    const uint64_t max_cells = 1 + rng.uniform_int(50);
    const CandidatePool pool = enumerate_grids(ptrs, max_cells, 0);
    CHECK_FALSE(pool.truncated);
    CHECK(pool.grids == brute_force_grids(ptrs, max_cells));
  }
}

TEST_CASE("grids: enumeration caps and reports truncation") {
  const BoundFixture fx = many_attribute_fixture(4, 10, 5);
  const CandidatePool pool =
      enumerate_grids(fx.data.hierarchies, UINT64_MAX, 5);
  CHECK(pool.grids.size() == 5);
  CHECK(pool.truncated);
  CHECK_THROWS_AS(enumerate_grids(fx.data.hierarchies, 0, 0),
                  std::invalid_argument);
}

TEST_CASE("grids: histograms count every record at the right node") {
  const BoundFixture fx = two_cell_fixture(4, 9, 2, 13);
  const Histogram leaf_hist = build_histogram(fx.data, {2});
  REQUIRE(leaf_hist.cells.size() == 2);
  CHECK(leaf_hist.cells.at({0}) == std::array<int64_t, 2>{9, 4});
  CHECK(leaf_hist.cells.at({1}) == std::array<int64_t, 2>{13, 2});
  CHECK(leaf_hist.total_records() == 28);
  CHECK(leaf_hist.cell_count() == 2);

  // The root level merges both cells.
  const Histogram root_hist = build_histogram(fx.data, {1});
  REQUIRE(root_hist.cells.size() == 1);
  CHECK(root_hist.cells.at({0}) == std::array<int64_t, 2>{22, 6});
}

TEST_CASE("grids: threaded histogram equals sequential") {
  const BoundFixture fx = many_attribute_fixture(4, 6000, 31);
  const GridLevels levels = {2, 1, 2, 2};
  const Histogram seq = build_histogram(fx.data, levels, 1);
  const Histogram par = build_histogram(fx.data, levels, 4);
  CHECK(seq.cells == par.cells);
  uint64_t mass = 0;
  for (const auto& [key, counts] : seq.cells) {
    mass += static_cast<uint64_t>(counts[0] + counts[1]);
  }
  CHECK(mass == fx.data.size());
}

// ---------------------------------------------------------------------------
// Quality

TEST_CASE("quality: difference CDF closed form") {
  // F(0) = 1/2 exactly, for every epsilon.
  CHECK(laplace_diff_cdf(0.0, 0.1) == 0.5);
  CHECK(laplace_diff_cdf(0.0, 1.0) == 0.5);
  // Frozen: F(10) at eps 0.1 equals 1 - 0.75 e^{-1}.
  CHECK(laplace_diff_cdf(10.0, 0.1) ==
        doctest::Approx(0.7240904191214182).epsilon(1e-12));
  // Symmetry F(-y) = 1 - F(y).
  CHECK(laplace_diff_cdf(-10.0, 0.1) ==
        doctest::Approx(1.0 - 0.7240904191214182).epsilon(1e-12));
  // Monotone nondecreasing, with the right limits.
  double prev = 0.0;
  for (double y = -80.0; y <= 80.0; y += 0.25) {
    const double f = laplace_diff_cdf(y, 0.3);
    CHECK(f >= prev);
    prev = f;
  }
  CHECK(laplace_diff_cdf(-1e9, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(laplace_diff_cdf(1e9, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(laplace_diff_cdf(0.0, 0.0), std::invalid_argument);
}

TEST_CASE("quality: majority survival probability") {
  CHECK(prob_majority_preserved(0.0, 0.7) == 0.5);
  CHECK(prob_majority_preserved(5.0, 0.1) ==
        doctest::Approx(0.6209183376796041).epsilon(1e-12));
  CHECK(prob_majority_preserved(11.0, 0.1) ==
        doctest::Approx(0.7420249101339884).epsilon(1e-12));
  CHECK_THROWS_AS(prob_majority_preserved(-1.0, 0.1),
                  std::invalid_argument);
}

TEST_CASE("quality: per-cell expected error") {
  CHECK(cell_expected_error(4, 9, 0.1) ==
        doctest::Approx(5.8954083116019796).epsilon(1e-12));
  CHECK(cell_expected_error(2, 13, 0.1) ==
        doctest::Approx(4.837725988526127).epsilon(1e-12));
  CHECK(cell_expected_error(4, 9, 1.0) ==
        doctest::Approx(4.058957036241998).epsilon(1e-12));
  // Symmetric in the counts; empty cells cost nothing; balanced cells
  // cost exactly their minority count.
  CHECK(cell_expected_error(9, 4, 0.1) == cell_expected_error(4, 9, 0.1));
  CHECK(cell_expected_error(0, 0, 0.5) == 0.0);
  CHECK(cell_expected_error(3, 3, 0.9) == 3.0);
  // Bounded between the noise-free floor and the worst case.
  for (int pos = 0; pos <= 6; ++pos) {
    for (int neg = 0; neg <= 6; ++neg) {
      const double e = cell_expected_error(pos, neg, 0.4);
      CHECK(e >= std::min(pos, neg) - 1e-12);
      CHECK(e <= std::max(pos, neg) + 1e-12);
    }
  }
}

TEST_CASE("quality: grid quality sums the cells") {
  const BoundFixture fx = two_cell_fixture(4, 9, 2, 13);
  const Histogram hist = build_histogram(fx.data, {2});
  CHECK(grid_quality(hist, 0.1) ==
        doctest::Approx(10.733134300128107).epsilon(1e-12));
  // Swapping every label leaves the quality unchanged (min/max symmetry).
  const BoundFixture swapped = two_cell_fixture(9, 4, 13, 2);
  const Histogram swapped_hist = build_histogram(swapped.data, {2});
  CHECK(grid_quality(swapped_hist, 0.1) == grid_quality(hist, 0.1));
  // Quality never undercuts the exact misclassification floor.
  CHECK(grid_quality(hist, 2.5) >= 4.0 + 2.0 - 1e-12);
}

TEST_CASE("quality: sensitivity bound closed forms") {
  // Frozen argmax/bound pairs for eps in {0.1, 0.5, 1.0}.
  CHECK(quality_sensitivity_argmax(0.1) ==
        doctest::Approx(27.826435430).epsilon(1e-8));
  CHECK(quality_sensitivity_argmax(0.5) ==
        doctest::Approx(5.993696001).epsilon(1e-8));
  CHECK(quality_sensitivity_argmax(1.0) ==
        doctest::Approx(3.290974540).epsilon(1e-8));
  CHECK(quality_sensitivity_bound(0.1) ==
        doctest::Approx(1.088885205).epsilon(1e-8));
  CHECK(quality_sensitivity_bound(0.5) ==
        doctest::Approx(1.088325382).epsilon(1e-8));
  CHECK(quality_sensitivity_bound(1.0) ==
        doctest::Approx(1.086620558).epsilon(1e-8));
  // The bound is the integrand at the stationary point.
  for (double eps : {0.1, 0.5, 1.0, 2.0}) {
    CHECK(quality_sensitivity_bound(eps) ==
          doctest::Approx(quality_bound_at(quality_sensitivity_argmax(eps),
                                           eps))
              .epsilon(1e-12));
  }
  CHECK_THROWS_AS(quality_bound_at(0.5, 1.0), std::invalid_argument);
}

TEST_CASE("quality: pool scores equal the sparse recomputation") {
  // score_pool runs a dense accumulation; grid_quality walks the sparse
  // map. Bitwise agreement across every candidate checks both layouts.
  const BoundFixture fx = many_attribute_fixture(4, 500, 77);
  const CandidatePool pool =
      enumerate_grids(fx.data.hierarchies, 16, 0);
  REQUIRE(pool.grids.size() > 4);
  const std::vector<double> scores = score_pool(fx.data, pool, 0.8, 1);
  for (size_t i = 0; i < pool.grids.size(); ++i) {
    const Histogram hist = build_histogram(fx.data, pool.grids[i]);
    CHECK(scores[i] == grid_quality(hist, 0.8));
  }
  // Scores are independent of the thread count, bit for bit.
  CHECK(score_pool(fx.data, pool, 0.8, 4) == scores);
}

TEST_CASE("quality: grid selection is deterministic given a seed") {
  const BoundFixture fx = many_attribute_fixture(4, 300, 55);
  const CandidatePool pool = enumerate_grids(fx.data.hierarchies, 16, 0);
  RandomSource a(17, "select");
  RandomSource b(17, "select");
  std::vector<double> scores;
  const size_t pick_a = select_grid(fx.data, pool, 0.3, 0.4, a, &scores, 1);
  const size_t pick_b = select_grid(fx.data, pool, 0.3, 0.4, b, nullptr, 4);
  CHECK(pick_a == pick_b);
  CHECK(scores.size() == pool.grids.size());
}

// ---------------------------------------------------------------------------
// Features

TEST_CASE("features: contingency tables and marginals") {
  const ContingencyTable t = make_contingency({{0, 1}, {9, 0}});
  CHECK(t.total == 10);
  CHECK(t.row_total == std::vector<int64_t>{1, 9});
  CHECK(t.column_total == std::array<int64_t, 2>{9, 1});
  const std::vector<std::array<double, 2>> e = expected_counts(t);
  CHECK(e[0][0] == doctest::Approx(0.9));
  CHECK(e[0][1] == doctest::Approx(0.1));
  CHECK(e[1][0] == doctest::Approx(8.1));
  CHECK(e[1][1] == doctest::Approx(0.9));
  CHECK_THROWS_AS(make_contingency({{-1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(expected_counts(make_contingency({{0, 0}})),
                  std::invalid_argument);

  // Balanced marginals give uniform expected counts.
  const ContingencyTable b = make_contingency({{3, 2}, {2, 3}});
  for (const auto& row : expected_counts(b)) {
    CHECK(row[0] == doctest::Approx(2.5));
    CHECK(row[1] == doctest::Approx(2.5));
  }
}

TEST_CASE("features: contingency from data keeps empty leaf rows") {
  // Only leaf A is populated; leaf B appears as a zero row.
  const BoundFixture fx = two_cell_fixture(2, 3, 0, 0);
  const ContingencyTable t = contingency(fx.data, 0);
  REQUIRE(t.observed.size() == 2);
  CHECK(t.observed[0] == std::array<int64_t, 2>{3, 2});
  CHECK(t.observed[1] == std::array<int64_t, 2>{0, 0});
}

TEST_CASE("features: chi-square and cor statistics") {
  const ContingencyTable t = make_contingency({{0, 1}, {9, 0}});
  CHECK(chi_square(t) == doctest::Approx(10.0).epsilon(1e-12));
  // Sum of |o - e| with the marginals above: 4 * 0.9.
  CHECK(cor(t) == doctest::Approx(3.6).epsilon(1e-12));
  // A zero column marginal voids chi-square but not cor.
  const ContingencyTable zero_col = make_contingency({{2, 0}, {3, 0}});
  CHECK_THROWS_AS(chi_square(zero_col), std::domain_error);
  CHECK(cor(zero_col) == doctest::Approx(0.0));
  CHECK(cor(ContingencyTable{}) == 0.0);
}

TEST_CASE("features: feature-count rule") {
  // ceil(2 ln 2261 / ln 4) = ceil(11.14...) = 12.
  CHECK(num_features(2261, 4.0) == 12);
  // 2 ln 16 / ln 4 = 4 exactly: the guard keeps an exact integer intact.
  CHECK(num_features(16, 4.0) == 4);
  CHECK(num_features(2, 2.0) == 2);
  CHECK(num_features(3, 2.0) == 4);
  CHECK_THROWS_AS(num_features(1, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(num_features(10, 1.0), std::invalid_argument);
}

TEST_CASE("features: private selection draws without replacement") {
  const BoundFixture fx = many_attribute_fixture(6, 400, 123);
  RandomSource rng(29, "fs");
  std::vector<double> cors;
  const std::vector<int> picked = select_features(fx.data, 3, 0.9, rng,
                                                  &cors);
  CHECK(picked.size() == 3);
  CHECK(std::set<int>(picked.begin(), picked.end()).size() == 3);
  for (int a : picked) {
    CHECK(a >= 0);
    CHECK(a < 6);
  }
  REQUIRE(cors.size() == 6);
  for (size_t a = 0; a < 6; ++a) {
    CHECK(cors[a] == doctest::Approx(cor(contingency(fx.data, a))));
  }
  // Attribute 0 drives the label, so its correlation dominates.
  for (size_t a = 1; a < 6; ++a) {
    CHECK(cors[0] > cors[a]);
  }

  // k equal to the attribute count returns a permutation of everything.
  RandomSource rng2(30, "fs");
  const std::vector<int> all = select_features(fx.data, 6, 0.9, rng2);
  CHECK(std::set<int>(all.begin(), all.end()).size() == 6);

  RandomSource rng3(31, "fs");
  CHECK_THROWS_AS(select_features(fx.data, 7, 0.9, rng3),
                  std::invalid_argument);
  CHECK_THROWS_AS(select_features(fx.data, 0, 0.9, rng3),
                  std::invalid_argument);
}

TEST_CASE("features: selection is reproducible") {
  const BoundFixture fx = many_attribute_fixture(5, 200, 321);
  RandomSource a(8, "fs-repro");
  RandomSource b(8, "fs-repro");
  CHECK(select_features(fx.data, 2, 0.4, a) ==
        select_features(fx.data, 2, 0.4, b));
}
