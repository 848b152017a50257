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

// Python module over the core library: the closed forms, the private
// mechanisms, and the file-driven pipeline entry points.

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "privhist/dataset.hpp"
#include "privhist/evaluator.hpp"
#include "privhist/features.hpp"
#include "privhist/grids.hpp"
#include "privhist/mechanisms.hpp"
#include "privhist/oracles.hpp"
#include "privhist/publisher.hpp"
#include "privhist/quality.hpp"
#include "privhist/random.hpp"
#include "privhist/taxonomy.hpp"

namespace py = pybind11;

namespace {

using namespace privhist;

struct LoadedInputs {
  Schema schema;
  Dataset dataset;
  std::vector<Hierarchy> hierarchies;
};

LoadedInputs load_inputs(const std::string& data_path,
                         const std::string& schema_path,
                         const std::string& hierarchies_path) {
  LoadedInputs in;
  in.schema = load_schema(schema_path);
  in.dataset = load_csv(data_path, in.schema);
  in.hierarchies = load_hierarchies(hierarchies_path);
  return in;
}

IndexedDataset bind_checked(const Dataset& dataset,
                            const std::vector<Hierarchy>& hierarchies) {
  IndexedDataset bound = bind_dataset(dataset, hierarchies);
  if (bound.size() == 0) {
    throw std::invalid_argument("no usable records after binding");
  }
  return bound;
}

py::list ledger_list(const std::vector<BudgetAccountant::Entry>& entries) {
  py::list out;
  for (const auto& entry : entries) {
    py::dict step;
    step["step"] = entry.label;
    step["fraction"] = py::make_tuple(entry.num, entry.den);
    step["epsilon"] = entry.epsilon;
    out.append(std::move(step));
  }
  return out;
}

py::dict histogram_dict(const NoisyHistogram& noisy) {
  py::dict out;
  out["attributes"] = noisy.attributes;
  out["levels"] = noisy.levels;
  py::list cells;
  for (uint64_t flat = 0; flat < noisy.cell_count(); ++flat) {
    py::dict cell;
    cell["cell"] = noisy.cell_ordinals(flat);
    cell["positive"] = noisy.cells[flat][1];
    cell["negative"] = noisy.cells[flat][0];
    cells.append(std::move(cell));
  }
  out["cells"] = std::move(cells);
  out["epsilon"] = noisy.epsilon_total;
  out["seed"] = noisy.seed;
  out["budget"] = ledger_list(noisy.ledger);
  out["deviation_flags"] = noisy.deviation_flags;
  return out;
}

py::dict publish(const std::string& data, const std::string& schema,
                 const std::string& hierarchies, double epsilon, double delta,
                 uint64_t max_pool, uint64_t seed, int threads,
                 bool with_synthetic) {
  const LoadedInputs in = load_inputs(data, schema, hierarchies);
  const IndexedDataset bound = bind_checked(in.dataset, in.hierarchies);

  PublishConfig config;
  config.epsilon = epsilon;
  config.delta = delta;
  config.max_pool = max_pool;
  config.seed = seed;
  config.threads = threads;
  const NoisyHistogram noisy = run_pipeline(bound, config);

  py::dict out = histogram_dict(noisy);
  if (with_synthetic) {
    RandomSource root(seed);
    RandomSource rng = root.stream("synthesize");
    const Dataset synthetic =
        synthesize(noisy, rng, in.schema.label_column,
                   in.schema.positive_label, in.schema.negative_label);
    out["synthetic_csv"] = serialize_csv(synthetic);
  }
  return out;
}

py::dict cross_validate_paths(const std::string& data,
                              const std::string& schema,
                              const std::string& hierarchies, double epsilon,
                              int folds, int repeats, double delta,
                              uint64_t max_pool, uint64_t seed, int threads) {
  const LoadedInputs in = load_inputs(data, schema, hierarchies);
  PublishConfig config;
  config.epsilon = epsilon;
  config.delta = delta;
  config.max_pool = max_pool;
  config.seed = seed;
  config.threads = threads;
  const CrossValidationResult cv =
      cross_validate(in.dataset, in.hierarchies, config, folds, repeats);
  py::dict out;
  out["mean_error"] = cv.mean_error;
  out["stddev_error"] = cv.stddev_error;
  out["majority_error"] = cv.majority_error;
  out["folds"] = cv.folds;
  out["repeats"] = cv.repeats;
  out["run_errors"] = cv.run_errors;
  return out;
}

double noise_free_reference_paths(const std::string& data,
                                  const std::string& schema,
                                  const std::string& hierarchies, int folds,
                                  uint64_t seed) {
  const LoadedInputs in = load_inputs(data, schema, hierarchies);
  return noise_free_reference(in.dataset, in.hierarchies, folds, seed);
}

py::dict inspect_pool(const std::string& data, const std::string& schema,
                      const std::string& hierarchies, double epsilon,
                      double delta, uint64_t max_pool, int threads) {
  const LoadedInputs in = load_inputs(data, schema, hierarchies);
  const IndexedDataset bound = bind_checked(in.dataset, in.hierarchies);
  const uint64_t threshold = cell_threshold(bound.size(), epsilon, delta);
  const CandidatePool pool =
      enumerate_grids(bound.hierarchies, threshold, max_pool);
  const BudgetSplit split = budget_split(epsilon, false);
  const std::vector<double> scores =
      score_pool(bound, pool, split.ph, threads);

  py::dict out;
  out["threshold"] = threshold;
  out["truncated"] = pool.truncated;
  py::list grids;
  for (size_t i = 0; i < pool.grids.size(); ++i) {
    py::dict grid;
    grid["levels"] = pool.grids[i];
    grid["cells"] = grid_cell_count(bound.hierarchies, pool.grids[i]);
    grid["quality"] = scores[i];
    grids.append(std::move(grid));
  }
  out["grids"] = std::move(grids);
  return out;
}

py::dict certification_dict(uint64_t seed) {
  const std::vector<OracleReport> reports = run_certification(seed);
  py::dict out;
  out["passed"] = certification_passed(reports);
  py::list rows;
  for (const OracleReport& r : reports) {
    py::dict row;
    row["name"] = r.name;
    row["closed_form"] = r.closed_form;
    row["oracle"] = r.oracle;
    row["tolerance"] = r.tolerance;
    row["scope"] = r.scope;
    row["pass"] = r.pass;
    row["advisory"] = r.advisory;
    rows.append(std::move(row));
  }
  out["reports"] = std::move(rows);
  return out;
}

}  // namespace

PYBIND11_MODULE(privhist, m) {
  m.doc() =
      "Differentially private publication of classification-oriented "
      "histograms and synthetic datasets: closed-form quality scores, the "
      "Laplace and exponential mechanisms, and the full release pipeline.";

  // --- closed forms ---------------------------------------------------
  m.def("laplace_diff_cdf", &laplace_diff_cdf, py::arg("y"),
        py::arg("epsilon"),
        "CDF of the difference of two i.i.d. Laplace(1/epsilon) variables.");
  m.def("prob_majority_preserved", &prob_majority_preserved,
        py::arg("margin"), py::arg("epsilon"),
        "Probability that a cell's majority label survives the noise, for "
        "count margin |positive - negative| = margin.");
  m.def("cell_expected_error", &cell_expected_error, py::arg("n_pos"),
        py::arg("n_neg"), py::arg("epsilon"),
        "Expected misclassified records of one cell under noisy majority "
        "voting.");
  m.def("quality_bound_at", &quality_bound_at, py::arg("x"),
        py::arg("epsilon"),
        "Quality change from one added record at majority margin x (x >= 1).");
  m.def("quality_sensitivity_argmax", &quality_sensitivity_argmax,
        py::arg("epsilon"),
        "Margin x* maximizing the quality-sensitivity integrand.");
  m.def("quality_sensitivity_bound", &quality_sensitivity_bound,
        py::arg("epsilon"),
        "Global sensitivity bound of the grid quality score.");
  m.def("cell_threshold", &cell_threshold, py::arg("n_records"),
        py::arg("epsilon"), py::arg("delta") = 0.1,
        "Largest admissible grid cell count: "
        "max(1, floor(delta * N * epsilon / 2)).");
  m.def("num_features", &num_features, py::arg("threshold"),
        py::arg("branching"),
        "Number of attributes private selection keeps: "
        "ceil(2 log(T) / log(b)).");

  // --- mechanisms -------------------------------------------------------
  m.def(
      "budget_split",
      [](double total, bool with_feature_selection) {
        const BudgetSplit split = budget_split(total, with_feature_selection);
        py::dict out;
        out["fs"] = split.fs;
        out["sh"] = split.sh;
        out["ph"] = split.ph;
        out["fs_fraction"] = py::make_tuple(split.fs_num, split.fs_den);
        out["sh_fraction"] = py::make_tuple(split.sh_num, split.sh_den);
        out["ph_fraction"] = py::make_tuple(split.ph_num, split.ph_den);
        return out;
      },
      py::arg("total"), py::arg("with_feature_selection"),
      "Split of the total privacy budget across the pipeline steps; the "
      "floating-point parts sum to the total exactly.");
  m.def(
      "exponential_select",
      [](const std::vector<double>& scores, double epsilon,
         double sensitivity, bool lower_is_better, uint64_t seed) {
        RandomSource rng(seed, "exponential-select");
        return exponential_select(scores, epsilon, sensitivity,
                                  lower_is_better, rng);
      },
      py::arg("scores"), py::arg("epsilon"), py::arg("sensitivity"),
      py::arg("lower_is_better") = false, py::arg("seed") = 0,
      "One exponential-mechanism draw over the scored candidates, "
      "deterministic in the seed.");
  m.def(
      "chi_square",
      [](const std::vector<std::array<int64_t, 2>>& observed) {
        return chi_square(make_contingency(observed));
      },
      py::arg("observed"),
      "Pearson chi-square of observed (negative, positive) count rows. "
      "Reference only: its sensitivity is unbounded.");
  m.def(
      "cor",
      [](const std::vector<std::array<int64_t, 2>>& observed) {
        return cor(make_contingency(observed));
      },
      py::arg("observed"),
      "Sum of absolute deviations from independence of observed "
      "(negative, positive) count rows; the selection score.");

  // --- pipeline ---------------------------------------------------------
  m.def("publish", &publish, py::arg("data"), py::arg("schema"),
        py::arg("hierarchies"), py::arg("epsilon"), py::kw_only(),
        py::arg("delta") = 0.1, py::arg("max_pool") = 200000,
        py::arg("seed") = 0, py::arg("threads") = 1,
        py::arg("with_synthetic") = false,
        "Run the private release pipeline over CSV/schema/hierarchy files "
        "and return the noisy histogram (optionally plus a synthetic CSV "
        "drawn from it alone).");
  m.def("cross_validate", &cross_validate_paths, py::arg("data"),
        py::arg("schema"), py::arg("hierarchies"), py::arg("epsilon"),
        py::arg("folds") = 10, py::arg("repeats") = 10, py::kw_only(),
        py::arg("delta") = 0.1, py::arg("max_pool") = 200000,
        py::arg("seed") = 0, py::arg("threads") = 1,
        "Stratified k-fold evaluation of the pipeline's histogram "
        "classifier against the majority baseline.");
  m.def("noise_free_reference", &noise_free_reference_paths, py::arg("data"),
        py::arg("schema"), py::arg("hierarchies"), py::arg("folds") = 10,
        py::arg("seed") = 0,
        "Non-private reference error of an exact histogram classifier on "
        "the same folds.");
  m.def("inspect_pool", &inspect_pool, py::arg("data"), py::arg("schema"),
        py::arg("hierarchies"), py::arg("epsilon"), py::kw_only(),
        py::arg("delta") = 0.1, py::arg("max_pool") = 200000,
        py::arg("threads") = 1,
        "Raw audit view of the candidate grids and their quality scores. "
        "Not noise-protected; do not treat the output as private.");
  m.def("run_certification", &certification_dict, py::arg("seed") = 7,
        "Re-derive every closed form by simulation or exhaustive search "
        "and report agreement per claim.");
}
