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

// privhist command-line tool.
//
// Subcommands:
//   publish       run the private release pipeline over a CSV dataset
//   evaluate      cross-validated error report across a list of budgets
//   inspect-pool  audit table of the candidate grids and their raw scores
//   certify       run the self-check oracles against every closed form
//
// Exit codes: 0 success, 1 usage or input error, 2 certification failure.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "privhist/dataset.hpp"
#include "privhist/evaluator.hpp"
#include "privhist/grids.hpp"
#include "privhist/histogram_io.hpp"
#include "privhist/manifest.hpp"
#include "privhist/mechanisms.hpp"
#include "privhist/oracles.hpp"
#include "privhist/publisher.hpp"
#include "privhist/quality.hpp"
#include "privhist/random.hpp"
#include "privhist/taxonomy.hpp"

namespace {

using namespace privhist;

// Shortest round-trip decimal form, for stable manifest config values.
std::string fmt_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  std::string s = out.str();
  // Prefer the shortest representation that still round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    std::ostringstream trial;
    trial.precision(prec);
    trial << v;
    if (std::stod(trial.str()) == v) {
      s = trial.str();
      break;
    }
  }
  return s;
}

std::string join_levels(const GridLevels& levels) {
  std::string out;
  for (size_t i = 0; i < levels.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(levels[i]);
  }
  return out;
}

std::vector<double> parse_epsilon_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    size_t pos = 0;
    double value = 0.0;
    try {
      value = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad epsilon value: '" + item + "'");
    }
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
    if (pos != item.size() || !(value > 0.0)) {
      throw std::invalid_argument("bad epsilon value: '" + item + "'");
    }
    out.push_back(value);
  }
  if (out.empty()) {
    throw std::invalid_argument("--epsilons lists no values");
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << text;
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

struct IoOptions {
  std::string data_path;
  std::string schema_path;
  std::string hierarchies_path;
};

void add_io_options(CLI::App* cmd, IoOptions* io) {
  cmd->add_option("--data", io->data_path, "Input CSV dataset")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--schema", io->schema_path, "Schema JSON document")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--hierarchies", io->hierarchies_path,
                  "Generalization hierarchies JSON document")
      ->required()
      ->check(CLI::ExistingFile);
}

struct LoadedInputs {
  Schema schema;
  Dataset dataset;
  LoadReport report;
  std::vector<Hierarchy> hierarchies;
};

LoadedInputs load_inputs(const IoOptions& io, RunManifest* manifest) {
  LoadedInputs in;
  in.schema = load_schema(io.schema_path);
  in.dataset = load_csv(io.data_path, in.schema, &in.report);
  in.hierarchies = load_hierarchies(io.hierarchies_path);
  if (manifest != nullptr) {
    manifest->add_input(io.data_path);
    manifest->add_input(io.schema_path);
    manifest->add_input(io.hierarchies_path);
  }
  if (in.report.rows_kept != in.report.rows_read) {
    std::fprintf(stderr,
                 "note: kept %llu of %llu rows (%llu with missing fields, "
                 "%llu with unparseable numerics)\n",
                 static_cast<unsigned long long>(in.report.rows_kept),
                 static_cast<unsigned long long>(in.report.rows_read),
                 static_cast<unsigned long long>(in.report.dropped_missing),
                 static_cast<unsigned long long>(in.report.dropped_bad_numeric));
  }
  return in;
}

IndexedDataset bind_checked(const Dataset& dataset,
                            const std::vector<Hierarchy>& hierarchies) {
  IndexedDataset bound = bind_dataset(dataset, hierarchies);
  if (bound.dropped_out_of_domain > 0) {
    std::fprintf(stderr,
                 "note: dropped %llu records outside the hierarchy domains\n",
                 static_cast<unsigned long long>(bound.dropped_out_of_domain));
  }
  return bound;
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  const auto now = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(now - start).count();
}

// ---------------------------------------------------------------------------
// publish

struct PublishOptions {
  IoOptions io;
  double epsilon = 0.0;
  double delta = 0.1;
  uint64_t max_pool = 200000;
  uint64_t seed = 0;
  int threads = 1;
  std::string out_prefix;
  std::string emit = "both";
  bool explain = false;
  bool unsafe_diagnostics = false;
};

int run_publish(const PublishOptions& opt) {
  if (opt.explain && !opt.unsafe_diagnostics) {
    std::fprintf(stderr,
                 "error: --explain prints raw, data-dependent diagnostics "
                 "that are not noise-protected; add --unsafe-diagnostics to "
                 "acknowledge\n");
    return 1;
  }
  const auto start = std::chrono::steady_clock::now();

  RunManifest manifest;
  manifest.command = "publish";
  manifest.seed = opt.seed;
  manifest.config = {
      {"epsilon", fmt_double(opt.epsilon)},
      {"delta", fmt_double(opt.delta)},
      {"max-pool", std::to_string(opt.max_pool)},
      {"seed", std::to_string(opt.seed)},
      {"threads", std::to_string(opt.threads)},
      {"emit", opt.emit},
  };

  const LoadedInputs in = load_inputs(opt.io, &manifest);
  const IndexedDataset bound = bind_checked(in.dataset, in.hierarchies);

  PublishConfig config;
  config.epsilon = opt.epsilon;
  config.delta = opt.delta;
  config.max_pool = opt.max_pool;
  config.seed = opt.seed;
  config.threads = opt.threads;

  PipelineDiagnostics diagnostics;
  const NoisyHistogram histogram = run_pipeline(
      bound, config, opt.explain ? &diagnostics : nullptr);

  if (opt.emit == "histogram" || opt.emit == "both") {
    const std::string path = opt.out_prefix + ".histogram.json";
    save_noisy_histogram(histogram, path);
    manifest.add_output(path);
    std::printf("wrote %s\n", path.c_str());
  }
  if (opt.emit == "synthetic" || opt.emit == "both") {
    RandomSource root(opt.seed);
    RandomSource rng = root.stream("synthesize");
    const Dataset synthetic =
        synthesize(histogram, rng, in.schema.label_column,
                   in.schema.positive_label, in.schema.negative_label);
    const std::string path = opt.out_prefix + ".synthetic.csv";
    save_csv(synthetic, path);
    manifest.add_output(path);
    std::printf("wrote %s (%llu records)\n", path.c_str(),
                static_cast<unsigned long long>(synthetic.size()));
  }

  manifest.budget = histogram.ledger;
  manifest.deviation_flags = histogram.deviation_flags;
  manifest.wall_time_seconds = elapsed_seconds(start);
  const std::string manifest_path = opt.out_prefix + ".manifest.json";
  save_manifest(manifest, manifest_path);
  std::printf("wrote %s\n", manifest_path.c_str());

  std::printf(
      "published: levels (%s), %llu cells, epsilon %s over %zu attributes\n",
      join_levels(histogram.levels).c_str(),
      static_cast<unsigned long long>(histogram.cell_count()),
      fmt_double(histogram.epsilon_total).c_str(),
      histogram.attributes.size());

  if (opt.explain) {
    std::printf("\n--- unsafe diagnostics (raw, not noise-protected) ---\n");
    std::printf("records bound: %zu\n", bound.size());
    std::printf("cell threshold: %llu\n",
                static_cast<unsigned long long>(diagnostics.threshold));
    std::printf("initial pool: %llu grids%s\n",
                static_cast<unsigned long long>(diagnostics.initial_pool_size),
                diagnostics.initial_pool_truncated ? " (cap reached)" : "");
    if (diagnostics.feature_selection_used) {
      std::printf("feature selection: k=%d of %zu (median branching %d)\n",
                  diagnostics.k, diagnostics.cor_scores.size(),
                  diagnostics.median_branching);
      for (size_t i = 0; i < diagnostics.cor_scores.size(); ++i) {
        std::printf("  cor[%s] = %.6f\n", bound.attributes[i].c_str(),
                    diagnostics.cor_scores[i]);
      }
      std::string names;
      for (int a : diagnostics.selected_attributes) {
        if (!names.empty()) names += ", ";
        names += bound.attributes[static_cast<size_t>(a)];
      }
      std::printf("selected attributes: %s\n", names.c_str());
    } else if (diagnostics.feature_selection_skipped_k_clamp) {
      std::printf("feature selection: skipped (k covers all attributes)\n");
    } else {
      std::printf("feature selection: not needed\n");
    }
    std::printf("scored pool: %zu grids\n", diagnostics.pool.size());
    std::printf("chosen grid: index %zu, levels (%s), quality %.6f\n",
                diagnostics.chosen_index,
                join_levels(diagnostics.pool[diagnostics.chosen_index]).c_str(),
                diagnostics.pool_scores[diagnostics.chosen_index]);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOptions {
  IoOptions io;
  std::string epsilons = "1.0";
  int folds = 10;
  int repeats = 10;
  double delta = 0.1;
  uint64_t max_pool = 200000;
  uint64_t seed = 0;
  int threads = 1;
  std::string report_path;
};

int run_evaluate(const EvaluateOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> epsilons = parse_epsilon_list(opt.epsilons);

  RunManifest manifest;
  manifest.command = "evaluate";
  manifest.seed = opt.seed;
  manifest.config = {
      {"epsilons", opt.epsilons},
      {"folds", std::to_string(opt.folds)},
      {"repeats", std::to_string(opt.repeats)},
      {"delta", fmt_double(opt.delta)},
      {"max-pool", std::to_string(opt.max_pool)},
      {"seed", std::to_string(opt.seed)},
      {"threads", std::to_string(opt.threads)},
  };

  const LoadedInputs in = load_inputs(opt.io, &manifest);

  const double noise_free = noise_free_reference(in.dataset, in.hierarchies,
                                                 opt.folds, opt.seed);

  std::string csv =
      "epsilon,mean_error,stddev_error,majority_error,noise_free_error\n";
  std::printf("%8s %12s %12s %12s %12s\n", "epsilon", "mean", "stddev",
              "majority", "noise-free");
  for (double eps : epsilons) {
    PublishConfig config;
    config.epsilon = eps;
    config.delta = opt.delta;
    config.max_pool = opt.max_pool;
    config.seed = opt.seed;
    config.threads = opt.threads;
    const CrossValidationResult cv = cross_validate(
        in.dataset, in.hierarchies, config, opt.folds, opt.repeats);
    char row[256];
    std::snprintf(row, sizeof(row), "%s,%.6f,%.6f,%.6f,%.6f\n",
                  fmt_double(eps).c_str(), cv.mean_error, cv.stddev_error,
                  cv.majority_error, noise_free);
    csv += row;
    std::printf("%8s %12.6f %12.6f %12.6f %12.6f\n", fmt_double(eps).c_str(),
                cv.mean_error, cv.stddev_error, cv.majority_error, noise_free);
  }

  write_text_file(opt.report_path, csv);
  manifest.add_output(opt.report_path);
  manifest.wall_time_seconds = elapsed_seconds(start);
  const std::string manifest_path = opt.report_path + ".manifest.json";
  save_manifest(manifest, manifest_path);
  std::printf("wrote %s\nwrote %s\n", opt.report_path.c_str(),
              manifest_path.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// inspect-pool

struct InspectOptions {
  IoOptions io;
  double epsilon = 0.0;
  double delta = 0.1;
  uint64_t max_pool = 200000;
  int threads = 1;
};

int run_inspect_pool(const InspectOptions& opt) {
  const LoadedInputs in = load_inputs(opt.io, nullptr);
  const IndexedDataset bound = bind_checked(in.dataset, in.hierarchies);
  if (bound.size() == 0) {
    throw std::invalid_argument("dataset is empty after binding");
  }

  const uint64_t threshold =
      cell_threshold(bound.size(), opt.epsilon, opt.delta);
  const CandidatePool pool =
      enumerate_grids(bound.hierarchies, threshold, opt.max_pool);
  const bool would_select_features =
      pool.truncated || pool.grids.size() >= opt.max_pool;

  std::printf("raw audit output (not noise-protected)\n");
  std::printf("records: %zu, epsilon: %s, delta: %s\n", bound.size(),
              fmt_double(opt.epsilon).c_str(), fmt_double(opt.delta).c_str());
  std::printf("cell threshold: %llu\n",
              static_cast<unsigned long long>(threshold));
  std::printf("pool: %zu grids%s\n", pool.grids.size(),
              pool.truncated ? " (enumeration capped)" : "");
  if (would_select_features) {
    std::printf(
        "note: at this size publish would first select features privately "
        "and re-enumerate; scores below use the no-selection noise budget\n");
  }

  const BudgetSplit split = budget_split(opt.epsilon, false);
  const std::vector<double> scores =
      score_pool(bound, pool, split.ph, opt.threads);

  std::printf("%6s  %-20s %12s  %s\n", "index", "levels", "cells", "quality");
  size_t best = 0;
  for (size_t i = 0; i < pool.grids.size(); ++i) {
    const uint64_t cells = grid_cell_count(pool.hierarchies, pool.grids[i]);
    std::printf("%6zu  %-20s %12llu  %.6f\n", i,
                join_levels(pool.grids[i]).c_str(),
                static_cast<unsigned long long>(cells), scores[i]);
    if (scores[i] < scores[best]) best = i;
  }
  std::printf("best (lowest expected error): index %zu, levels (%s)\n", best,
              join_levels(pool.grids[best]).c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// certify

struct CertifyOptions {
  uint64_t seed = 7;
  std::string out_prefix;
};

int run_certify(const CertifyOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<OracleReport> reports = run_certification(opt.seed);
  const std::string table = format_certification(reports);
  std::fputs(table.c_str(), stdout);

  const bool passed = certification_passed(reports);
  int failures = 0;
  for (const OracleReport& report : reports) {
    if (!report.pass && !report.advisory) ++failures;
  }

  if (!opt.out_prefix.empty()) {
    RunManifest manifest;
    manifest.command = "certify";
    manifest.seed = opt.seed;
    manifest.config = {{"seed", std::to_string(opt.seed)}};
    const std::string table_path = opt.out_prefix + ".certification.txt";
    write_text_file(table_path, table);
    manifest.add_output(table_path);
    manifest.wall_time_seconds = elapsed_seconds(start);
    const std::string manifest_path = opt.out_prefix + ".manifest.json";
    save_manifest(manifest, manifest_path);
    std::printf("wrote %s\nwrote %s\n", table_path.c_str(),
                manifest_path.c_str());
  }

  if (passed) {
    std::printf("certification passed (%zu checks)\n", reports.size());
    return 0;
  }
  std::printf("certification FAILED: %d non-advisory check(s) failed\n",
              failures);
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "privhist: differentially private histogram publication for "
      "classification"};
  app.require_subcommand(1);

  PublishOptions publish_opt;
  CLI::App* publish = app.add_subcommand(
      "publish", "Run the private release pipeline over a CSV dataset");
  add_io_options(publish, &publish_opt.io);
  publish->add_option("--epsilon", publish_opt.epsilon,
                      "Total privacy budget (> 0)")
      ->required()
      ->check(CLI::PositiveNumber);
  publish->add_option("--delta", publish_opt.delta,
                      "Cell-threshold coefficient in (0, 1]")->capture_default_str()
      ->check(CLI::Range(1e-12, 1.0));
  publish->add_option("--max-pool", publish_opt.max_pool,
                      "Candidate-pool size cap")->capture_default_str()
      ->check(CLI::PositiveNumber);
  publish->add_option("--seed", publish_opt.seed, "Master random seed")->capture_default_str();
  publish->add_option("--threads", publish_opt.threads,
                      "Worker threads for scoring and histogram building")->capture_default_str()
      ->check(CLI::PositiveNumber);
  publish->add_option("--out", publish_opt.out_prefix,
                      "Output path prefix (writes <out>.histogram.json, "
                      "<out>.synthetic.csv, <out>.manifest.json)")
      ->required();
  publish
      ->add_option("--emit", publish_opt.emit,
                   "Which artifacts to write: histogram, synthetic, or both")->capture_default_str()
      ->check(CLI::IsMember({"histogram", "synthetic", "both"}));
  publish->add_flag("--explain", publish_opt.explain,
                    "Print raw pipeline diagnostics (requires "
                    "--unsafe-diagnostics)");
  publish->add_flag("--unsafe-diagnostics", publish_opt.unsafe_diagnostics,
                    "Acknowledge that diagnostics expose raw, "
                    "non-noise-protected statistics");

  EvaluateOptions evaluate_opt;
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Cross-validated error report across a list of budgets");
  add_io_options(evaluate, &evaluate_opt.io);
  evaluate->add_option("--epsilons", evaluate_opt.epsilons,
                       "Comma-separated list of privacy budgets")->capture_default_str();
  evaluate->add_option("--folds", evaluate_opt.folds,
                       "Cross-validation folds")->capture_default_str()
      ->check(CLI::Range(2, 1000000));
  evaluate->add_option("--repeats", evaluate_opt.repeats,
                       "Pipeline runs per fold")->capture_default_str()
      ->check(CLI::PositiveNumber);
  evaluate->add_option("--delta", evaluate_opt.delta,
                       "Cell-threshold coefficient in (0, 1]")->capture_default_str()
      ->check(CLI::Range(1e-12, 1.0));
  evaluate->add_option("--max-pool", evaluate_opt.max_pool,
                       "Candidate-pool size cap")->capture_default_str()
      ->check(CLI::PositiveNumber);
  evaluate->add_option("--seed", evaluate_opt.seed, "Master random seed")->capture_default_str();
  evaluate->add_option("--threads", evaluate_opt.threads, "Worker threads")->capture_default_str()
      ->check(CLI::PositiveNumber);
  evaluate->add_option("--report", evaluate_opt.report_path,
                       "Output CSV report path")
      ->required();

  InspectOptions inspect_opt;
  CLI::App* inspect = app.add_subcommand(
      "inspect-pool",
      "Audit table of the candidate grids and their raw quality scores");
  add_io_options(inspect, &inspect_opt.io);
  inspect->add_option("--epsilon", inspect_opt.epsilon,
                      "Total privacy budget (> 0)")
      ->required()
      ->check(CLI::PositiveNumber);
  inspect->add_option("--delta", inspect_opt.delta,
                      "Cell-threshold coefficient in (0, 1]")->capture_default_str()
      ->check(CLI::Range(1e-12, 1.0));
  inspect->add_option("--max-pool", inspect_opt.max_pool,
                      "Candidate-pool size cap")->capture_default_str()
      ->check(CLI::PositiveNumber);
  inspect->add_option("--threads", inspect_opt.threads, "Worker threads")->capture_default_str()
      ->check(CLI::PositiveNumber);

  CertifyOptions certify_opt;
  CLI::App* certify = app.add_subcommand(
      "certify", "Validate every closed form against independent oracles");
  certify->add_option("--seed", certify_opt.seed,
                      "Seed for the simulation oracles")->capture_default_str();
  certify->add_option("--out", certify_opt.out_prefix,
                      "Optional output path prefix (writes "
                      "<out>.certification.txt and <out>.manifest.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(publish)) return run_publish(publish_opt);
    if (app.got_subcommand(evaluate)) return run_evaluate(evaluate_opt);
    if (app.got_subcommand(inspect)) return run_inspect_pool(inspect_opt);
    if (app.got_subcommand(certify)) return run_certify(certify_opt);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
