// Copyright 2026 The PQMC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PQMC_EXPERIMENT_HPP
#define PQMC_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <pqmc/engine.hpp>
#include <pqmc/model.hpp>

/**
 * \file
 * \brief Replicated experiments: grids of population runs scored by squared
 * error against known moments, and resampling comparisons on a fixed
 * importance sample. Specs are YAML documents; results are CSV plus JSON.
 */

namespace pqmc {

/// Benchmark target reference: "mixture5_2d", "mixture3" or "standard_normal".
struct TargetRef {
  std::string id;
  std::size_t dim = 0;
};

/// Throws ConfigError for an unknown id or a missing dimension.
Target resolve_target(const TargetRef& ref);

/// One algorithm column of a grid: everything in RunConfig except K, J, sigma0 and seed.
struct AlgorithmSpec {
  std::string name;
  Sampler sampler = Sampler::kMc;
  Weighting weighting = Weighting::kDm;
  Resampler resampler = Resampler::kSystematic;
  AdaptConfig adapt;
};

struct ExperimentSpec {
  std::string name;
  TargetRef target;
  std::size_t T = 10;
  /// (K, J) pairs; every pair is crossed with every sigma and every algorithm.
  std::vector<std::pair<std::size_t, std::size_t>> kj;
  std::vector<double> sigmas;
  std::vector<AlgorithmSpec> algorithms;
  SobolBox init_box;
  std::size_t replications = 20;
  /// Replications used when the full-scale switch is on.
  std::size_t full_replications = 100;
  std::uint64_t base_seed = 0;
  /// Divide by the known normalizing constant instead of self-normalizing.
  bool use_known_z = false;
};

/// One row per (cell, estimator). Log values are natural logs of squared errors.
struct MseRow {
  std::string cell_id;
  std::string estimator;
  std::string algorithm;
  std::size_t K = 0;
  std::size_t J = 0;
  double sigma = 0.0;
  double logmse_mean_m = 0.0;
  double logmse_min_m = 0.0;
  double logmse_max_m = 0.0;
  double logmse_mean_z = 0.0;
  double logmse_min_z = 0.0;
  double logmse_max_z = 0.0;
  double ess_mean = 0.0;
  double runtime_s = 0.0;
  std::size_t target_evaluations = 0;
  std::vector<std::uint64_t> seeds;
  /// Empty unless some replication aborted; metrics are NaN then.
  std::string error;
};

struct ExecutionOptions {
  std::size_t threads = 1;
  /// Overrides the replication count of the experiment file when set.
  std::optional<std::size_t> replications;
  std::optional<std::uint64_t> base_seed;
  bool full = false;
  /// Report runtime as 0 so that output files are byte-reproducible.
  bool record_timing = true;
};

ExperimentSpec parse_experiment_spec(const std::string& yaml_text);
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);

/// Effective replication count after applying options.
std::size_t replications_for(const ExperimentSpec& spec, const ExecutionOptions& opts);
std::uint64_t base_seed_for(const ExperimentSpec& spec, const ExecutionOptions& opts);

/// The RunConfig of one grid cell and replication seed.
RunConfig cell_config(const ExperimentSpec& spec, const AlgorithmSpec& algorithm, std::size_t K, std::size_t J,
                      double sigma, std::uint64_t seed);

/**
 * Runs every cell with seeds base_seed + r, r = 0..R-1, and scores the
 * standard and weighted estimators of E[X] and Z. Rows come in grid order.
 *
 * Throws ConfigError on an invalid spec. A replication that aborts marks its cell failed.
 */
std::vector<MseRow> run_experiment(const ExperimentSpec& spec, const ExecutionOptions& opts = {});

/// Resampling comparison on M scrambled-Sobol' draws of N(0, proposal_cov_scale I_p) weighted toward N(0, I_p).
struct SweepSpec {
  std::string name;
  std::size_t M = 1000;
  std::size_t n = 100;
  std::vector<std::size_t> dims;
  double proposal_cov_scale = 1.4142135623730951;
  std::size_t replications = 100;
  std::size_t full_replications = 100;
  std::uint64_t base_seed = 0;
  std::vector<Resampler> methods{Resampler::kIsp, Resampler::kMultinomial, Resampler::kSystematic};
};

struct SweepRow {
  std::string cell_id;
  std::size_t p = 0;
  std::string method;
  std::size_t M = 0;
  std::size_t n = 0;
  double ess = 0.0;
  /// Squared errors (coordinate-averaged) of the resample mean against the importance-sampling estimate.
  double logmse_is_mean = 0.0;
  double logmse_is_min = 0.0;
  double logmse_is_max = 0.0;
  /// Same against the true mean 0.
  double logmse_truth_mean = 0.0;
  double logmse_truth_min = 0.0;
  double logmse_truth_max = 0.0;
  /// Replications actually run (1 for the deterministic ISP method).
  std::size_t runs = 0;
  double runtime_s = 0.0;
};

SweepSpec parse_sweep_spec(const std::string& yaml_text);
SweepSpec load_sweep_spec(const std::filesystem::path& path);

std::vector<SweepRow> resampling_sweep(const SweepSpec& spec, const ExecutionOptions& opts = {});

/// Fixed column header of experiment CSV files.
extern const char* const kMseCsvHeader;
extern const char* const kSweepCsvHeader;

void write_csv(std::ostream& os, const std::vector<MseRow>& rows);
void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// Config echo, source revision, seeds and rows.
std::string experiment_json(const ExperimentSpec& spec, const ExecutionOptions& opts, const std::vector<MseRow>& rows);
std::string sweep_json(const SweepSpec& spec, const ExecutionOptions& opts, const std::vector<SweepRow>& rows);

/// Source revision baked in at build time ("unknown" outside a git checkout).
std::string source_revision();

}  // namespace pqmc

#endif
