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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include <pqmc/error.hpp>
#include <pqmc/estimators.hpp>
#include <pqmc/experiment.hpp>
#include <pqmc/lds.hpp>
#include <pqmc/random.hpp>
#include <pqmc/resample.hpp>

namespace pqmc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs job(i) for i in [0, count) on up to `threads` workers. Results must be written by index.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& job) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      job(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        job(i);
      }
    });
  }
  for (auto& th : pool) {
    th.join();
  }
}

struct LogSummary {
  double mean = kNaN;
  double min = kNaN;
  double max = kNaN;
};

LogSummary log_summary(const std::vector<double>& squared_errors) {
  if (squared_errors.empty()) {
    return {};
  }
  double sum = 0.0;
  for (const double e : squared_errors) {
    sum += e;
  }
  const auto [lo, hi] = std::minmax_element(squared_errors.begin(), squared_errors.end());
  return {std::log(sum / static_cast<double>(squared_errors.size())), std::log(*lo), std::log(*hi)};
}

double coordinate_mse(const Vector& estimate, const Vector& truth) {
  return (estimate - truth).squaredNorm() / static_cast<double>(truth.size());
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct ReplicationOutcome {
  double standard_m = kNaN;
  double standard_z = kNaN;
  double weighted_m = kNaN;
  double weighted_z = kNaN;
  double ess_mean = kNaN;
  double wall_time_s = 0.0;
  std::size_t evaluations = 0;
  std::string error;
};

struct Cell {
  const AlgorithmSpec* algorithm;
  std::size_t K;
  std::size_t J;
  double sigma;
};

ReplicationOutcome run_replication(const ExperimentSpec& spec, const Target& target, const Cell& cell,
                                   std::uint64_t seed) {
  ReplicationOutcome out;
  try {
    const RunResult result =
        run_population(cell_config(spec, *cell.algorithm, cell.K, cell.J, cell.sigma, seed), target);
    const auto h = identity_integrand(target.dim);
    std::optional<double> z;
    if (spec.use_known_z) {
      z = target.known_z;
    }
    const auto standard = standard_estimate(result, h, z);
    const auto weighted = weighted_estimate(result, h, z);
    if (target.true_mean) {
      out.standard_m = coordinate_mse(standard.mean_estimate, *target.true_mean);
      out.weighted_m = coordinate_mse(weighted.mean_estimate, *target.true_mean);
    }
    if (target.known_z) {
      out.standard_z = std::pow(standard.z_estimate - *target.known_z, 2);
      out.weighted_z = std::pow(weighted.z_estimate - *target.known_z, 2);
    }
    out.ess_mean = standard.per_iteration_ess.mean();
    out.wall_time_s = result.wall_time_s;
    out.evaluations = result.target_evaluations;
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

std::size_t replications_for(const ExperimentSpec& spec, const ExecutionOptions& opts) {
  if (opts.replications) {
    return *opts.replications;
  }
  return opts.full ? spec.full_replications : spec.replications;
}

std::uint64_t base_seed_for(const ExperimentSpec& spec, const ExecutionOptions& opts) {
  return opts.base_seed.value_or(spec.base_seed);
}

RunConfig cell_config(const ExperimentSpec& spec, const AlgorithmSpec& algorithm, std::size_t K, std::size_t J,
                      double sigma, std::uint64_t seed) {
  RunConfig cfg;
  cfg.K = K;
  cfg.J = J;
  cfg.T = spec.T;
  cfg.sigma0 = sigma;
  cfg.init_centers = spec.init_box;
  cfg.sampler = algorithm.sampler;
  cfg.weighting = algorithm.weighting;
  cfg.resampler = algorithm.resampler;
  cfg.adapt = algorithm.adapt;
  cfg.seed = seed;
  return cfg;
}

std::vector<MseRow> run_experiment(const ExperimentSpec& spec, const ExecutionOptions& opts) {
  const Target target = resolve_target(spec.target);
  const std::size_t reps = replications_for(spec, opts);
  const std::uint64_t base_seed = base_seed_for(spec, opts);
  if (reps == 0) {
    throw ConfigError("replications must be at least 1");
  }

  std::vector<Cell> cells;
  for (const auto& alg : spec.algorithms) {
    for (const auto& [K, J] : spec.kj) {
      for (const double sigma : spec.sigmas) {
        validate(cell_config(spec, alg, K, J, sigma, 0));
        cells.push_back({&alg, K, J, sigma});
      }
    }
  }

  std::vector<ReplicationOutcome> outcomes(cells.size() * reps);
  parallel_for(outcomes.size(), opts.threads, [&](std::size_t job) {
    const auto& cell = cells[job / reps];
    outcomes[job] = run_replication(spec, target, cell, base_seed + job % reps);
  });

  std::vector<MseRow> rows;
  rows.reserve(cells.size() * 2);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& cell = cells[c];
    std::vector<double> sm, sz, wm, wz;
    double ess_total = 0.0;
    double time_total = 0.0;
    std::size_t evaluations = 0;
    std::string error;
    std::vector<std::uint64_t> seeds;
    for (std::size_t r = 0; r < reps; ++r) {
      const auto& o = outcomes[c * reps + r];
      seeds.push_back(base_seed + r);
      if (!o.error.empty()) {
        if (error.empty()) {
          error = "seed " + std::to_string(base_seed + r) + ": " + o.error;
        }
        continue;
      }
      sm.push_back(o.standard_m);
      sz.push_back(o.standard_z);
      wm.push_back(o.weighted_m);
      wz.push_back(o.weighted_z);
      ess_total += o.ess_mean;
      time_total += o.wall_time_s;
      evaluations += o.evaluations;
    }
    const std::string cell_id =
        cell.algorithm->name + "_K" + std::to_string(cell.K) + "_J" + std::to_string(cell.J) + "_s" +
        format_number(cell.sigma);
    for (const auto* estimator : {"standard", "weighted"}) {
      const bool is_standard = std::string(estimator) == "standard";
      MseRow row;
      row.cell_id = cell_id;
      row.estimator = estimator;
      row.algorithm = cell.algorithm->name;
      row.K = cell.K;
      row.J = cell.J;
      row.sigma = cell.sigma;
      row.seeds = seeds;
      row.target_evaluations = evaluations;
      if (error.empty()) {
        const auto m = log_summary(is_standard ? sm : wm);
        const auto z = log_summary(is_standard ? sz : wz);
        row.logmse_mean_m = m.mean;
        row.logmse_min_m = m.min;
        row.logmse_max_m = m.max;
        row.logmse_mean_z = z.mean;
        row.logmse_min_z = z.min;
        row.logmse_max_z = z.max;
        row.ess_mean = ess_total / static_cast<double>(reps);
        row.runtime_s = opts.record_timing ? time_total / static_cast<double>(reps) : 0.0;
      } else {
        row.logmse_mean_m = row.logmse_min_m = row.logmse_max_m = kNaN;
        row.logmse_mean_z = row.logmse_min_z = row.logmse_max_z = kNaN;
        row.ess_mean = kNaN;
        row.runtime_s = 0.0;
        row.error = error;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<SweepRow> resampling_sweep(const SweepSpec& spec, const ExecutionOptions& opts) {
  const std::size_t reps = opts.replications.value_or(opts.full ? spec.full_replications : spec.replications);
  const std::uint64_t base_seed = opts.base_seed.value_or(spec.base_seed);
  if (reps == 0) {
    throw ConfigError("replications must be at least 1");
  }
  std::vector<std::vector<SweepRow>> per_dim(spec.dims.size());
  parallel_for(spec.dims.size(), opts.threads, [&](std::size_t d) {
    const std::size_t p = spec.dims[d];
    const auto start = std::chrono::steady_clock::now();
    const Vector zero = Vector::Zero(static_cast<Eigen::Index>(p));
    const Matrix cov = spec.proposal_cov_scale * Matrix::Identity(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    const auto u = owen_scramble(sobol(spec.M, p), ScrambleSeed{derive_seed(base_seed, {p})});
    PointMatrix y = gaussian_inverse_transform(u, zero, cov);
    const GaussianProposal q(zero, cov);
    const std::vector<std::size_t> assignment(spec.M, 0);
    const WeightedSample sample = standard_weights(std::move(y), std::span(&q, 1), assignment, standard_normal_target(p));
    const Vector is_estimate = sample.points.transpose() * sample.w_bar;
    const double sample_ess = ess(sample.w_bar);
    const double setup_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    for (const auto method : spec.methods) {
      const auto method_start = std::chrono::steady_clock::now();
      std::vector<double> err_is;
      std::vector<double> err_truth;
      const std::size_t runs = method == Resampler::kIsp ? 1 : reps;
      for (std::size_t r = 0; r < runs; ++r) {
        std::vector<std::size_t> idx;
        switch (method) {
          case Resampler::kIsp: {
            ResampleConfig rc;
            rc.n = spec.n;
            idx = isp_select(sample, rc).indices;
            break;
          }
          case Resampler::kMultinomial:
            idx = multinomial_indices(sample.w_bar, spec.n, base_seed + r);
            break;
          case Resampler::kSystematic:
            idx = systematic_indices(sample.w_bar, spec.n, base_seed + r);
            break;
        }
        const Vector resample_mean = gather_rows(sample.points, idx).colwise().mean().transpose();
        err_is.push_back(coordinate_mse(resample_mean, is_estimate));
        err_truth.push_back(coordinate_mse(resample_mean, zero));
      }
      const auto is = log_summary(err_is);
      const auto truth = log_summary(err_truth);
      SweepRow row;
      row.cell_id = std::string(to_string(method)) + "_p" + std::to_string(p);
      row.p = p;
      row.method = std::string(to_string(method));
      row.M = spec.M;
      row.n = spec.n;
      row.ess = sample_ess;
      row.logmse_is_mean = is.mean;
      row.logmse_is_min = is.min;
      row.logmse_is_max = is.max;
      row.logmse_truth_mean = truth.mean;
      row.logmse_truth_min = truth.min;
      row.logmse_truth_max = truth.max;
      row.runs = runs;
      row.runtime_s = opts.record_timing
                          ? setup_s + std::chrono::duration<double>(std::chrono::steady_clock::now() - method_start).count()
                          : 0.0;
      per_dim[d].push_back(row);
    }
  });
  std::vector<SweepRow> rows;
  for (auto& block : per_dim) {
    rows.insert(rows.end(), block.begin(), block.end());
  }
  return rows;
}

}  // namespace pqmc
