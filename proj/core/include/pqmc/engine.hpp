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

#ifndef PQMC_ENGINE_HPP
#define PQMC_ENGINE_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <pqmc/adapt.hpp>
#include <pqmc/estimator_output.hpp>
#include <pqmc/model.hpp>
#include <pqmc/types.hpp>
#include <pqmc/weights.hpp>

/**
 * \file
 * \brief Population Monte Carlo iteration loops.
 *
 * Each iteration draws J points from each of K Gaussian proposals, weights
 * them against the target, resamples K new centers from the weighted
 * population and adapts the covariance. run_pmc() uses pseudo-random draws;
 * run_pqmc() uses independently scrambled Sobol' points per proposal.
 */

namespace pqmc {

enum class Sampler { kMc, kQmc };
enum class Weighting { kStandard, kDm };
enum class Resampler { kMultinomial, kSystematic, kIsp };

std::string_view to_string(Sampler s) noexcept;
std::string_view to_string(Weighting w) noexcept;
std::string_view to_string(Resampler r) noexcept;
/// Each parser throws ConfigError on an unknown name.
Sampler parse_sampler(std::string_view name);
Weighting parse_weighting(std::string_view name);
Resampler parse_resampler(std::string_view name);

/// Initial centers: the first K unscrambled Sobol' points mapped to [lo, hi]^p.
struct SobolBox {
  double lo = 0.0;
  double hi = 1.0;
};

/// Initial centers given row by row (K x p).
using InitCenters = std::variant<SobolBox, PointMatrix>;

struct RunConfig {
  std::size_t K = 1;
  std::size_t J = 1;
  std::size_t T = 1;
  /// Initial proposal covariance is sigma0^2 I.
  double sigma0 = 1.0;
  InitCenters init_centers = SobolBox{};
  Sampler sampler = Sampler::kMc;
  Weighting weighting = Weighting::kDm;
  Resampler resampler = Resampler::kMultinomial;
  AdaptConfig adapt;
  std::uint64_t seed = 0;
};

/// Throws ConfigError unless K, J, T >= 1 and sigma0 > 0.
void validate(const RunConfig& cfg);

struct IterationRecord {
  /// 1-based iteration index.
  std::size_t t = 0;
  std::vector<GaussianProposal> proposals;
  /// K * J weighted points; rows k*J .. k*J+J-1 were drawn from proposal k.
  WeightedSample sample;
  double ess = 0.0;
  /// Global covariance in force at this iteration (the mean of the per-proposal ones under exact EM).
  Matrix sigma;
  /// True when covariance adaptation failed after this iteration and the previous covariance was kept.
  bool adaptation_fallback = false;
};

struct RunResult {
  RunConfig config;
  std::string target_name;
  std::vector<IterationRecord> records;
  /// Number of log-gamma evaluations, always T * K * J.
  std::size_t target_evaluations = 0;
  double wall_time_s = 0.0;
  /// Filled by callers, e.g. "standard" and "weighted".
  std::map<std::string, EstimatorOutput> estimates;
};

/**
 * Pseudo-random population Monte Carlo. Requires cfg.sampler == kMc.
 *
 * Throws ConfigError on an invalid configuration and RunAbortedError if the
 * weights of some iteration are degenerate.
 */
RunResult run_pmc(const RunConfig& cfg, const Target& target);

/// Quasi-Monte Carlo variant. Requires cfg.sampler == kQmc; otherwise as run_pmc().
RunResult run_pqmc(const RunConfig& cfg, const Target& target);

/// Dispatches on cfg.sampler.
RunResult run_population(const RunConfig& cfg, const Target& target);

/**
 * Text rendering of every deterministic field of a result, with doubles in
 * hexadecimal so that equal strings mean bitwise-equal results. Wall time is omitted.
 */
std::string serialize(const RunResult& result);

}  // namespace pqmc

#endif
