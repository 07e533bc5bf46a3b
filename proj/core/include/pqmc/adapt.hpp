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

#ifndef PQMC_ADAPT_HPP
#define PQMC_ADAPT_HPP

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <pqmc/model.hpp>
#include <pqmc/types.hpp>
#include <pqmc/weights.hpp>

/**
 * \file
 * \brief Proposal covariance adaptation.
 *
 * The lookback update is a single EM step that reuses the proposals which
 * generated the sample, so it needs no density evaluations beyond those
 * already done for the weights. The exact update runs EM over the
 * covariances of a fixed-center, equal-weight mixture.
 */

namespace pqmc {

enum class AdaptMode { kStatic, kLookback, kExactEm };

/**
 * Which responsibilities enter the lookback scatter. kOwn weights each point's
 * scatter about the center of the proposal that drew it by that proposal's
 * responsibility alone. kAll sums the scatter about every center weighted by
 * every responsibility, which is the exact one-step EM update.
 */
enum class LookbackForm { kOwn, kAll };

std::string_view to_string(LookbackForm form) noexcept;
/// Parses "own" or "all"; throws ConfigError otherwise.
LookbackForm parse_lookback_form(std::string_view name);

std::string_view to_string(AdaptMode mode) noexcept;
/// Parses "static", "lookback" or "exact_em"; throws ConfigError otherwise.
AdaptMode parse_adapt_mode(std::string_view name);

struct AdaptConfig {
  AdaptMode mode = AdaptMode::kStatic;
  /// Replace the adapted covariance by (trace / p) I after each update.
  bool isotropic = false;
  std::size_t em_max_iters = 10;
  /// Lower bound on eigenvalues of every adapted covariance.
  double cov_floor = 1e-8;
  /// The engine default is the exact one-step EM form.
  LookbackForm lookback_form = LookbackForm::kAll;
};

/**
 * sum_{k,j} w_bar_{kj} r_{kj} (x_{kj} - mu_k)(x_{kj} - mu_k)^T with
 * r_{kj} = q_k(x_{kj}) / sum_i q_i(x_{kj}) and k the proposal that drew x_{kj}.
 *
 * The result is symmetrized and eigenvalue-floored at `cov_floor`.
 * Throws AdaptationError if it is still not positive definite.
 */
Matrix lookback_covariance(const WeightedSample& weighted, std::span<const GaussianProposal> proposals,
                           std::span<const std::size_t> assignment, double cov_floor = 1e-8);

/// Same, with log q_k(x_i) already available as an n x K matrix.
Matrix lookback_covariance(const WeightedSample& weighted, std::span<const GaussianProposal> proposals,
                           std::span<const std::size_t> assignment, const Matrix& log_q, double cov_floor = 1e-8,
                           LookbackForm form = LookbackForm::kOwn);

/// (trace(cov) / p) I_p.
Matrix isotropize(const Matrix& cov, std::size_t p);

/**
 * (A + A^T) / 2 with eigenvalues raised to at least `floor`. A matrix already
 * above the floor is returned symmetrized but otherwise untouched.
 */
Matrix floor_covariance(const Matrix& cov, double floor);

struct EmResult {
  std::vector<Matrix> covariances;
  /// Weighted log-likelihood sum_i w_bar_i log(K^{-1} sum_k N(x_i | mu_k, C_k)) before and after each iteration.
  std::vector<double> objectives;
  /// Components left at their initial covariance because their responsibility mass vanished.
  std::vector<std::size_t> frozen_components;
};

/// EM over covariances only; centers fixed, mixture weights fixed at 1/K.
EmResult exact_covariance_em_trace(const WeightedSample& weighted, std::span<const Vector> centers,
                                   std::span<const Matrix> init_covs, const AdaptConfig& cfg);

std::vector<Matrix> exact_covariance_em(const WeightedSample& weighted, std::span<const Vector> centers,
                                        std::span<const Matrix> init_covs, const AdaptConfig& cfg);

}  // namespace pqmc

#endif
