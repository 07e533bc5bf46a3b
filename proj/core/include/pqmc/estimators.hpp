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

#ifndef PQMC_ESTIMATORS_HPP
#define PQMC_ESTIMATORS_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>

#include <pqmc/engine.hpp>
#include <pqmc/estimator_output.hpp>
#include <pqmc/types.hpp>

/**
 * \file
 * \brief Estimators of E_pi[h(X)] and of the normalizing constant from a population run.
 *
 * The standard estimator averages every weighted point of every iteration
 * equally; the weighted estimator combines per-iteration averages with
 * weights proportional to each iteration's effective sample size. Weight sums
 * are shifted by the largest log-weight of the run, and h may take negative values.
 */

namespace pqmc {

/// Vector-valued integrand h(x).
struct Integrand {
  std::size_t out_dim = 1;
  std::function<Vector(std::span<const double>)> h;
};

/// h(x) = x.
Integrand identity_integrand(std::size_t p);

/// h(x) = 1.
Integrand constant_integrand();

/// alpha_t = ess_t / sum_i ess_i. Throws DomainError on an empty, non-finite or non-positive input.
Vector correction_weights(const Vector& per_iteration_ess);

/**
 * Average of w h over all T iterations. With `z`, divided by z; otherwise
 * self-normalized by the estimate of Z, which is reported either way.
 *
 * Throws DomainError if the result has no iterations.
 */
EstimatorOutput standard_estimate(const RunResult& result, const Integrand& h, std::optional<double> z = std::nullopt);

/// ESS-weighted combination of per-iteration estimates; with equal ESS it equals standard_estimate().
EstimatorOutput weighted_estimate(const RunResult& result, const Integrand& h, std::optional<double> z = std::nullopt);

/// Combination with caller-chosen per-iteration weights `alpha` (nonnegative, summing to 1).
EstimatorOutput combined_estimate(const RunResult& result, const Integrand& h, const Vector& alpha,
                                  std::optional<double> z = std::nullopt);

}  // namespace pqmc

#endif
