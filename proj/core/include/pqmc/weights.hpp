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

#ifndef PQMC_WEIGHTS_HPP
#define PQMC_WEIGHTS_HPP

#include <cstddef>
#include <span>

#include <pqmc/model.hpp>
#include <pqmc/types.hpp>

/**
 * \file
 * \brief Importance weights (standard and deterministic mixture),
 * normalization and effective sample size.
 *
 * Weights are carried as log-weights; normalized weights are derived with a
 * max shift so that targets with tiny densities (high dimension) do not underflow.
 */

namespace pqmc {

/// Points with unnormalized log-weights and the matching normalized weights.
struct WeightedSample {
  PointMatrix points;
  Vector log_w;
  Vector w_bar;

  [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(points.rows()); }
  [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(points.cols()); }
};

/// log(sum_i exp(v_i)); -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> values);

/**
 * w_bar_i = exp(log_w_i - logsumexp(log_w)).
 *
 * Throws DegenerateWeightsError if every entry is -inf, or any entry is NaN or +inf.
 */
Vector normalize(const Vector& log_w);

/// Effective sample size 1 / sum w_bar_i^2 of normalized weights.
double ess(const Vector& w_bar);

/// Builds a WeightedSample from points and log-weights, normalizing them.
WeightedSample make_weighted_sample(PointMatrix points, Vector log_w);

/// n x K matrix of log q_k(x_i).
Matrix proposal_log_densities(const PointMatrix& points, std::span<const GaussianProposal> proposals);

/// log gamma(x_i) for every row.
Vector target_log_densities(const PointMatrix& points, const Target& target);

/// log_w_i = log gamma(x_i) - log q_{assignment[i]}(x_i).
WeightedSample standard_weights(PointMatrix points, std::span<const GaussianProposal> proposals,
                                std::span<const std::size_t> assignment, const Target& target);

/// log_w_i = log gamma(x_i) - log( K^{-1} sum_k q_k(x_i) ).
WeightedSample dm_weights(PointMatrix points, std::span<const GaussianProposal> proposals, const Target& target);

/// Standard log-weights from precomputed log gamma and log q (n x K).
Vector standard_log_weights(const Vector& log_gamma, const Matrix& log_q, std::span<const std::size_t> assignment);

/// Deterministic-mixture log-weights from precomputed log gamma and log q (n x K).
Vector dm_log_weights(const Vector& log_gamma, const Matrix& log_q);

}  // namespace pqmc

#endif
