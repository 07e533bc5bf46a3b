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

#ifndef PQMC_RESAMPLE_HPP
#define PQMC_RESAMPLE_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include <pqmc/energy.hpp>
#include <pqmc/types.hpp>
#include <pqmc/weights.hpp>

/**
 * \file
 * \brief Resampling a weighted sample down to n unweighted points.
 *
 * Importance-support-point (ISP) resampling picks rows of the weighted
 * sample that minimize the weighted energy criterion; it is deterministic.
 * Multinomial and systematic resampling are the classical stochastic baselines.
 */

namespace pqmc {

struct ResampleConfig {
  std::size_t n = 1;
  std::size_t max_refine_passes = 10;
  /// Stop refining once a pass improves the criterion by less than this fraction.
  double tol = 1e-8;
  /// Used only by the stochastic baselines.
  std::uint64_t rng_seed = 0;
};

/// Selected rows plus the criterion trajectory of one ISP resampling call.
struct IspSelection {
  std::vector<std::size_t> indices;
  double greedy_objective = 0.0;
  /// Criterion after each refinement pass (empty if none ran).
  std::vector<double> pass_objectives;
  double objective = 0.0;
};

/**
 * Greedy sequential selection followed by coordinate-wise refinement passes.
 *
 * Step i of the greedy phase picks the row minimizing the criterion of the
 * first i points; a refinement pass re-optimizes each point with the others
 * fixed, in ascending order. Ties within 1e-12 relative go to the lowest row
 * index, and a point only moves on a strict improvement. Duplicates are allowed.
 *
 * Throws DegenerateWeightsError if the sample has no positive weight.
 */
IspSelection isp_select(const WeightedSample& weighted, const ResampleConfig& cfg);

/// Same, reusing a precomputed distance matrix of `weighted.points`.
IspSelection isp_select(const WeightedSample& weighted, const DistanceMatrix& distances, const ResampleConfig& cfg);

/// Rows chosen by isp_select().
PointMatrix isp_resample(const WeightedSample& weighted, const ResampleConfig& cfg);

/// n i.i.d. categorical draws from w_bar.
std::vector<std::size_t> multinomial_indices(const Vector& w_bar, std::size_t n, std::uint64_t seed);

/// Systematic draws: one offset u ~ U[0, 1/n), positions u + i/n on the cumulative weights.
std::vector<std::size_t> systematic_indices(const Vector& w_bar, std::size_t n, std::uint64_t seed);

PointMatrix multinomial_resample(const WeightedSample& weighted, std::size_t n, std::uint64_t seed);
PointMatrix systematic_resample(const WeightedSample& weighted, std::size_t n, std::uint64_t seed);

}  // namespace pqmc

#endif
