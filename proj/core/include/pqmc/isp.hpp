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

#ifndef PQMC_ISP_HPP
#define PQMC_ISP_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <pqmc/types.hpp>
#include <pqmc/weights.hpp>

/**
 * \file
 * \brief Continuous importance support points by the convex-concave procedure.
 *
 * Unlike ISP resampling, the output points are free in R^p. Each sweep
 * minimizes a convex quadratic majorizer of the weighted energy criterion,
 * which has a closed-form minimizer per point, so the criterion never increases.
 */

namespace pqmc {

struct CcpConfig {
  std::size_t max_iters = 500;
  /// Stop once no point moves more than tol times the coordinate range of the sample.
  double tol = 1e-8;
  /// Distances below this are floored; points are kept at least this far from sample rows.
  double epsilon_guard = 1e-12;
  /// Starting points (n x p). When absent, a systematic resample jittered by 1e-6 times the range.
  std::optional<PointMatrix> init;
  std::uint64_t jitter_seed = 0;
};

struct CcpResult {
  PointMatrix points;
  /// Criterion at the starting points followed by its value after every accepted sweep.
  std::vector<double> objectives;
  std::size_t iterations = 0;
  /// Moves fell below tolerance, or a sweep failed to lower the criterion and was discarded.
  bool converged = false;
};

/// Runs the procedure and keeps the full criterion trace.
CcpResult isp_ccp_trace(const WeightedSample& weighted, std::size_t n, const CcpConfig& cfg = {});

/**
 * n points approximately minimizing the weighted energy criterion against `weighted`.
 *
 * Throws DomainError for n = 0 or a mismatched `init`, NumericError if an update is not finite.
 */
PointMatrix isp_ccp(const WeightedSample& weighted, std::size_t n, const CcpConfig& cfg = {});

/// isp_ccp() with every row weighted 1/M.
PointMatrix support_points(const PointMatrix& points, std::size_t n, const CcpConfig& cfg = {});

}  // namespace pqmc

#endif
