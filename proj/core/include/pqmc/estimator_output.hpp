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

#ifndef PQMC_ESTIMATOR_OUTPUT_HPP
#define PQMC_ESTIMATOR_OUTPUT_HPP

#include <pqmc/types.hpp>

namespace pqmc {

/// Result of a population estimator over all iterations of a run.
struct EstimatorOutput {
  /// Estimate of E_pi[h(X)], one entry per integrand component.
  Vector mean_estimate;
  double z_estimate = 0.0;
  /// Per-iteration combination weights, on the simplex.
  Vector alpha;
  Vector per_iteration_ess;
  /// Largest raw log-weight of each iteration; a very negative value flags a misleading ESS.
  Vector per_iteration_max_log_w;
};

}  // namespace pqmc

#endif
