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

#include <pqmc/estimators.hpp>

#include <cmath>
#include <limits>

#include <pqmc/error.hpp>

namespace pqmc {

namespace {

Vector iteration_ess(const RunResult& result) {
  Vector out(static_cast<Eigen::Index>(result.records.size()));
  for (std::size_t t = 0; t < result.records.size(); ++t) {
    out(static_cast<Eigen::Index>(t)) = result.records[t].ess;
  }
  return out;
}

}  // namespace

Integrand identity_integrand(std::size_t p) {
  return {p, [p](std::span<const double> x) {
            Vector v(static_cast<Eigen::Index>(p));
            for (std::size_t d = 0; d < p; ++d) {
              v(static_cast<Eigen::Index>(d)) = x[d];
            }
            return v;
          }};
}

Integrand constant_integrand() {
  return {1, [](std::span<const double>) { return Vector::Ones(1); }};
}

Vector correction_weights(const Vector& per_iteration_ess) {
  if (per_iteration_ess.size() == 0 || !per_iteration_ess.allFinite() || (per_iteration_ess.array() <= 0.0).any()) {
    throw DomainError("correction_weights: ESS values must be positive and finite");
  }
  return per_iteration_ess / per_iteration_ess.sum();
}

EstimatorOutput combined_estimate(const RunResult& result, const Integrand& h, const Vector& alpha,
                                  std::optional<double> z) {
  const auto t_count = result.records.size();
  if (t_count == 0) {
    throw DomainError("estimate: run has no iterations");
  }
  if (static_cast<std::size_t>(alpha.size()) != t_count) {
    throw DomainError("estimate: one alpha per iteration is required");
  }
  if (z && !(*z > 0.0)) {
    throw DomainError("estimate: known normalizing constant must be positive");
  }

  EstimatorOutput out;
  out.alpha = alpha;
  out.per_iteration_ess = iteration_ess(result);
  out.per_iteration_max_log_w.resize(static_cast<Eigen::Index>(t_count));

  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < t_count; ++t) {
    const double m = result.records[t].sample.log_w.maxCoeff();
    out.per_iteration_max_log_w(static_cast<Eigen::Index>(t)) = m;
    shift = std::max(shift, m);
  }

  // sum_t alpha_t / N_t sum_i exp(log_w - shift) [h(x)] for h and for the constant 1.
  Vector weighted_h = Vector::Zero(static_cast<Eigen::Index>(h.out_dim));
  double weighted_one = 0.0;
  for (std::size_t t = 0; t < t_count; ++t) {
    const auto& sample = result.records[t].sample;
    Vector sum_h = Vector::Zero(static_cast<Eigen::Index>(h.out_dim));
    double sum_one = 0.0;
    for (Eigen::Index i = 0; i < sample.points.rows(); ++i) {
      const double w = std::exp(sample.log_w(i) - shift);
      if (w == 0.0) {
        continue;
      }
      sum_h += w * h.h(row_span(sample.points, i));
      sum_one += w;
    }
    // Divide by N_t before scaling so a run of unit weights gives exactly alpha_t.
    const auto n_t = static_cast<double>(sample.points.rows());
    const double a = alpha(static_cast<Eigen::Index>(t));
    weighted_h += a * (sum_h / n_t);
    weighted_one += a * (sum_one / n_t);
  }

  out.z_estimate = std::exp(shift + std::log(weighted_one));
  if (z) {
    out.mean_estimate = std::exp(shift - std::log(*z)) * weighted_h;
  } else {
    out.mean_estimate = weighted_h / weighted_one;
  }
  return out;
}

EstimatorOutput standard_estimate(const RunResult& result, const Integrand& h, std::optional<double> z) {
  const auto t_count = static_cast<Eigen::Index>(result.records.size());
  if (t_count == 0) {
    throw DomainError("estimate: run has no iterations");
  }
  return combined_estimate(result, h, Vector::Constant(t_count, 1.0 / static_cast<double>(t_count)), z);
}

EstimatorOutput weighted_estimate(const RunResult& result, const Integrand& h, std::optional<double> z) {
  if (result.records.empty()) {
    throw DomainError("estimate: run has no iterations");
  }
  return combined_estimate(result, h, correction_weights(iteration_ess(result)), z);
}

}  // namespace pqmc
