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

#ifndef PQMC_MODEL_HPP
#define PQMC_MODEL_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <pqmc/types.hpp>

/**
 * \file
 * \brief Target densities and Gaussian proposal components.
 */

namespace pqmc {

/// log N(x | mean, cov). Throws CovarianceError if `cov` is not positive definite.
double log_mvn_density(std::span<const double> x, const Vector& mean, const Matrix& cov);

/// Multivariate normal N(mean, cov) with a cached lower Cholesky factor. Immutable.
class GaussianProposal {
 public:
  /// Throws CovarianceError if `cov` is not symmetric positive definite or sizes disagree.
  GaussianProposal(Vector mean, Matrix cov);

  [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(mean_.size()); }
  [[nodiscard]] const Vector& mean() const noexcept { return mean_; }
  [[nodiscard]] const Matrix& covariance() const noexcept { return cov_; }
  /// Lower-triangular L with L L^T = covariance().
  [[nodiscard]] const Matrix& cholesky() const noexcept { return chol_; }
  /// -p/2 log(2 pi) - log det L.
  [[nodiscard]] double log_normalizer() const noexcept { return log_normalizer_; }

  [[nodiscard]] double log_density(std::span<const double> x) const;

 private:
  Vector mean_;
  Matrix cov_;
  Matrix chol_;
  double log_normalizer_;
};

/**
 * Unnormalized target density pi = gamma / Z, exposed as log gamma.
 *
 * `log_gamma` must be safe to call concurrently. `known_z` and `true_mean`
 * are set for benchmark targets whose moments are known in closed form.
 */
struct Target {
  std::string name;
  std::size_t dim = 0;
  std::function<double(std::span<const double>)> log_gamma;
  std::optional<double> known_z;
  std::optional<Vector> true_mean;
};

struct MixtureComponent {
  Vector mean;
  Matrix cov;
};

/// Finite Gaussian mixture: weights on the simplex, one component per weight.
struct MixtureSpec {
  std::vector<double> weights;
  std::vector<MixtureComponent> components;
};

/**
 * Target with log_gamma = log sum_i w_i N(x | mu_i, Sigma_i) (log-sum-exp),
 * known_z = 1 and true_mean = sum_i w_i mu_i.
 *
 * Throws SpecError on an empty or inconsistent spec, CovarianceError on a bad component.
 */
Target make_mixture_target(const MixtureSpec& spec, std::string name = "mixture");

/// Two-dimensional equal-weight mixture of five correlated normals (mean [0.540, 0.535]).
MixtureSpec five_normal_mixture_2d();

/// p-dimensional equal-weight mixture of three isotropic normals, sd 0.2, centers 0.375, 0.575, 0.700.
MixtureSpec three_normal_mixture(std::size_t p);

/// Standard normal N(0, I_p) as a target (Z = 1, mean 0).
Target standard_normal_target(std::size_t p);

}  // namespace pqmc

#endif
