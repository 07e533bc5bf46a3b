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

#ifndef PQMC_LDS_HPP
#define PQMC_LDS_HPP

#include <cstddef>
#include <cstdint>

#include <pqmc/types.hpp>

/**
 * \file
 * \brief Low-discrepancy point sets: Sobol' sequence, nested uniform
 * scrambling, normal inverse transform and exact star discrepancy.
 */

namespace pqmc {

/// Highest dimension covered by the embedded direction-number table.
inline constexpr std::size_t kMaxSobolDimension = 21;

/// Smallest and largest argument passed to the normal quantile by the inverse transform.
inline constexpr double kQuantileClamp = 1e-15;

/// Point set on the half-open unit cube [0,1)^p.
class UnitCubePoints {
 public:
  /// Takes ownership of `values`; throws DomainError if any entry lies outside [0,1) or the set is empty.
  explicit UnitCubePoints(PointMatrix values);

  [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(values_.cols()); }
  [[nodiscard]] const PointMatrix& values() const noexcept { return values_; }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  PointMatrix values_;
};

/// Seed for scrambling. The same seed and input always yield the same output.
struct ScrambleSeed {
  std::uint64_t value = 0;
};

/**
 * First `n` points of the Sobol' sequence in `p` dimensions, Gray-code order,
 * starting at index 0 (the origin). Joe-Kuo direction numbers, 32-bit precision.
 *
 * Throws UnsupportedDimensionError if p > kMaxSobolDimension, DomainError if n or p is zero.
 */
UnitCubePoints sobol(std::size_t n, std::size_t p);

/**
 * Nested uniform (Owen) scrambling of the leading 32 binary digits of every
 * coordinate. Each digit is flipped by a hash of (seed, dimension, digit
 * position, preceding digits), so points sharing a prefix share the same
 * permutation tree. Digits past the 32nd are filled by the same hash at the
 * leaf, which is the scrambled image of the trailing zeros.
 */
UnitCubePoints owen_scramble(const UnitCubePoints& points, ScrambleSeed seed);

/**
 * Standard normal quantile, Wichura's AS241 (PPND16) rational approximation.
 *
 * Throws DomainError unless 0 < u < 1.
 */
double inverse_normal_cdf(double u);

/**
 * Maps unit-cube rows to N(mean, cov): x = mean + L z with z_j = inverse_normal_cdf(u_j),
 * L the lower Cholesky factor of `cov`. Inputs are clamped to
 * [kQuantileClamp, 1 - kQuantileClamp] before the quantile is taken.
 *
 * Throws CovarianceError if `cov` is not positive definite, DomainError on dimension mismatch.
 */
PointMatrix gaussian_inverse_transform(const UnitCubePoints& u, const Vector& mean, const Matrix& cov);

/// Limits of the exact star-discrepancy computation.
inline constexpr std::size_t kStarDiscrepancyMaxPoints = 2048;
inline constexpr std::size_t kStarDiscrepancyMaxDim = 3;

/**
 * Exact star discrepancy D*_N: sup over anchored boxes [0,a) of
 * |fraction of points inside - volume|, enumerated over the critical grid of
 * point coordinates and 1. Cost is O(n^p); throws CapacityError past the limits.
 */
double star_discrepancy(const UnitCubePoints& points);

}  // namespace pqmc

#endif
