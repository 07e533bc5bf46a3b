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

#ifndef PQMC_ENERGY_HPP
#define PQMC_ENERGY_HPP

#include <cstddef>
#include <span>
#include <vector>

#include <pqmc/types.hpp>
#include <pqmc/weights.hpp>

namespace pqmc {

/// Default memory cap for a dense distance matrix (2 GiB).
inline constexpr std::size_t kDefaultDistanceCapBytes = std::size_t{2} << 30U;

/// Dense symmetric matrix of Euclidean distances. Read-only after construction.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::size_t size, std::vector<double> values) : size_{size}, values_{std::move(values)} {}

  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * size_ + j]; }
  [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept { return {values_.data() + i * size_, size_}; }

 private:
  std::size_t size_ = 0;
  std::vector<double> values_;
};

/// All pairwise distances between rows. Throws CapacityError if M^2 doubles exceed `cap_bytes`.
DistanceMatrix pairwise_distances(const PointMatrix& points, std::size_t cap_bytes = kDefaultDistanceCapBytes);

/**
 * Weighted energy criterion of a candidate set against a weighted sample:
 * (2/n) sum_i sum_m w_bar_m |x_i - y_m| - (1/n^2) sum_i sum_j |x_i - x_j|.
 */
double energy_objective(const PointMatrix& candidates, const WeightedSample& weighted);

/// Same criterion with the weighted sample given as points and normalized weights.
double energy_objective(const PointMatrix& candidates, const PointMatrix& points, const Vector& w_bar);

}  // namespace pqmc

#endif
