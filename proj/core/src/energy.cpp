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

#include <pqmc/energy.hpp>

#include <cmath>
#include <string>

#include <pqmc/error.hpp>

namespace pqmc {

DistanceMatrix pairwise_distances(const PointMatrix& points, std::size_t cap_bytes) {
  const auto m = static_cast<std::size_t>(points.rows());
  if (m == 0) {
    throw DomainError("pairwise_distances: empty point set");
  }
  if (m > cap_bytes / sizeof(double) / m) {
    throw CapacityError("pairwise_distances: " + std::to_string(m) + " points need more than " +
                        std::to_string(cap_bytes) + " bytes");
  }
  std::vector<double> d(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const auto xi = points.row(static_cast<Eigen::Index>(i));
    for (std::size_t j = i + 1; j < m; ++j) {
      const double dist = (xi - points.row(static_cast<Eigen::Index>(j))).norm();
      d[i * m + j] = dist;
      d[j * m + i] = dist;
    }
  }
  return {m, std::move(d)};
}

double energy_objective(const PointMatrix& candidates, const PointMatrix& points, const Vector& w_bar) {
  if (candidates.cols() != points.cols() || points.rows() != w_bar.size()) {
    throw DomainError("energy_objective: dimension mismatch");
  }
  const auto n = candidates.rows();
  double attraction = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index m = 0; m < points.rows(); ++m) {
      if (w_bar(m) != 0.0) {
        attraction += w_bar(m) * (candidates.row(i) - points.row(m)).norm();
      }
    }
  }
  double repulsion = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      repulsion += (candidates.row(i) - candidates.row(j)).norm();
    }
  }
  const auto nd = static_cast<double>(n);
  return 2.0 / nd * attraction - 2.0 * repulsion / (nd * nd);
}

double energy_objective(const PointMatrix& candidates, const WeightedSample& weighted) {
  return energy_objective(candidates, weighted.points, weighted.w_bar);
}

}  // namespace pqmc
