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

#ifndef PQMC_TYPES_HPP
#define PQMC_TYPES_HPP

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace pqmc {

/// n x p matrix, one point per row. Row-major so each point is contiguous.
using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// View of row `i` as a contiguous span.
inline std::span<const double> row_span(const PointMatrix& points, Eigen::Index i) {
  return {points.data() + i * points.cols(), static_cast<std::size_t>(points.cols())};
}

/// Rows of `points` selected by `indices`, in order (duplicates allowed).
inline PointMatrix gather_rows(const PointMatrix& points, std::span<const std::size_t> indices) {
  PointMatrix out(static_cast<Eigen::Index>(indices.size()), points.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = points.row(static_cast<Eigen::Index>(indices[i]));
  }
  return out;
}

}  // namespace pqmc

#endif
