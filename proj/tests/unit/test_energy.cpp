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


#include <cmath>

#include <Eigen/QR>
#include <gtest/gtest.h>

#include <pqmc/energy.hpp>
#include <pqmc/error.hpp>

#include "test_support.hpp"

namespace pqmc {
namespace {

TEST(PairwiseDistances, SinglePointIsZero) {
  const auto d = pairwise_distances(PointMatrix::Constant(1, 3, 0.7));
  ASSERT_EQ(d.size(), 1U);
  EXPECT_EQ(d(0, 0), 0.0);
}

TEST(PairwiseDistances, ThreeFourFive) {
  PointMatrix x(2, 2);
  x << 0.0, 0.0, 3.0, 4.0;
  const auto d = pairwise_distances(x);
  EXPECT_EQ(d(0, 1), 5.0);
  EXPECT_EQ(d(1, 0), 5.0);
  EXPECT_EQ(d(1, 1), 0.0);
}

TEST(PairwiseDistances, MatchesNaiveLoop) {
  const PointMatrix x = testing::random_points(10, 4, 17, -3.0, 3.0);
  const auto d = pairwise_distances(x);
  for (Eigen::Index i = 0; i < 10; ++i) {
    for (Eigen::Index j = 0; j < 10; ++j) {
      double s = 0.0;
      for (Eigen::Index c = 0; c < 4; ++c) {
        s += (x(i, c) - x(j, c)) * (x(i, c) - x(j, c));
      }
      EXPECT_NEAR(d(static_cast<std::size_t>(i), static_cast<std::size_t>(j)), std::sqrt(s), 1e-12);
    }
  }
}

TEST(PairwiseDistances, MetricAxioms) {
  const PointMatrix x = testing::random_points(30, 3, 5);
  const auto d = pairwise_distances(x);
  for (std::size_t i = 0; i < 30; ++i) {
    EXPECT_EQ(d(i, i), 0.0);
    for (std::size_t j = 0; j < 30; ++j) {
      EXPECT_EQ(d(i, j), d(j, i));
      EXPECT_GE(d(i, j), 0.0);
      for (std::size_t k = 0; k < 30; k += 7) {
        EXPECT_LE(d(i, j), d(i, k) + d(k, j) + 1e-15);
      }
    }
  }
}

TEST(PairwiseDistances, RespectsMemoryCap) {
  const PointMatrix x = testing::random_points(100, 2, 1);
  EXPECT_THROW(pairwise_distances(x, 100 * 100 * sizeof(double) - 1), CapacityError);
  EXPECT_NO_THROW(pairwise_distances(x, 100 * 100 * sizeof(double)));
  EXPECT_THROW(pairwise_distances(PointMatrix(0, 2)), DomainError);
}

TEST(EnergyObjective, SingleCandidateIsTwiceWeightedDistance) {
  const PointMatrix y = testing::random_points(12, 2, 3);
  const Vector w = testing::random_simplex(12, 4);
  PointMatrix x(1, 2);
  x << 0.25, 0.8;
  double expected = 0.0;
  for (Eigen::Index m = 0; m < 12; ++m) {
    expected += w(m) * (x.row(0) - y.row(m)).norm();
  }
  EXPECT_NEAR(energy_objective(x, y, w), 2.0 * expected, 1e-14);
}

TEST(EnergyObjective, SymmetricPairHandValue) {
  PointMatrix y(2, 1);
  y << -1.0, 1.0;
  const Vector w{{0.5, 0.5}};
  EXPECT_EQ(energy_objective(PointMatrix::Zero(1, 1), y, w), 2.0);
}

TEST(EnergyObjective, TranslationAndRotationInvariance) {
  const PointMatrix y = testing::random_points(40, 3, 6, -1.0, 1.0);
  const Vector w = testing::random_simplex(40, 7);
  const PointMatrix x = testing::random_points(6, 3, 8, -1.0, 1.0);
  const double base = energy_objective(x, y, w);

  const Matrix q = Eigen::HouseholderQR<Matrix>(testing::random_spd(3, 9)).householderQ();
  const Eigen::RowVectorXd shift = Eigen::RowVectorXd::LinSpaced(3, -4.0, 7.0);
  const PointMatrix y2 = (y * q.transpose()).rowwise() + shift;
  const PointMatrix x2 = (x * q.transpose()).rowwise() + shift;
  EXPECT_NEAR(energy_objective(x2, y2, w), base, 1e-10);
}

TEST(EnergyObjective, MovingCandidateAwayIncreasesObjective) {
  const PointMatrix y = testing::random_points(25, 2, 10);
  const Vector w = testing::random_simplex(25, 11);
  PointMatrix x = testing::random_points(4, 2, 12);
  double previous = energy_objective(x, y, w);
  for (const double offset : {2.0, 5.0, 20.0, 100.0}) {
    PointMatrix moved = x;
    moved(0, 0) = 1.0 + offset;
    moved(0, 1) = 1.0 + offset;
    const double value = energy_objective(moved, y, w);
    EXPECT_GT(value, previous);
    previous = value;
  }
}

TEST(EnergyObjective, DimensionMismatchThrows) {
  EXPECT_THROW(energy_objective(PointMatrix::Zero(1, 2), PointMatrix::Zero(3, 1), Vector::Constant(3, 1.0 / 3)),
               DomainError);
  EXPECT_THROW(energy_objective(PointMatrix::Zero(1, 1), PointMatrix::Zero(3, 1), Vector::Constant(2, 0.5)),
               DomainError);
}

}  // namespace
}  // namespace pqmc
