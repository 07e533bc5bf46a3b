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


#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include <pqmc/error.hpp>
#include <pqmc/lds.hpp>
#include <pqmc/model.hpp>
#include <pqmc/resample.hpp>

#include "test_support.hpp"

namespace pqmc {
namespace {

WeightedSample weighted_from(PointMatrix points, const Vector& w_bar) {
  return make_weighted_sample(std::move(points), w_bar.array().log().matrix());
}

PointMatrix column(std::initializer_list<double> values) {
  PointMatrix out(static_cast<Eigen::Index>(values.size()), 1);
  Eigen::Index i = 0;
  for (const double v : values) {
    out(i++, 0) = v;
  }
  return out;
}

// Minimum of the criterion over all multisets of size n, by enumerating sorted index tuples.
double brute_force_optimum(const WeightedSample& weighted, std::size_t n) {
  const std::size_t m_count = weighted.size();
  std::vector<std::size_t> idx(n, 0);
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, std::size_t)> visit = [&](std::size_t pos, std::size_t start) {
    if (pos == n) {
      best = std::min(best, energy_objective(gather_rows(weighted.points, idx), weighted));
      return;
    }
    for (std::size_t m = start; m < m_count; ++m) {
      idx[pos] = m;
      visit(pos + 1, m);
    }
  };
  visit(0, 0);
  return best;
}

TEST(IspResample, SinglePointPicksHeavierOfTwo) {
  const auto weighted = weighted_from(column({0.0, 1.0}), Vector{{0.9, 0.1}});
  const auto sel = isp_select(weighted, {.n = 1});
  ASSERT_EQ(sel.indices.size(), 1U);
  EXPECT_EQ(sel.indices[0], 0U);
  EXPECT_EQ(isp_resample(weighted, {.n = 1})(0, 0), 0.0);
}

TEST(IspResample, FullSizeNoWorseThanIdentitySelection) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto weighted = weighted_from(testing::random_points(20, 2, seed), Vector::Constant(20, 0.05));
    const auto sel = isp_select(weighted, {.n = 20});
    const double identity = energy_objective(weighted.points, weighted);
    EXPECT_LE(energy_objective(gather_rows(weighted.points, sel.indices), weighted), identity + 1e-12);
  }
}

TEST(IspResample, MatchesExhaustiveSearchForSixPointsTwoPicks) {
  const auto weighted =
      weighted_from(column({-1.3, -0.2, 0.1, 0.7, 1.9, 2.4}), Vector{{0.05, 0.3, 0.2, 0.25, 0.15, 0.05}});
  const auto sel = isp_select(weighted, {.n = 2});
  const double achieved = energy_objective(gather_rows(weighted.points, sel.indices), weighted);
  EXPECT_NEAR(achieved, brute_force_optimum(weighted, 2), 1e-12);
  EXPECT_NEAR(sel.objective, achieved, 1e-12);
}

TEST(IspResample, OptimalOnMostSmallInstances) {
  std::mt19937_64 gen(2024);
  int optimal = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const std::size_t m_count = 2 + gen() % 7;
    const std::size_t n = 1 + gen() % 3;
    const std::size_t p = 1 + gen() % 2;
    const auto weighted =
        weighted_from(testing::random_points(m_count, p, 1000 + trial), testing::random_simplex(m_count, 5000 + trial));
    const auto sel = isp_select(weighted, {.n = n});
    const double achieved = energy_objective(gather_rows(weighted.points, sel.indices), weighted);
    const double best = brute_force_optimum(weighted, n);
    EXPECT_GE(achieved, best - 1e-10);
    if (achieved <= best + 1e-10) {
      ++optimal;
    }
  }
  EXPECT_GE(optimal, 90);
}

TEST(IspResample, CriterionNeverIncreasesAcrossPasses) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto weighted = weighted_from(testing::random_points(200, 2, seed), testing::random_simplex(200, seed + 50));
    const auto sel = isp_select(weighted, {.n = 25});
    double previous = sel.greedy_objective;
    for (const double value : sel.pass_objectives) {
      EXPECT_LE(value, previous);
      previous = value;
    }
    EXPECT_LE(sel.pass_objectives.size(), 10U);
    EXPECT_NEAR(sel.objective, energy_objective(gather_rows(weighted.points, sel.indices), weighted), 1e-12);
  }
}

TEST(IspResample, Deterministic) {
  const auto weighted = weighted_from(testing::random_points(300, 3, 1), testing::random_simplex(300, 2));
  const auto a = isp_select(weighted, {.n = 30});
  const auto b = isp_select(weighted, {.n = 30});
  EXPECT_EQ(a.indices, b.indices);
  EXPECT_EQ(a.objective, b.objective);
  const auto c = isp_select(weighted, pairwise_distances(weighted.points), {.n = 30});
  EXPECT_EQ(a.indices, c.indices);
}

TEST(IspResample, ErrorCases) {
  const auto weighted = weighted_from(column({0.0, 1.0}), Vector{{0.5, 0.5}});
  EXPECT_THROW(isp_select(weighted, {.n = 0}), DomainError);
  WeightedSample zero = weighted;
  zero.w_bar.setZero();
  EXPECT_THROW(isp_select(zero, {.n = 1}), DegenerateWeightsError);
  EXPECT_THROW(isp_select(weighted, pairwise_distances(column({0.0, 1.0, 2.0})), {.n = 1}), DomainError);
}

TEST(MultinomialResample, SinglePositiveWeightGivesCopies) {
  const PointMatrix y = column({3.0, 4.0, 5.0});
  const auto out = multinomial_indices(Vector{{0.0, 1.0, 0.0}}, 50, 7);
  EXPECT_TRUE(std::all_of(out.begin(), out.end(), [](std::size_t i) { return i == 1; }));
  const auto weighted = make_weighted_sample(y, Vector{{-std::numeric_limits<double>::infinity(), 0.0,
                                                        -std::numeric_limits<double>::infinity()}});
  EXPECT_TRUE((multinomial_resample(weighted, 20, 3).array() == 4.0).all());
}

TEST(MultinomialResample, FrequenciesConcentrate) {
  const std::size_t n = 100000;
  const auto idx = multinomial_indices(Vector::Constant(5, 0.2), n, 11);
  std::vector<double> counts(5, 0.0);
  for (const auto i : idx) {
    counts[i] += 1.0;
  }
  const double band = 3.0 * std::sqrt(0.2 * 0.8 / static_cast<double>(n));
  for (const double c : counts) {
    EXPECT_NEAR(c / static_cast<double>(n), 0.2, band);
  }
}

TEST(MultinomialResample, DeterministicPerSeed) {
  const Vector w = testing::random_simplex(40, 3);
  EXPECT_EQ(multinomial_indices(w, 100, 5), multinomial_indices(w, 100, 5));
  EXPECT_NE(multinomial_indices(w, 100, 5), multinomial_indices(w, 100, 6));
}

TEST(SystematicResample, UniformWeightsSelectEachPointOnce) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto idx = systematic_indices(Vector::Constant(17, 1.0 / 17.0), 17, seed);
    std::sort(idx.begin(), idx.end());
    for (std::size_t i = 0; i < 17; ++i) {
      EXPECT_EQ(idx[i], i);
    }
  }
}

TEST(SystematicResample, HalfHalfGivesTwoEach) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto idx = systematic_indices(Vector{{0.5, 0.5}}, 4, seed);
    EXPECT_EQ(std::count(idx.begin(), idx.end(), 0U), 2);
    EXPECT_EQ(std::count(idx.begin(), idx.end(), 1U), 2);
  }
}

TEST(SystematicResample, CountsWithinFloorAndCeiling) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Vector w = testing::random_simplex(30, seed);
    const std::size_t n = 97;
    const auto idx = systematic_indices(w, n, seed + 100);
    ASSERT_EQ(idx.size(), n);
    EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end()));
    for (Eigen::Index m = 0; m < w.size(); ++m) {
      const auto count = static_cast<double>(std::count(idx.begin(), idx.end(), static_cast<std::size_t>(m)));
      const double expected = static_cast<double>(n) * w(m);
      EXPECT_GE(count, std::floor(expected - 1e-9));
      EXPECT_LE(count, std::ceil(expected + 1e-9));
    }
  }
}

TEST(Resample, EnergyOrderingOnFiveNormalTarget) {
  const auto target = make_mixture_target(five_normal_mixture_2d());
  PointMatrix y = sobol(1000, 2).values();
  Vector log_w(y.rows());
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    log_w(i) = target.log_gamma(row_span(y, i));
  }
  const auto weighted = make_weighted_sample(std::move(y), std::move(log_w));
  const double isp = energy_objective(isp_resample(weighted, {.n = 100}), weighted);
  double multinomial = 0.0;
  double systematic = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    multinomial += energy_objective(multinomial_resample(weighted, 100, seed), weighted) / 20.0;
    systematic += energy_objective(systematic_resample(weighted, 100, seed), weighted) / 20.0;
  }
  EXPECT_LT(isp, multinomial);
  EXPECT_LT(isp, systematic);
}

TEST(Resample, RejectsInvalidWeights) {
  EXPECT_THROW(multinomial_indices(Vector{{0.5, -0.1}}, 3, 0), DegenerateWeightsError);
  EXPECT_THROW(systematic_indices(Vector::Zero(3), 3, 0), DegenerateWeightsError);
  EXPECT_THROW(systematic_indices(Vector{{std::nan(""), 1.0}}, 3, 0), DegenerateWeightsError);
}

}  // namespace
}  // namespace pqmc
