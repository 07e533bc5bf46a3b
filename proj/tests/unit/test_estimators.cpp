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
#include <vector>

#include <gtest/gtest.h>

#include <pqmc/engine.hpp>
#include <pqmc/error.hpp>
#include <pqmc/estimators.hpp>

#include "test_support.hpp"

namespace pqmc {
namespace {

IterationRecord record_from(std::size_t t, PointMatrix points, Vector log_w) {
  IterationRecord rec;
  rec.t = t;
  rec.sample = make_weighted_sample(std::move(points), std::move(log_w));
  rec.ess = ess(rec.sample.w_bar);
  return rec;
}

RunResult result_from(std::vector<IterationRecord> records) {
  RunResult r;
  r.records = std::move(records);
  return r;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

TEST(StandardEstimate, EqualWeightsGiveSampleMean) {
  const PointMatrix x = testing::random_points(25, 3, 1, -2.0, 2.0);
  const auto result = result_from({record_from(1, x, Vector::Constant(25, -3.5))});
  const auto est = standard_estimate(result, identity_integrand(3));
  const Vector expected = x.colwise().mean().transpose();
  EXPECT_LT((est.mean_estimate - expected).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(est.z_estimate, std::exp(-3.5), 1e-15);
}

TEST(StandardEstimate, ConstantIntegrandSelfNormalizesToOne) {
  const auto result = result_from({record_from(1, testing::random_points(30, 2, 2), Vector::LinSpaced(30, -40.0, 3.0)),
                                   record_from(2, testing::random_points(30, 2, 3), Vector::LinSpaced(30, 5.0, -1.0))});
  EXPECT_EQ(standard_estimate(result, constant_integrand()).mean_estimate(0), 1.0);
  EXPECT_EQ(weighted_estimate(result, constant_integrand()).mean_estimate(0), 1.0);
}

TEST(StandardEstimate, PerfectProposalEstimatesUnitConstant) {
  const Vector mu{{0.1, 0.2}};
  const auto target = make_mixture_target({{1.0}, {{mu, 0.04 * Matrix::Identity(2, 2)}}});
  RunConfig cfg;
  cfg.K = 1;
  cfg.J = 49;
  cfg.T = 1;
  cfg.sigma0 = 0.2;
  cfg.init_centers = PointMatrix(mu.transpose());
  const auto result = run_pmc(cfg, target);
  EXPECT_EQ(standard_estimate(result, constant_integrand(), 1.0).z_estimate, 1.0);
  EXPECT_EQ(weighted_estimate(result, constant_integrand(), 1.0).z_estimate, 1.0);
}

TEST(CorrectionWeights, Examples) {
  const Vector uniform = correction_weights(Vector::Constant(7, 12.5));
  for (Eigen::Index t = 0; t < 7; ++t) {
    EXPECT_EQ(uniform(t), 1.0 / 7.0);
  }
  const Vector a = correction_weights(Vector{{100.0, 300.0}});
  EXPECT_EQ(a(0), 0.25);
  EXPECT_EQ(a(1), 0.75);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Vector ess_values = (testing::random_simplex(10, seed) * 1000.0).array() + 1.0;
    EXPECT_NEAR(correction_weights(ess_values).sum(), 1.0, 1e-15);
  }
}

TEST(CorrectionWeights, RejectsInvalidInput) {
  EXPECT_THROW(correction_weights(Vector(0)), DomainError);
  EXPECT_THROW(correction_weights(Vector{{1.0, 0.0}}), DomainError);
  EXPECT_THROW(correction_weights(Vector{{1.0, std::nan("")}}), DomainError);
}

TEST(WeightedEstimate, EqualEssMatchesStandardExactly) {
  // Each iteration has a perfect-looking weight profile, so every ESS is exactly J.
  std::vector<IterationRecord> records;
  for (std::size_t t = 1; t <= 3; ++t) {
    records.push_back(record_from(t, testing::random_points(16, 2, t), Vector::Constant(16, -0.5 * static_cast<double>(t))));
    ASSERT_EQ(records.back().ess, 16.0);
  }
  const auto result = result_from(std::move(records));
  for (const auto z : {std::optional<double>{}, std::optional<double>{2.0}}) {
    const auto s = standard_estimate(result, identity_integrand(2), z);
    const auto w = weighted_estimate(result, identity_integrand(2), z);
    EXPECT_TRUE((s.mean_estimate.array() == w.mean_estimate.array()).all());
    EXPECT_EQ(s.z_estimate, w.z_estimate);
  }
}

TEST(WeightedEstimate, TwoIterationHandOracle) {
  PointMatrix x1(2, 1);
  x1 << 1.0, 3.0;
  PointMatrix x2(3, 1);
  x2 << -1.0, 0.5, 2.0;
  const double w1[2] = {2.0, 1.0};
  const double w2[3] = {0.5, 1.5, 1.0};
  auto rec1 = record_from(1, x1, Vector{{std::log(w1[0]), std::log(w1[1])}});
  auto rec2 = record_from(2, x2, Vector{{std::log(w2[0]), std::log(w2[1]), std::log(w2[2])}});
  rec1.ess = 1.5;
  rec2.ess = 2.5;
  const auto result = result_from({rec1, rec2});

  const double a1 = 1.5 / 4.0;
  const double a2 = 2.5 / 4.0;
  const double z_hat = a1 * (w1[0] + w1[1]) / 2.0 + a2 * (w2[0] + w2[1] + w2[2]) / 3.0;
  const double wh = a1 * (w1[0] * 1.0 + w1[1] * 3.0) / 2.0 + a2 * (w2[0] * -1.0 + w2[1] * 0.5 + w2[2] * 2.0) / 3.0;

  const auto est = weighted_estimate(result, identity_integrand(1));
  EXPECT_NEAR(est.alpha(0), a1, 1e-15);
  EXPECT_NEAR(est.z_estimate, z_hat, 1e-12);
  EXPECT_NEAR(est.mean_estimate(0), wh / z_hat, 1e-12);
  const auto known = weighted_estimate(result, identity_integrand(1), 1.0);
  EXPECT_NEAR(known.mean_estimate(0), wh, 1e-12);
  EXPECT_NEAR(est.per_iteration_max_log_w(0), std::log(2.0), 1e-15);
  EXPECT_NEAR(est.per_iteration_max_log_w(1), std::log(1.5), 1e-15);
}

TEST(Estimators, SelfNormalizedMeanIgnoresTargetScale) {
  RunConfig cfg;
  cfg.K = 5;
  cfg.J = 10;
  cfg.T = 3;
  cfg.sigma0 = 0.2;
  cfg.resampler = Resampler::kSystematic;
  cfg.seed = 5;
  const auto base = run_pmc(cfg, make_mixture_target(five_normal_mixture_2d()));
  for (const double c : {1e-6, 3.0, 1e6}) {
    RunResult scaled = base;
    for (auto& rec : scaled.records) {
      rec.sample.log_w.array() += std::log(c);
    }
    for (const bool weighted : {false, true}) {
      const auto a = weighted ? weighted_estimate(base, identity_integrand(2)) : standard_estimate(base, identity_integrand(2));
      const auto b =
          weighted ? weighted_estimate(scaled, identity_integrand(2)) : standard_estimate(scaled, identity_integrand(2));
      EXPECT_LT(((b.mean_estimate - a.mean_estimate).array() / a.mean_estimate.array()).abs().maxCoeff(), 1e-10);
      EXPECT_NEAR(b.z_estimate / a.z_estimate, c, 1e-12 * c);
    }
  }
}

TEST(Estimators, HandlesSignedIntegrands) {
  PointMatrix x(4, 1);
  x << -2.0, -1.0, 1.0, 0.5;
  const auto result = result_from({record_from(1, x, Vector{{-600.0, -601.0, -600.5, -602.0}})});
  const auto est = standard_estimate(result, identity_integrand(1));
  const double w[4] = {1.0, std::exp(-1.0), std::exp(-0.5), std::exp(-2.0)};
  const double expected = (-2.0 * w[0] - 1.0 * w[1] + 1.0 * w[2] + 0.5 * w[3]) / (w[0] + w[1] + w[2] + w[3]);
  EXPECT_NEAR(est.mean_estimate(0), expected, 1e-14);
  EXPECT_NEAR(std::log(est.z_estimate), -600.0 + std::log((w[0] + w[1] + w[2] + w[3]) / 4.0), 1e-12);
}

TEST(Estimators, UnbiasedWithKnownConstant) {
  const auto target = make_mixture_target(five_normal_mixture_2d());
  RunConfig cfg;
  cfg.K = 20;
  cfg.J = 25;
  cfg.T = 4;
  cfg.sigma0 = 0.2;
  cfg.resampler = Resampler::kMultinomial;
  const int runs = 200;
  std::vector<Vector> estimates;
  for (int r = 0; r < runs; ++r) {
    cfg.seed = 1000 + static_cast<std::uint64_t>(r);
    estimates.push_back(standard_estimate(run_pmc(cfg, target), identity_integrand(2), 1.0).mean_estimate);
  }
  const Vector truth{{0.540, 0.535}};
  for (Eigen::Index d = 0; d < 2; ++d) {
    double mean = 0.0;
    for (const auto& e : estimates) {
      mean += e(d);
    }
    mean /= runs;
    double var = 0.0;
    for (const auto& e : estimates) {
      var += (e(d) - mean) * (e(d) - mean);
    }
    const double se = std::sqrt(var / (runs - 1) / runs);
    EXPECT_LT(std::abs(mean - truth(d)), 3.0 * se) << "coordinate " << d << " mean " << mean << " se " << se;
  }
}

TEST(Estimators, NormalizingConstantErrorShrinksWithSampleSize) {
  const auto target = make_mixture_target(five_normal_mixture_2d());
  RunConfig cfg;
  cfg.K = 10;
  cfg.T = 2;
  cfg.sigma0 = 0.2;
  cfg.resampler = Resampler::kSystematic;
  std::vector<double> medians;
  for (const std::size_t j : {25U, 100U, 400U}) {
    cfg.J = j;
    std::vector<double> errors;
    for (int r = 0; r < 50; ++r) {
      cfg.seed = 77 + static_cast<std::uint64_t>(r);
      errors.push_back(std::abs(standard_estimate(run_pmc(cfg, target), constant_integrand()).z_estimate - 1.0));
    }
    medians.push_back(median(errors));
  }
  EXPECT_GT(medians[0], medians[1]);
  EXPECT_GT(medians[1], medians[2]);
}

TEST(Estimators, ErrorCases) {
  const RunResult empty;
  EXPECT_THROW(standard_estimate(empty, constant_integrand()), DomainError);
  EXPECT_THROW(weighted_estimate(empty, constant_integrand()), DomainError);
  const auto result = result_from({record_from(1, PointMatrix::Zero(2, 1), Vector::Zero(2))});
  EXPECT_THROW(combined_estimate(result, constant_integrand(), Vector{{0.5, 0.5}}), DomainError);
  EXPECT_THROW(standard_estimate(result, constant_integrand(), 0.0), DomainError);
}

}  // namespace
}  // namespace pqmc
