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

#include <pqmc/model.hpp>

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include <Eigen/Cholesky>

#include <pqmc/error.hpp>

namespace pqmc {

namespace {

constexpr double kSymmetryTolerance = 1e-10;

Matrix checked_cholesky(const Matrix& cov) {
  if (cov.rows() != cov.cols() || cov.rows() == 0) {
    throw CovarianceError("covariance must be a non-empty square matrix");
  }
  if (!cov.allFinite()) {
    throw CovarianceError("covariance has non-finite entries");
  }
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
    throw CovarianceError("covariance is not symmetric");
  }
  const Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw CovarianceError("covariance is not positive definite");
  }
  Matrix lower = llt.matrixL();
  if (!lower.allFinite() || (lower.diagonal().array() <= 0.0).any()) {
    throw CovarianceError("covariance is not positive definite");
  }
  return lower;
}

Matrix isotropic(std::size_t p, double variance) {
  return variance * Matrix::Identity(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
}

}  // namespace

GaussianProposal::GaussianProposal(Vector mean, Matrix cov)
    : mean_{std::move(mean)}, cov_{std::move(cov)}, chol_{checked_cholesky(cov_)} {
  if (mean_.size() != cov_.rows()) {
    throw CovarianceError("proposal mean and covariance sizes disagree");
  }
  const auto p = static_cast<double>(mean_.size());
  log_normalizer_ = -0.5 * p * std::log(2.0 * std::numbers::pi) - chol_.diagonal().array().log().sum();
}

double GaussianProposal::log_density(std::span<const double> x) const {
  const Eigen::Map<const Vector> point(x.data(), static_cast<Eigen::Index>(x.size()));
  const Vector z = chol_.triangularView<Eigen::Lower>().solve(point - mean_);
  return log_normalizer_ - 0.5 * z.squaredNorm();
}

double log_mvn_density(std::span<const double> x, const Vector& mean, const Matrix& cov) {
  if (static_cast<Eigen::Index>(x.size()) != mean.size()) {
    throw CovarianceError("log_mvn_density: dimension mismatch");
  }
  return GaussianProposal(mean, cov).log_density(x);
}

Target make_mixture_target(const MixtureSpec& spec, std::string name) {
  if (spec.components.empty()) {
    throw SpecError("mixture spec has no components");
  }
  if (spec.weights.size() != spec.components.size()) {
    throw SpecError("mixture spec: weight count differs from component count");
  }
  double total = 0.0;
  for (const double w : spec.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw SpecError("mixture spec: weights must be finite and nonnegative");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw SpecError("mixture spec: weights must sum to 1");
  }
  const auto p = spec.components.front().mean.size();

  struct Component {
    double log_weight;
    GaussianProposal density;
  };
  auto components = std::make_shared<std::vector<Component>>();
  Vector mean = Vector::Zero(p);
  for (std::size_t i = 0; i < spec.components.size(); ++i) {
    const auto& c = spec.components[i];
    if (c.mean.size() != p) {
      throw SpecError("mixture spec: components have different dimensions");
    }
    mean += spec.weights[i] * c.mean;
    if (spec.weights[i] > 0.0) {
      components->push_back({std::log(spec.weights[i]), GaussianProposal(c.mean, c.cov)});
    }
  }

  Target target;
  target.name = std::move(name);
  target.dim = static_cast<std::size_t>(p);
  target.known_z = 1.0;
  target.true_mean = mean;
  target.log_gamma = [components](std::span<const double> x) {
    // Streaming log-sum-exp.
    double max_term = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (const auto& c : *components) {
      const double t = c.log_weight + c.density.log_density(x);
      if (t == -std::numeric_limits<double>::infinity()) {
        continue;
      }
      if (t > max_term) {
        sum = sum * std::exp(max_term - t) + 1.0;
        max_term = t;
      } else {
        sum += std::exp(t - max_term);
      }
    }
    if (!std::isfinite(max_term)) {
      return max_term;
    }
    return max_term + std::log(sum);
  };
  return target;
}

MixtureSpec five_normal_mixture_2d() {
  const double scale = 1.0 / (40.0 * 40.0);
  auto component = [scale](double m1, double m2, double s11, double s12, double s22) {
    MixtureComponent c;
    c.mean = Vector{{m1, m2}};
    c.cov = scale * Matrix{{s11, s12}, {s12, s22}};
    return c;
  };
  MixtureSpec spec;
  spec.weights.assign(5, 0.2);
  spec.components = {
      component(0.250, 0.250, 2.0, 0.6, 1.0),
      component(0.500, 0.900, 2.0, -0.4, 2.0),
      component(0.825, 0.700, 2.0, 0.8, 2.0),
      component(0.275, 0.675, 3.0, 0.0, 0.5),
      component(0.850, 0.150, 2.0, -0.1, 2.0),
  };
  return spec;
}

MixtureSpec three_normal_mixture(std::size_t p) {
  if (p == 0) {
    throw SpecError("three_normal_mixture: dimension must be positive");
  }
  MixtureSpec spec;
  spec.weights.assign(3, 1.0 / 3.0);
  for (const double center : {0.375, 0.575, 0.700}) {
    spec.components.push_back({Vector::Constant(static_cast<Eigen::Index>(p), center), isotropic(p, 0.2 * 0.2)});
  }
  return spec;
}

Target standard_normal_target(std::size_t p) {
  if (p == 0) {
    throw SpecError("standard_normal_target: dimension must be positive");
  }
  const double log_normalizer = -0.5 * static_cast<double>(p) * std::log(2.0 * std::numbers::pi);
  Target target;
  target.name = "standard_normal";
  target.dim = p;
  target.known_z = 1.0;
  target.true_mean = Vector::Zero(static_cast<Eigen::Index>(p));
  target.log_gamma = [log_normalizer](std::span<const double> x) {
    double sq = 0.0;
    for (const double v : x) {
      sq += v * v;
    }
    return log_normalizer - 0.5 * sq;
  };
  return target;
}

}  // namespace pqmc
