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

#include <pqmc/weights.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <pqmc/error.hpp>

namespace pqmc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Mean of exp over a row, in log space: m + log(sum exp(v - m) / K).
// Identical components give exactly m because the sum is exactly K.
double log_mean_exp(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  const double m = row.maxCoeff();
  if (m == kNegInf) {
    return kNegInf;
  }
  double sum = 0.0;
  for (const double v : row) {
    sum += std::exp(v - m);
  }
  return m + std::log(sum / static_cast<double>(row.size()));
}

bool shares_covariance(std::span<const GaussianProposal> proposals) {
  for (std::size_t k = 1; k < proposals.size(); ++k) {
    if (proposals[k].cholesky() != proposals[0].cholesky()) {
      return false;
    }
  }
  return true;
}

}  // namespace

double log_sum_exp(std::span<const double> values) {
  double m = kNegInf;
  for (const double v : values) {
    m = std::max(m, v);
  }
  if (m == kNegInf || !std::isfinite(m)) {
    return m;
  }
  double sum = 0.0;
  for (const double v : values) {
    sum += std::exp(v - m);
  }
  return m + std::log(sum);
}

Vector normalize(const Vector& log_w) {
  if (log_w.size() == 0) {
    throw DegenerateWeightsError("normalize: empty weight vector");
  }
  for (const double v : log_w) {
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
      throw DegenerateWeightsError("normalize: log-weights contain NaN or +inf");
    }
  }
  const double m = log_w.maxCoeff();
  if (m == kNegInf) {
    throw DegenerateWeightsError("normalize: every weight is zero (target and proposals do not overlap)");
  }
  // Scalar exp: Eigen's packet exp maps -inf to a denormal instead of zero.
  Vector w = (log_w.array() - m).unaryExpr([](double v) { return std::exp(v); });
  w /= w.sum();
  return w;
}

double ess(const Vector& w_bar) { return 1.0 / w_bar.squaredNorm(); }

WeightedSample make_weighted_sample(PointMatrix points, Vector log_w) {
  if (points.rows() != log_w.size()) {
    throw DomainError("make_weighted_sample: point count differs from weight count");
  }
  WeightedSample sample;
  sample.w_bar = normalize(log_w);
  sample.points = std::move(points);
  sample.log_w = std::move(log_w);
  return sample;
}

Matrix proposal_log_densities(const PointMatrix& points, std::span<const GaussianProposal> proposals) {
  const auto n = points.rows();
  const auto k_count = static_cast<Eigen::Index>(proposals.size());
  Matrix out(n, k_count);
  if (k_count == 0) {
    return out;
  }
  for (const auto& q : proposals) {
    if (static_cast<Eigen::Index>(q.dim()) != points.cols()) {
      throw DomainError("proposal_log_densities: dimension mismatch");
    }
  }
  if (k_count > 1 && shares_covariance(proposals)) {
    // One triangular solve per point and per center: L^{-1}(x - mu) = L^{-1}x - L^{-1}mu.
    const auto& lower = proposals[0].cholesky();
    const Matrix whitened_points = lower.triangularView<Eigen::Lower>().solve(points.transpose());
    Matrix centers(points.cols(), k_count);
    for (Eigen::Index k = 0; k < k_count; ++k) {
      centers.col(k) = proposals[static_cast<std::size_t>(k)].mean();
    }
    const Matrix whitened_centers = lower.triangularView<Eigen::Lower>().solve(centers);
    const double log_normalizer = proposals[0].log_normalizer();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = 0; k < k_count; ++k) {
        out(i, k) = log_normalizer - 0.5 * (whitened_points.col(i) - whitened_centers.col(k)).squaredNorm();
      }
    }
    return out;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto x = row_span(points, i);
    for (Eigen::Index k = 0; k < k_count; ++k) {
      out(i, k) = proposals[static_cast<std::size_t>(k)].log_density(x);
    }
  }
  return out;
}

Vector target_log_densities(const PointMatrix& points, const Target& target) {
  if (static_cast<std::size_t>(points.cols()) != target.dim) {
    throw DomainError("target_log_densities: dimension mismatch");
  }
  Vector out(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out(i) = target.log_gamma(row_span(points, i));
  }
  return out;
}

Vector standard_log_weights(const Vector& log_gamma, const Matrix& log_q, std::span<const std::size_t> assignment) {
  if (static_cast<Eigen::Index>(assignment.size()) != log_gamma.size() || log_q.rows() != log_gamma.size()) {
    throw DomainError("standard_log_weights: size mismatch");
  }
  Vector out(log_gamma.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const auto k = assignment[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(k) >= log_q.cols()) {
      throw DomainError("standard_log_weights: assignment out of range");
    }
    out(i) = log_gamma(i) - log_q(i, static_cast<Eigen::Index>(k));
  }
  return out;
}

Vector dm_log_weights(const Vector& log_gamma, const Matrix& log_q) {
  if (log_q.rows() != log_gamma.size() || log_q.cols() == 0) {
    throw DomainError("dm_log_weights: size mismatch");
  }
  Vector out(log_gamma.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out(i) = log_gamma(i) - log_mean_exp(log_q.row(i));
  }
  return out;
}

WeightedSample standard_weights(PointMatrix points, std::span<const GaussianProposal> proposals,
                                std::span<const std::size_t> assignment, const Target& target) {
  const Vector log_gamma = target_log_densities(points, target);
  const Matrix log_q = proposal_log_densities(points, proposals);
  Vector log_w = standard_log_weights(log_gamma, log_q, assignment);
  return make_weighted_sample(std::move(points), std::move(log_w));
}

WeightedSample dm_weights(PointMatrix points, std::span<const GaussianProposal> proposals, const Target& target) {
  if (proposals.empty()) {
    throw DomainError("dm_weights: at least one proposal is required");
  }
  const Vector log_gamma = target_log_densities(points, target);
  const Matrix log_q = proposal_log_densities(points, proposals);
  Vector log_w = dm_log_weights(log_gamma, log_q);
  return make_weighted_sample(std::move(points), std::move(log_w));
}

}  // namespace pqmc
