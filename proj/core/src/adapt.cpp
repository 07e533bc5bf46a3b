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

#include <pqmc/adapt.hpp>

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <pqmc/error.hpp>

namespace pqmc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kEmStopImprovement = 1e-10;

Matrix checked(const Matrix& raw, double floor, const char* where) {
  Matrix cov = floor_covariance(raw, floor);
  if (!cov.allFinite() || cov.llt().info() != Eigen::Success) {
    throw AdaptationError(std::string(where) + ": adapted covariance is not positive definite");
  }
  return cov;
}

double row_log_sum_exp(const Matrix& m, Eigen::Index i) {
  const double top = m.row(i).maxCoeff();
  if (top == kNegInf) {
    return kNegInf;
  }
  double sum = 0.0;
  for (const double v : m.row(i)) {
    sum += std::exp(v - top);
  }
  return top + std::log(sum);
}

Matrix mixture_log_densities(const PointMatrix& points, std::span<const Vector> centers, const std::vector<Matrix>& covs) {
  std::vector<GaussianProposal> components;
  components.reserve(centers.size());
  for (std::size_t k = 0; k < centers.size(); ++k) {
    components.emplace_back(centers[k], covs[k]);
  }
  return proposal_log_densities(points, components);
}

double weighted_log_likelihood(const Vector& w_bar, const Matrix& log_q) {
  const double log_k = std::log(static_cast<double>(log_q.cols()));
  double total = 0.0;
  for (Eigen::Index i = 0; i < log_q.rows(); ++i) {
    if (w_bar(i) != 0.0) {
      total += w_bar(i) * (row_log_sum_exp(log_q, i) - log_k);
    }
  }
  return total;
}

}  // namespace

std::string_view to_string(AdaptMode mode) noexcept {
  switch (mode) {
    case AdaptMode::kStatic:
      return "static";
    case AdaptMode::kLookback:
      return "lookback";
    case AdaptMode::kExactEm:
      return "exact_em";
  }
  return "static";
}

AdaptMode parse_adapt_mode(std::string_view name) {
  if (name == "static") {
    return AdaptMode::kStatic;
  }
  if (name == "lookback") {
    return AdaptMode::kLookback;
  }
  if (name == "exact_em") {
    return AdaptMode::kExactEm;
  }
  throw ConfigError("unknown adapt mode '" + std::string(name) + "'");
}

std::string_view to_string(LookbackForm form) noexcept { return form == LookbackForm::kAll ? "all" : "own"; }

LookbackForm parse_lookback_form(std::string_view name) {
  if (name == "own") {
    return LookbackForm::kOwn;
  }
  if (name == "all") {
    return LookbackForm::kAll;
  }
  throw ConfigError("unknown lookback form '" + std::string(name) + "'");
}

Matrix floor_covariance(const Matrix& cov, double floor) {
  if (cov.rows() != cov.cols()) {
    throw DomainError("floor_covariance: matrix is not square");
  }
  Matrix sym = 0.5 * (cov + cov.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (eig.info() != Eigen::Success) {
    throw AdaptationError("floor_covariance: eigendecomposition failed");
  }
  if (eig.eigenvalues().minCoeff() >= floor) {
    return sym;
  }
  const Vector lifted = eig.eigenvalues().cwiseMax(floor);
  sym = eig.eigenvectors() * lifted.asDiagonal() * eig.eigenvectors().transpose();
  return 0.5 * (sym + sym.transpose());
}

Matrix isotropize(const Matrix& cov, std::size_t p) {
  if (static_cast<std::size_t>(cov.rows()) != p || static_cast<std::size_t>(cov.cols()) != p) {
    throw DomainError("isotropize: matrix is not p x p");
  }
  return (cov.trace() / static_cast<double>(p)) * Matrix::Identity(cov.rows(), cov.cols());
}

Matrix lookback_covariance(const WeightedSample& weighted, std::span<const GaussianProposal> proposals,
                           std::span<const std::size_t> assignment, double cov_floor) {
  return lookback_covariance(weighted, proposals, assignment, proposal_log_densities(weighted.points, proposals),
                             cov_floor);
}

Matrix lookback_covariance(const WeightedSample& weighted, std::span<const GaussianProposal> proposals,
                           std::span<const std::size_t> assignment, const Matrix& log_q, double cov_floor,
                           LookbackForm form) {
  const auto n = weighted.points.rows();
  const auto p = weighted.points.cols();
  if (proposals.empty() || static_cast<Eigen::Index>(assignment.size()) != n || log_q.rows() != n ||
      log_q.cols() != static_cast<Eigen::Index>(proposals.size())) {
    throw DomainError("lookback_covariance: size mismatch");
  }
  Matrix scatter = Matrix::Zero(p, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = weighted.w_bar(i);
    if (w == 0.0) {
      continue;
    }
    const auto k = assignment[static_cast<std::size_t>(i)];
    if (k >= proposals.size()) {
      throw DomainError("lookback_covariance: assignment out of range");
    }
    const double log_total = row_log_sum_exp(log_q, i);
    if (log_total == kNegInf) {
      continue;
    }
    if (form == LookbackForm::kOwn) {
      const double r = std::exp(log_q(i, static_cast<Eigen::Index>(k)) - log_total);
      const Vector d = weighted.points.row(i).transpose() - proposals[k].mean();
      scatter.noalias() += (w * r) * (d * d.transpose());
      continue;
    }
    for (std::size_t c = 0; c < proposals.size(); ++c) {
      const double r = std::exp(log_q(i, static_cast<Eigen::Index>(c)) - log_total);
      if (r == 0.0) {
        continue;
      }
      const Vector d = weighted.points.row(i).transpose() - proposals[c].mean();
      scatter.noalias() += (w * r) * (d * d.transpose());
    }
  }
  return checked(scatter, cov_floor, "lookback_covariance");
}

EmResult exact_covariance_em_trace(const WeightedSample& weighted, std::span<const Vector> centers,
                                   std::span<const Matrix> init_covs, const AdaptConfig& cfg) {
  const auto k_count = centers.size();
  if (k_count == 0 || init_covs.size() != k_count) {
    throw DomainError("exact_covariance_em: need one initial covariance per center");
  }
  const auto n = weighted.points.rows();
  const auto p = weighted.points.cols();
  EmResult out;
  out.covariances.assign(init_covs.begin(), init_covs.end());
  Matrix log_q = mixture_log_densities(weighted.points, centers, out.covariances);
  out.objectives.push_back(weighted_log_likelihood(weighted.w_bar, log_q));

  std::vector<bool> frozen(k_count, false);
  for (std::size_t iter = 0; iter < cfg.em_max_iters; ++iter) {
    std::vector<Matrix> scatter(k_count, Matrix::Zero(p, p));
    std::vector<double> mass(k_count, 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double w = weighted.w_bar(i);
      const double log_total = row_log_sum_exp(log_q, i);
      if (w == 0.0 || log_total == kNegInf) {
        continue;
      }
      for (std::size_t k = 0; k < k_count; ++k) {
        const double wr = w * std::exp(log_q(i, static_cast<Eigen::Index>(k)) - log_total);
        if (wr == 0.0) {
          continue;
        }
        const Vector d = weighted.points.row(i).transpose() - centers[k];
        scatter[k].noalias() += wr * (d * d.transpose());
        mass[k] += wr;
      }
    }
    for (std::size_t k = 0; k < k_count; ++k) {
      if (!(mass[k] > 0.0)) {
        frozen[k] = true;
        out.covariances[k] = init_covs[k];
        continue;
      }
      out.covariances[k] = checked(scatter[k] / mass[k], cfg.cov_floor, "exact_covariance_em");
    }
    log_q = mixture_log_densities(weighted.points, centers, out.covariances);
    const double objective = weighted_log_likelihood(weighted.w_bar, log_q);
    const double improvement = objective - out.objectives.back();
    out.objectives.push_back(objective);
    if (improvement < kEmStopImprovement) {
      break;
    }
  }
  for (std::size_t k = 0; k < k_count; ++k) {
    if (frozen[k]) {
      out.frozen_components.push_back(k);
    }
  }
  return out;
}

std::vector<Matrix> exact_covariance_em(const WeightedSample& weighted, std::span<const Vector> centers,
                                        std::span<const Matrix> init_covs, const AdaptConfig& cfg) {
  return exact_covariance_em_trace(weighted, centers, init_covs, cfg).covariances;
}

}  // namespace pqmc
