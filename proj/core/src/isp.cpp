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

#include <pqmc/isp.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <pqmc/energy.hpp>
#include <pqmc/error.hpp>
#include <pqmc/random.hpp>
#include <pqmc/resample.hpp>

namespace pqmc {

namespace {

double sample_range(const PointMatrix& points) {
  const Eigen::RowVectorXd span = points.colwise().maxCoeff() - points.colwise().minCoeff();
  return span.maxCoeff();
}

PointMatrix initial_points(const WeightedSample& weighted, std::size_t n, const CcpConfig& cfg) {
  if (cfg.init) {
    if (static_cast<std::size_t>(cfg.init->rows()) != n || cfg.init->cols() != weighted.points.cols()) {
      throw DomainError("isp_ccp: init must be n x p");
    }
    return *cfg.init;
  }
  const auto indices = systematic_indices(weighted.w_bar, n, cfg.jitter_seed);
  PointMatrix x = gather_rows(weighted.points, indices);
  const Eigen::RowVectorXd span = weighted.points.colwise().maxCoeff() - weighted.points.colwise().minCoeff();
  Rng rng(derive_seed(cfg.jitter_seed, {1}));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index d = 0; d < x.cols(); ++d) {
      const double scale = span(d) > 0.0 ? span(d) : 1.0;
      x(i, d) += 1e-6 * scale * (2.0 * rng.uniform() - 1.0);
    }
  }
  return x;
}

// Keeps x at least epsilon away from every sample row, pushing it back along the direction it came from.
void keep_off_rows(Eigen::Ref<Eigen::RowVectorXd> x, const Eigen::RowVectorXd& previous, const PointMatrix& rows,
                   double epsilon) {
  for (Eigen::Index m = 0; m < rows.rows(); ++m) {
    const Eigen::RowVectorXd offset = x - rows.row(m);
    if (offset.norm() >= epsilon) {
      continue;
    }
    Eigen::RowVectorXd direction = previous - rows.row(m);
    if (direction.norm() == 0.0) {
      direction = Eigen::RowVectorXd::Unit(rows.cols(), 0);
    }
    // Twice epsilon so that rounding of the coordinates cannot bring it back inside.
    x = rows.row(m) + 2.0 * epsilon * direction.normalized();
  }
}

}  // namespace

CcpResult isp_ccp_trace(const WeightedSample& weighted, std::size_t n, const CcpConfig& cfg) {
  if (n == 0) {
    throw DomainError("isp_ccp: n must be positive");
  }
  if (cfg.max_iters == 0 || !(cfg.epsilon_guard > 0.0)) {
    throw DomainError("isp_ccp: max_iters must be positive and epsilon_guard > 0");
  }
  const PointMatrix& y = weighted.points;
  const Vector& w = weighted.w_bar;
  const auto m_count = y.rows();
  const auto p = y.cols();
  const double inv_n = 1.0 / static_cast<double>(n);
  const double range = sample_range(y);
  const double move_tol = cfg.tol * (range > 0.0 ? range : 1.0);

  CcpResult out;
  out.points = initial_points(weighted, n, cfg);
  out.objectives.push_back(energy_objective(out.points, y, w));

  PointMatrix next(out.points.rows(), p);
  for (std::size_t iter = 0; iter < cfg.max_iters; ++iter) {
    const PointMatrix& x = out.points;
    double max_move = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      Eigen::RowVectorXd numerator = Eigen::RowVectorXd::Zero(p);
      double denominator = 0.0;
      for (Eigen::Index m = 0; m < m_count; ++m) {
        if (w(m) == 0.0) {
          continue;
        }
        const double d = std::max((x.row(i) - y.row(m)).norm(), cfg.epsilon_guard);
        numerator += (w(m) / d) * y.row(m);
        denominator += w(m) / d;
      }
      for (Eigen::Index j = 0; j < x.rows(); ++j) {
        if (j == i) {
          continue;
        }
        const Eigen::RowVectorXd diff = x.row(i) - x.row(j);
        const double d = diff.norm();
        if (d > 0.0) {
          numerator += (inv_n / std::max(d, cfg.epsilon_guard)) * diff;
        }
      }
      next.row(i) = numerator / denominator;
      if (!next.row(i).allFinite()) {
        throw NumericError("isp_ccp: non-finite update at sweep " + std::to_string(iter + 1));
      }
      keep_off_rows(next.row(i), x.row(i), y, cfg.epsilon_guard);
      max_move = std::max(max_move, (next.row(i) - x.row(i)).norm());
    }
    // Near the fixed point a sweep can raise the criterion by rounding alone; stop on the last descending iterate.
    const double objective = energy_objective(next, y, w);
    if (objective > out.objectives.back()) {
      out.converged = true;
      break;
    }
    out.points.swap(next);
    out.objectives.push_back(objective);
    out.iterations = iter + 1;
    if (max_move <= move_tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

PointMatrix isp_ccp(const WeightedSample& weighted, std::size_t n, const CcpConfig& cfg) {
  return isp_ccp_trace(weighted, n, cfg).points;
}

PointMatrix support_points(const PointMatrix& points, std::size_t n, const CcpConfig& cfg) {
  if (points.rows() == 0) {
    throw DomainError("support_points: empty point set");
  }
  return isp_ccp(make_weighted_sample(points, Vector::Zero(points.rows())), n, cfg);
}

}  // namespace pqmc
