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

#include <pqmc/resample.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include <pqmc/error.hpp>
#include <pqmc/random.hpp>

namespace pqmc {

namespace {

constexpr double kTieTolerance = 1e-12;

void check_weights(const Vector& w_bar) {
  if (w_bar.size() == 0) {
    throw DegenerateWeightsError("resample: empty weighted sample");
  }
  if (!w_bar.allFinite() || (w_bar.array() < 0.0).any() || !(w_bar.sum() > 0.0)) {
    throw DegenerateWeightsError("resample: weights must be finite, nonnegative and not all zero");
  }
}

// Index of the smallest value; ties within kTieTolerance (relative) resolve to the lowest index.
template <typename ValueFn>
std::size_t argmin_lowest(std::size_t count, ValueFn&& value, double& best_value) {
  std::size_t best = 0;
  best_value = value(0);
  for (std::size_t m = 1; m < count; ++m) {
    const double v = value(m);
    if (v < best_value - kTieTolerance * std::abs(best_value)) {
      best = m;
      best_value = v;
    }
  }
  return best;
}

double criterion(const std::vector<std::size_t>& selected, const Vector& attraction, const DistanceMatrix& d) {
  const auto n = static_cast<double>(selected.size());
  double a = 0.0;
  double r = 0.0;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    a += attraction(static_cast<Eigen::Index>(selected[i]));
    for (std::size_t j = i + 1; j < selected.size(); ++j) {
      r += d(selected[i], selected[j]);
    }
  }
  return 2.0 / n * a - 2.0 * r / (n * n);
}

std::vector<double> cumulative(const Vector& w_bar) {
  std::vector<double> cdf(static_cast<std::size_t>(w_bar.size()));
  double acc = 0.0;
  for (Eigen::Index m = 0; m < w_bar.size(); ++m) {
    acc += w_bar(m);
    cdf[static_cast<std::size_t>(m)] = acc;
  }
  // Rescale so the last entry is exactly 1 regardless of rounding.
  for (auto& c : cdf) {
    c /= acc;
  }
  cdf.back() = 1.0;
  return cdf;
}

std::size_t locate(const std::vector<double>& cdf, double position) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), position);
  return std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

}  // namespace

IspSelection isp_select(const WeightedSample& weighted, const ResampleConfig& cfg) {
  check_weights(weighted.w_bar);
  return isp_select(weighted, pairwise_distances(weighted.points), cfg);
}

IspSelection isp_select(const WeightedSample& weighted, const DistanceMatrix& distances, const ResampleConfig& cfg) {
  check_weights(weighted.w_bar);
  if (cfg.n == 0) {
    throw DomainError("isp_select: n must be positive");
  }
  const std::size_t m_count = weighted.size();
  if (distances.size() != m_count) {
    throw DomainError("isp_select: distance matrix does not match the sample");
  }
  const Vector& w = weighted.w_bar;

  // attraction[m] = sum_l w_l |y_m - y_l|
  Vector attraction(static_cast<Eigen::Index>(m_count));
  for (std::size_t m = 0; m < m_count; ++m) {
    const auto row = distances.row(m);
    double acc = 0.0;
    for (std::size_t l = 0; l < m_count; ++l) {
      acc += w(static_cast<Eigen::Index>(l)) * row[l];
    }
    attraction(static_cast<Eigen::Index>(m)) = acc;
  }

  // repulsion[m] = sum over selected points of |y_m - xi_j|
  std::vector<double> repulsion(m_count, 0.0);
  auto add_point = [&](std::size_t idx, double sign) {
    const auto row = distances.row(idx);
    for (std::size_t m = 0; m < m_count; ++m) {
      repulsion[m] += sign * row[m];
    }
  };

  IspSelection out;
  out.indices.reserve(cfg.n);
  for (std::size_t i = 1; i <= cfg.n; ++i) {
    const auto fi = static_cast<double>(i);
    double best_value = 0.0;
    const std::size_t pick = argmin_lowest(
        m_count,
        [&](std::size_t m) { return 2.0 / fi * attraction(static_cast<Eigen::Index>(m)) - 2.0 / (fi * fi) * repulsion[m]; },
        best_value);
    out.indices.push_back(pick);
    add_point(pick, 1.0);
  }
  out.greedy_objective = criterion(out.indices, attraction, distances);
  out.objective = out.greedy_objective;

  const auto fn = static_cast<double>(cfg.n);
  for (std::size_t pass = 0; pass < cfg.max_refine_passes; ++pass) {
    bool moved = false;
    for (std::size_t i = 0; i < cfg.n; ++i) {
      const std::size_t current = out.indices[i];
      const auto current_row = distances.row(current);
      auto value = [&](std::size_t m) {
        return 2.0 / fn * attraction(static_cast<Eigen::Index>(m)) - 2.0 / (fn * fn) * (repulsion[m] - current_row[m]);
      };
      double best_value = 0.0;
      const std::size_t pick = argmin_lowest(m_count, value, best_value);
      const double current_value = value(current);
      if (pick != current && best_value < current_value - kTieTolerance * std::abs(current_value)) {
        add_point(current, -1.0);
        add_point(pick, 1.0);
        out.indices[i] = pick;
        moved = true;
      }
    }
    const double previous = out.objective;
    out.objective = criterion(out.indices, attraction, distances);
    out.pass_objectives.push_back(out.objective);
    const double scale = std::max(std::abs(previous), std::numeric_limits<double>::min());
    if (!moved || (previous - out.objective) / scale < cfg.tol) {
      break;
    }
  }
  return out;
}

PointMatrix isp_resample(const WeightedSample& weighted, const ResampleConfig& cfg) {
  const auto selection = isp_select(weighted, cfg);
  return gather_rows(weighted.points, selection.indices);
}

std::vector<std::size_t> multinomial_indices(const Vector& w_bar, std::size_t n, std::uint64_t seed) {
  check_weights(w_bar);
  const auto cdf = cumulative(w_bar);
  Rng rng(seed);
  std::vector<std::size_t> out(n);
  for (auto& idx : out) {
    idx = locate(cdf, rng.uniform());
  }
  return out;
}

std::vector<std::size_t> systematic_indices(const Vector& w_bar, std::size_t n, std::uint64_t seed) {
  check_weights(w_bar);
  if (n == 0) {
    return {};
  }
  const auto cdf = cumulative(w_bar);
  Rng rng(seed);
  const double step = 1.0 / static_cast<double>(n);
  const double offset = rng.uniform() * step;
  std::vector<std::size_t> out(n);
  std::size_t m = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double position = offset + static_cast<double>(i) * step;
    while (m + 1 < cdf.size() && cdf[m] <= position) {
      ++m;
    }
    out[i] = m;
  }
  return out;
}

PointMatrix multinomial_resample(const WeightedSample& weighted, std::size_t n, std::uint64_t seed) {
  return gather_rows(weighted.points, multinomial_indices(weighted.w_bar, n, seed));
}

PointMatrix systematic_resample(const WeightedSample& weighted, std::size_t n, std::uint64_t seed) {
  return gather_rows(weighted.points, systematic_indices(weighted.w_bar, n, seed));
}

}  // namespace pqmc
