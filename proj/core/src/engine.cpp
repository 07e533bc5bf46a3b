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

#include <pqmc/engine.hpp>

#include <chrono>
#include <cmath>
#include <ios>
#include <optional>
#include <sstream>
#include <string>

#include <pqmc/error.hpp>
#include <pqmc/lds.hpp>
#include <pqmc/random.hpp>
#include <pqmc/resample.hpp>

namespace pqmc {

namespace {

// Stream tags for derive_seed(); each consumer of randomness gets its own.
enum : std::uint64_t { kTagMcDraw = 1, kTagScramble = 2, kTagResample = 3 };

PointMatrix initial_centers(const RunConfig& cfg, std::size_t p) {
  if (const auto* box = std::get_if<SobolBox>(&cfg.init_centers)) {
    if (!(box->hi > box->lo)) {
      throw ConfigError("init_centers: box needs hi > lo");
    }
    return (box->lo + (box->hi - box->lo) * sobol(cfg.K, p).values().array()).matrix();
  }
  const auto& explicit_centers = std::get<PointMatrix>(cfg.init_centers);
  if (static_cast<std::size_t>(explicit_centers.rows()) != cfg.K ||
      static_cast<std::size_t>(explicit_centers.cols()) != p) {
    throw ConfigError("init_centers: expected a K x p matrix");
  }
  return explicit_centers;
}

PointMatrix pseudo_random_block(std::size_t J, std::size_t p, std::uint64_t seed) {
  Rng rng(seed);
  PointMatrix u(static_cast<Eigen::Index>(J), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    for (Eigen::Index d = 0; d < u.cols(); ++d) {
      u(i, d) = rng.uniform();
    }
  }
  return u;
}

Matrix mean_of(const std::vector<Matrix>& covs) {
  Matrix out = covs.front();
  for (std::size_t k = 1; k < covs.size(); ++k) {
    out += covs[k];
  }
  return out / static_cast<double>(covs.size());
}

std::vector<std::size_t> resample_centers(const RunConfig& cfg, const WeightedSample& sample, std::size_t t) {
  const auto seed = derive_seed(cfg.seed, {kTagResample, t});
  switch (cfg.resampler) {
    case Resampler::kMultinomial:
      return multinomial_indices(sample.w_bar, cfg.K, seed);
    case Resampler::kSystematic:
      return systematic_indices(sample.w_bar, cfg.K, seed);
    case Resampler::kIsp: {
      ResampleConfig rc;
      rc.n = cfg.K;
      return isp_select(sample, rc).indices;
    }
  }
  throw ConfigError("unknown resampler");
}

RunResult run_loop(const RunConfig& cfg, const Target& target) {
  validate(cfg);
  if (target.dim == 0 || !target.log_gamma) {
    throw ConfigError("target has no dimension or density");
  }
  const auto start = std::chrono::steady_clock::now();
  const std::size_t p = target.dim;
  const std::size_t n = cfg.K * cfg.J;

  RunResult result;
  result.config = cfg;
  result.target_name = target.name;
  result.records.reserve(cfg.T);

  PointMatrix centers = initial_centers(cfg, p);
  std::vector<Matrix> covs(cfg.K, cfg.sigma0 * cfg.sigma0 * Matrix::Identity(static_cast<Eigen::Index>(p),
                                                                             static_cast<Eigen::Index>(p)));
  std::optional<UnitCubePoints> sobol_block;
  if (cfg.sampler == Sampler::kQmc) {
    sobol_block.emplace(sobol(cfg.J, p));
  }
  std::vector<std::size_t> assignment(n);
  for (std::size_t i = 0; i < n; ++i) {
    assignment[i] = i / cfg.J;
  }

  for (std::size_t t = 1; t <= cfg.T; ++t) {
    IterationRecord record;
    record.t = t;
    record.sigma = mean_of(covs);
    record.proposals.reserve(cfg.K);
    for (std::size_t k = 0; k < cfg.K; ++k) {
      record.proposals.emplace_back(centers.row(static_cast<Eigen::Index>(k)).transpose(), covs[k]);
    }

    PointMatrix points(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    for (std::size_t k = 0; k < cfg.K; ++k) {
      const UnitCubePoints u = cfg.sampler == Sampler::kQmc
                                   ? owen_scramble(*sobol_block, ScrambleSeed{derive_seed(cfg.seed, {kTagScramble, t, k})})
                                   : UnitCubePoints(pseudo_random_block(cfg.J, p, derive_seed(cfg.seed, {kTagMcDraw, t, k})));
      const auto& q = record.proposals[k];
      points.middleRows(static_cast<Eigen::Index>(k * cfg.J), static_cast<Eigen::Index>(cfg.J)) =
          gaussian_inverse_transform(u, q.mean(), q.covariance());
    }

    const Vector log_gamma = target_log_densities(points, target);
    result.target_evaluations += n;
    const Matrix log_q = proposal_log_densities(points, record.proposals);
    Vector log_w = cfg.weighting == Weighting::kDm ? dm_log_weights(log_gamma, log_q)
                                                   : standard_log_weights(log_gamma, log_q, assignment);
    try {
      record.sample = make_weighted_sample(std::move(points), std::move(log_w));
    } catch (const DegenerateWeightsError& e) {
      throw RunAbortedError(t, e.what());
    }
    record.ess = ess(record.sample.w_bar);

    std::vector<std::size_t> picked;
    try {
      picked = resample_centers(cfg, record.sample, t);
    } catch (const DegenerateWeightsError& e) {
      throw RunAbortedError(t, e.what());
    }
    PointMatrix next_centers = gather_rows(record.sample.points, picked);

    try {
      switch (cfg.adapt.mode) {
        case AdaptMode::kStatic:
          break;
        case AdaptMode::kLookback: {
          Matrix sigma = lookback_covariance(record.sample, record.proposals, assignment, log_q,
                                             cfg.adapt.cov_floor, cfg.adapt.lookback_form);
          if (cfg.adapt.isotropic) {
            sigma = isotropize(sigma, p);
          }
          covs.assign(cfg.K, sigma);
          break;
        }
        case AdaptMode::kExactEm: {
          std::vector<Vector> em_centers;
          em_centers.reserve(cfg.K);
          for (Eigen::Index k = 0; k < next_centers.rows(); ++k) {
            em_centers.emplace_back(next_centers.row(k).transpose());
          }
          auto updated = exact_covariance_em(record.sample, em_centers, covs, cfg.adapt);
          if (cfg.adapt.isotropic) {
            for (auto& c : updated) {
              c = isotropize(c, p);
            }
          }
          covs = std::move(updated);
          break;
        }
      }
    } catch (const AdaptationError&) {
      record.adaptation_fallback = true;
    } catch (const CovarianceError&) {
      record.adaptation_fallback = true;
    }
    centers = std::move(next_centers);
    result.records.push_back(std::move(record));
  }
  result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

void write_matrix(std::ostream& os, const char* label, const Eigen::Ref<const Eigen::MatrixXd>& m) {
  os << label << ' ' << m.rows() << 'x' << m.cols();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      os << ' ' << m(i, j);
    }
  }
  os << '\n';
}

}  // namespace

std::string_view to_string(Sampler s) noexcept { return s == Sampler::kQmc ? "qmc" : "mc"; }

std::string_view to_string(Weighting w) noexcept { return w == Weighting::kDm ? "dm" : "standard"; }

std::string_view to_string(Resampler r) noexcept {
  switch (r) {
    case Resampler::kMultinomial:
      return "multinomial";
    case Resampler::kSystematic:
      return "systematic";
    case Resampler::kIsp:
      return "isp";
  }
  return "multinomial";
}

Sampler parse_sampler(std::string_view name) {
  if (name == "mc") {
    return Sampler::kMc;
  }
  if (name == "qmc") {
    return Sampler::kQmc;
  }
  throw ConfigError("unknown sampler '" + std::string(name) + "'");
}

Weighting parse_weighting(std::string_view name) {
  if (name == "standard") {
    return Weighting::kStandard;
  }
  if (name == "dm") {
    return Weighting::kDm;
  }
  throw ConfigError("unknown weighting '" + std::string(name) + "'");
}

Resampler parse_resampler(std::string_view name) {
  if (name == "multinomial") {
    return Resampler::kMultinomial;
  }
  if (name == "systematic") {
    return Resampler::kSystematic;
  }
  if (name == "isp") {
    return Resampler::kIsp;
  }
  throw ConfigError("unknown resampler '" + std::string(name) + "'");
}

void validate(const RunConfig& cfg) {
  if (cfg.K == 0 || cfg.J == 0 || cfg.T == 0) {
    throw ConfigError("K, J and T must be at least 1");
  }
  if (!(cfg.sigma0 > 0.0) || !std::isfinite(cfg.sigma0)) {
    throw ConfigError("sigma0 must be positive and finite");
  }
  if (!(cfg.adapt.cov_floor > 0.0)) {
    throw ConfigError("cov_floor must be positive");
  }
}

RunResult run_pmc(const RunConfig& cfg, const Target& target) {
  if (cfg.sampler != Sampler::kMc) {
    throw ConfigError("run_pmc requires the mc sampler");
  }
  return run_loop(cfg, target);
}

RunResult run_pqmc(const RunConfig& cfg, const Target& target) {
  if (cfg.sampler != Sampler::kQmc) {
    throw ConfigError("run_pqmc requires the qmc sampler");
  }
  return run_loop(cfg, target);
}

RunResult run_population(const RunConfig& cfg, const Target& target) { return run_loop(cfg, target); }

std::string serialize(const RunResult& result) {
  std::ostringstream os;
  os << std::hexfloat;
  const auto& cfg = result.config;
  os << "target " << result.target_name << '\n'
     << "K " << cfg.K << " J " << cfg.J << " T " << cfg.T << " sigma0 " << cfg.sigma0 << '\n'
     << "sampler " << to_string(cfg.sampler) << " weighting " << to_string(cfg.weighting) << " resampler "
     << to_string(cfg.resampler) << '\n'
     << "adapt " << to_string(cfg.adapt.mode) << " isotropic " << cfg.adapt.isotropic << " em_max_iters "
     << cfg.adapt.em_max_iters << " cov_floor " << cfg.adapt.cov_floor << " lookback_form "
     << to_string(cfg.adapt.lookback_form) << '\n'
     << "seed " << cfg.seed << '\n';
  if (const auto* box = std::get_if<SobolBox>(&cfg.init_centers)) {
    os << "init_box " << box->lo << ' ' << box->hi << '\n';
  } else {
    write_matrix(os, "init_centers", std::get<PointMatrix>(cfg.init_centers));
  }
  os << "evaluations " << result.target_evaluations << '\n';
  for (const auto& rec : result.records) {
    os << "iteration " << rec.t << " ess " << rec.ess << " fallback " << rec.adaptation_fallback << '\n';
    write_matrix(os, "sigma", rec.sigma);
    for (const auto& q : rec.proposals) {
      write_matrix(os, "mean", q.mean());
      write_matrix(os, "cov", q.covariance());
    }
    write_matrix(os, "points", rec.sample.points);
    write_matrix(os, "log_w", rec.sample.log_w);
    write_matrix(os, "w_bar", rec.sample.w_bar);
  }
  for (const auto& [name, est] : result.estimates) {
    os << "estimate " << name << " z " << est.z_estimate << '\n';
    write_matrix(os, "mean_estimate", est.mean_estimate);
    write_matrix(os, "alpha", est.alpha);
  }
  return os.str();
}

}  // namespace pqmc
