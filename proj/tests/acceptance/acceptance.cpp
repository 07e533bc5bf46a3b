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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <pqmc/adapt.hpp>
#include <pqmc/energy.hpp>
#include <pqmc/engine.hpp>
#include <pqmc/estimators.hpp>
#include <pqmc/experiment.hpp>
#include <pqmc/isp.hpp>
#include <pqmc/lds.hpp>
#include <pqmc/resample.hpp>

namespace {

using namespace pqmc;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::size_t worker_threads() { return std::max(1U, std::thread::hardware_concurrency()); }

WeightedSample weighted_from(PointMatrix points, const Vector& w_bar) {
  return make_weighted_sample(std::move(points), w_bar.array().log().matrix());
}

PointMatrix uniform_points(std::size_t n, std::size_t p, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> dist;
  PointMatrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      out(i, j) = dist(gen);
    }
  }
  return out;
}

Vector simplex(std::size_t n, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> dist(0.05, 1.0);
  Vector w(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    w(i) = dist(gen);
  }
  return w / w.sum();
}

const MseRow& find_row(const std::vector<MseRow>& rows, const std::string& algorithm, const std::string& estimator) {
  for (const auto& row : rows) {
    if (row.algorithm == algorithm && row.estimator == estimator) {
      return row;
    }
  }
  throw std::runtime_error("no row for " + algorithm + "/" + estimator);
}

AlgorithmSpec lookback_algorithm(std::string name, Sampler sampler, Resampler resampler) {
  AlgorithmSpec alg;
  alg.name = std::move(name);
  alg.sampler = sampler;
  alg.weighting = Weighting::kDm;
  alg.resampler = resampler;
  alg.adapt.mode = AdaptMode::kLookback;
  alg.adapt.isotropic = true;
  return alg;
}

Outcome resampling_ordering() {
  SweepSpec spec;
  spec.name = "resampling_ordering";
  spec.M = 1000;
  spec.n = 100;
  spec.dims = {2};
  spec.proposal_cov_scale = std::sqrt(2.0);
  spec.replications = 100;
  spec.base_seed = 20260101;
  const auto rows = resampling_sweep(spec);
  double isp = 0.0;
  double multinomial = 0.0;
  double systematic = 0.0;
  for (const auto& row : rows) {
    (row.method == "isp" ? isp : row.method == "multinomial" ? multinomial : systematic) = row.logmse_is_mean;
  }
  const double decade = std::log(10.0);
  return {isp <= multinomial - decade && isp <= systematic - decade,
          fmt("log MSE vs IS: isp %.3f, multinomial %.3f, systematic %.3f (need isp <= each - %.3f)", isp, multinomial,
              systematic, decade)};
}

Outcome energy_ordering() {
  const auto target = make_mixture_target(five_normal_mixture_2d());
  PointMatrix y = sobol(1000, 2).values();
  Vector log_w(y.rows());
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    log_w(i) = target.log_gamma(row_span(y, i));
  }
  const auto weighted = make_weighted_sample(std::move(y), std::move(log_w));
  ResampleConfig rc;
  rc.n = 100;
  const double isp = energy_objective(isp_resample(weighted, rc), weighted);
  double multinomial = 0.0;
  double systematic = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    multinomial += energy_objective(multinomial_resample(weighted, 100, seed), weighted) / 20.0;
    systematic += energy_objective(systematic_resample(weighted, 100, seed), weighted) / 20.0;
  }
  return {isp < multinomial && isp < systematic,
          fmt("energy: isp %.6g, multinomial mean %.6g, systematic mean %.6g", isp, multinomial, systematic)};
}

Outcome pqmc_gap(const TargetRef& target, std::size_t K, std::size_t J, std::size_t R, double required) {
  ExperimentSpec spec;
  spec.name = "gap";
  spec.target = target;
  spec.T = 10;
  spec.kj = {{K, J}};
  spec.sigmas = {0.2};
  spec.replications = R;
  spec.base_seed = 20260101;
  spec.algorithms = {lookback_algorithm("pmc_systematic_lookback", Sampler::kMc, Resampler::kSystematic),
                     lookback_algorithm("pqmc", Sampler::kQmc, Resampler::kIsp)};
  ExecutionOptions opts;
  opts.threads = worker_threads();
  const auto rows = run_experiment(spec, opts);
  const auto& pmc = find_row(rows, "pmc_systematic_lookback", "weighted");
  const auto& pqmc = find_row(rows, "pqmc", "weighted");
  if (!pmc.error.empty() || !pqmc.error.empty()) {
    return {false, "a replication failed: " + pmc.error + pqmc.error};
  }
  const double gap = pmc.logmse_mean_m - pqmc.logmse_mean_m;
  return {gap >= required, fmt("weighted logMSE: pqmc %.3f, pmc systematic+lookback %.3f, gap %.3f (need >= %.1f)",
                               pqmc.logmse_mean_m, pmc.logmse_mean_m, gap, required)};
}

Outcome unbiasedness() {
  const auto target = make_mixture_target(five_normal_mixture_2d());
  RunConfig cfg;
  cfg.K = 50;
  cfg.J = 20;
  cfg.T = 10;
  cfg.sigma0 = 0.2;
  cfg.sampler = Sampler::kMc;
  cfg.weighting = Weighting::kDm;
  cfg.resampler = Resampler::kMultinomial;
  cfg.adapt.mode = AdaptMode::kStatic;
  constexpr int kRuns = 200;
  std::vector<Vector> estimates(kRuns);
  for (int r = 0; r < kRuns; ++r) {
    cfg.seed = 500000 + static_cast<std::uint64_t>(r);
    estimates[static_cast<std::size_t>(r)] = standard_estimate(run_pmc(cfg, target), identity_integrand(2), 1.0).mean_estimate;
  }
  const double truth[2] = {0.540, 0.535};
  bool pass = true;
  std::ostringstream detail;
  for (Eigen::Index d = 0; d < 2; ++d) {
    double mean = 0.0;
    for (const auto& e : estimates) {
      mean += e(d) / kRuns;
    }
    double var = 0.0;
    for (const auto& e : estimates) {
      var += (e(d) - mean) * (e(d) - mean) / (kRuns - 1);
    }
    const double se = std::sqrt(var / kRuns);
    const double z = (mean - truth[d]) / se;
    pass = pass && std::abs(z) <= 3.0;
    detail << fmt("coord %d: mean %.5f, se %.5f, z %.2f; ", static_cast<int>(d), mean, se, z);
  }
  return {pass, detail.str()};
}

Outcome scale_invariance() {
  const auto base = make_mixture_target(five_normal_mixture_2d());
  Target scaled = base;
  const double log_c = std::log(1e6);
  scaled.log_gamma = [inner = base.log_gamma, log_c](std::span<const double> x) { return inner(x) + log_c; };
  double worst_mean = 0.0;
  double worst_z = 0.0;
  for (const auto sampler : {Sampler::kMc, Sampler::kQmc}) {
    RunConfig cfg;
    cfg.K = 50;
    cfg.J = 20;
    cfg.T = 10;
    cfg.sigma0 = 0.2;
    cfg.sampler = sampler;
    cfg.resampler = sampler == Sampler::kQmc ? Resampler::kIsp : Resampler::kSystematic;
    cfg.adapt.mode = AdaptMode::kLookback;
    cfg.adapt.isotropic = true;
    cfg.seed = 606;
    const auto a = run_population(cfg, base);
    const auto b = run_population(cfg, scaled);
    for (const bool weighted : {false, true}) {
      const auto ea = weighted ? weighted_estimate(a, identity_integrand(2)) : standard_estimate(a, identity_integrand(2));
      const auto eb = weighted ? weighted_estimate(b, identity_integrand(2)) : standard_estimate(b, identity_integrand(2));
      worst_mean = std::max(worst_mean,
                            ((eb.mean_estimate - ea.mean_estimate).array() / ea.mean_estimate.array()).abs().maxCoeff());
      worst_z = std::max(worst_z, std::abs(eb.z_estimate / ea.z_estimate / 1e6 - 1.0));
    }
  }
  return {worst_mean < 1e-10 && worst_z <= 1e-12,
          fmt("max relative mean change %.3g (< 1e-10), max relative deviation of Z ratio from 1e6 %.3g (<= 1e-12)",
              worst_mean, worst_z)};
}

// Minimum criterion over all multisets of size n.
double brute_force_optimum(const WeightedSample& weighted, std::size_t n) {
  std::vector<std::size_t> idx(n, 0);
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, std::size_t)> visit = [&](std::size_t pos, std::size_t start) {
    if (pos == n) {
      best = std::min(best, energy_objective(gather_rows(weighted.points, idx), weighted));
      return;
    }
    for (std::size_t m = start; m < weighted.size(); ++m) {
      idx[pos] = m;
      visit(pos + 1, m);
    }
  };
  visit(0, 0);
  return best;
}

Outcome small_instance_optimality() {
  std::mt19937_64 gen(77);
  int matched = 0;
  std::ostringstream failures;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m_count = 2 + gen() % 7;
    const std::size_t n = 1 + gen() % 3;
    const std::size_t p = 1 + gen() % 2;
    const auto weighted = weighted_from(uniform_points(m_count, p, gen), simplex(m_count, gen));
    ResampleConfig rc;
    rc.n = n;
    const double achieved = energy_objective(isp_resample(weighted, rc), weighted);
    const double best = brute_force_optimum(weighted, n);
    if (std::abs(achieved - best) <= 1e-10) {
      ++matched;
    } else {
      failures << fmt(" [trial %d M=%zu n=%zu p=%zu isp %.12g optimum %.12g]", trial, m_count, n, p, achieved, best);
    }
  }
  const std::string failed = failures.str();
  return {matched >= 90, fmt("%d/100 instances optimal", matched) + (failed.empty() ? "" : "; local optima:" + failed)};
}

Outcome ccp_descent() {
  std::mt19937_64 gen(88);
  std::size_t violations = 0;
  std::size_t sweeps = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m_count = 20 + gen() % 181;
    const std::size_t p = 1 + gen() % 3;
    const std::size_t n = 1 + gen() % 20;
    const auto weighted = weighted_from(uniform_points(m_count, p, gen), simplex(m_count, gen));
    CcpConfig cfg;
    cfg.jitter_seed = static_cast<std::uint64_t>(trial);
    cfg.max_iters = 300;
    const auto trace = isp_ccp_trace(weighted, n, cfg);
    for (std::size_t i = 1; i < trace.objectives.size(); ++i) {
      ++sweeps;
      if (trace.objectives[i] > trace.objectives[i - 1]) {
        ++violations;
        worst = std::max(worst, trace.objectives[i] - trace.objectives[i - 1]);
      }
    }
  }
  return {violations == 0, fmt("%zu increases over %zu sweeps (largest %.3g)", violations, sweeps, worst)};
}

Outcome lookback_degeneracy() {
  std::mt19937_64 gen(99);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t p = 1 + gen() % 5;
    const std::size_t m_count = 5 + gen() % 200;
    const auto weighted = weighted_from(uniform_points(m_count, p, gen), simplex(m_count, gen));
    const Vector mu = uniform_points(1, p, gen).row(0).transpose();
    const Matrix a = uniform_points(p, p, gen);
    const Matrix cov = a * a.transpose() + 0.1 * Matrix::Identity(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    const std::vector<GaussianProposal> q{GaussianProposal(mu, cov)};
    const std::vector<std::size_t> assignment(m_count, 0);
    Matrix scatter = Matrix::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    for (Eigen::Index i = 0; i < weighted.points.rows(); ++i) {
      const Vector d = weighted.points.row(i).transpose() - mu;
      scatter += weighted.w_bar(i) * d * d.transpose();
    }
    for (const auto form : {LookbackForm::kOwn, LookbackForm::kAll}) {
      const Matrix got =
          lookback_covariance(weighted, q, assignment, proposal_log_densities(weighted.points, q), 1e-8, form);
      worst = std::max(worst, (got - scatter).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= 1e-12, fmt("max entrywise difference %.3g over 50 instances", worst)};
}

Outcome determinism() {
  const auto mixture2 = make_mixture_target(five_normal_mixture_2d());
  const auto mixture10 = make_mixture_target(three_normal_mixture(10));
  int checked = 0;
  for (const auto sampler : {Sampler::kMc, Sampler::kQmc}) {
    for (const auto weighting : {Weighting::kStandard, Weighting::kDm}) {
      for (const auto resampler : {Resampler::kMultinomial, Resampler::kSystematic, Resampler::kIsp}) {
        for (const auto mode : {AdaptMode::kStatic, AdaptMode::kLookback, AdaptMode::kExactEm}) {
          RunConfig cfg;
          cfg.K = 10;
          cfg.J = 8;
          cfg.T = 3;
          cfg.sigma0 = 0.3;
          cfg.sampler = sampler;
          cfg.weighting = weighting;
          cfg.resampler = resampler;
          cfg.adapt.mode = mode;
          cfg.adapt.isotropic = mode == AdaptMode::kLookback;
          cfg.seed = 4242 + static_cast<std::uint64_t>(checked);
          const auto& target = checked % 2 == 0 ? mixture2 : mixture10;
          auto first = run_population(cfg, target);
          auto second = run_population(cfg, target);
          first.estimates["weighted"] = weighted_estimate(first, identity_integrand(target.dim));
          second.estimates["weighted"] = weighted_estimate(second, identity_integrand(target.dim));
          if (serialize(first) != serialize(second)) {
            return {false, fmt("configuration %d differs between runs", checked)};
          }
          ++checked;
        }
      }
    }
  }
  return {true, fmt("%d configurations serialized identically", checked)};
}

Outcome inverse_cdf_accuracy() {
  using Real = boost::multiprecision::cpp_bin_float_50;
  constexpr int kPoints = 10000;
  const double lo = 1e-12;
  const double hi = 1.0 - 1e-12;
  double worst = 0.0;
  double worst_u = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double u = i == kPoints - 1 ? hi : lo + (hi - lo) * static_cast<double>(i) / (kPoints - 1);
    const Real exact = -boost::multiprecision::sqrt(Real(2)) * boost::math::erfc_inv(Real(2) * Real(u));
    const double err = std::abs(static_cast<double>(Real(inverse_normal_cdf(u)) - exact));
    if (err > worst) {
      worst = err;
      worst_u = u;
    }
  }
  return {worst <= 1e-8, fmt("max abs error %.3g at u = %.17g over %d grid points", worst, worst_u, kPoints)};
}

struct Criterion {
  const char* id;
  const char* title;
  double limit_s;
  std::function<Outcome()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC1", "ISP resampling beats multinomial and systematic by a decade", 120.0, resampling_ordering},
      {"AC2", "ISP resampling has the lowest energy criterion", 60.0, energy_ordering},
      {"AC3", "PQMC beats PMC in 2-D",
       600.0, [] { return pqmc_gap({"mixture5_2d", 2}, 50, 20, 20, 2.0); }},
      {"AC4", "PQMC beats PMC in 10-D",
       900.0, [] { return pqmc_gap({"mixture3", 10}, 100, 20, 10, 0.5); }},
      {"AC5", "standard estimator is unbiased with known Z", 300.0, unbiasedness},
      {"AC6", "self-normalized estimates ignore target scale", 0.0, scale_invariance},
      {"AC7", "ISP resampling optimal on small instances", 0.0, small_instance_optimality},
      {"AC8", "CCP criterion never increases", 0.0, ccp_descent},
      {"AC9", "single-proposal lookback equals weighted scatter", 0.0, lookback_degeneracy},
      {"AC10", "runs are bitwise deterministic", 0.0, determinism},
      {"AC11", "inverse normal CDF accuracy", 0.0, inverse_cdf_accuracy},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0.0 && elapsed > c.limit_s) {
      outcome.pass = false;
      outcome.detail += fmt("; exceeded time limit of %.0f s", c.limit_s);
    }
    failures += outcome.pass ? 0 : 1;
    std::printf("%s %s: %s -- %s [%.2f s]\n", outcome.pass ? "PASS" : "FAIL", c.id, c.title, outcome.detail.c_str(),
                elapsed);
    std::fflush(stdout);
  }
  std::printf("%d of %zu acceptance criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
