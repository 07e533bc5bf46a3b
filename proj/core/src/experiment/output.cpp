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
#include <cstdio>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include <pqmc/experiment.hpp>

#ifndef PQMC_GIT_REVISION
#define PQMC_GIT_REVISION "unknown"
#endif

namespace pqmc {

namespace {

using nlohmann::json;

std::string num(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json adapt_json(const AdaptConfig& a) {
  return {{"mode", std::string(to_string(a.mode))},
          {"isotropic", a.isotropic},
          {"isotropize", a.isotropic ? "after_update" : "none"},
          {"em_max_iters", a.em_max_iters},
          {"cov_floor", a.cov_floor},
          {"lookback_form", std::string(to_string(a.lookback_form))}};
}

json options_json(const ExecutionOptions& opts, std::size_t reps, std::uint64_t base_seed) {
  return {{"replications", reps}, {"base_seed", base_seed}, {"full", opts.full},
          {"threads", opts.threads}, {"record_timing", opts.record_timing}};
}

}  // namespace

const char* const kMseCsvHeader =
    "cell_id,estimator,algorithm,K,J,sigma,logmse_mean_m,logmse_min_m,logmse_max_m,logmse_mean_z,logmse_min_z,"
    "logmse_max_z,ess_mean,runtime_s";

const char* const kSweepCsvHeader =
    "cell_id,p,method,M,n,ess,logmse_is_mean,logmse_is_min,logmse_is_max,logmse_truth_mean,logmse_truth_min,"
    "logmse_truth_max,runs,runtime_s";

void write_csv(std::ostream& os, const std::vector<MseRow>& rows) {
  os << kMseCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.cell_id << ',' << r.estimator << ',' << r.algorithm << ',' << r.K << ',' << r.J << ',' << num(r.sigma)
       << ',' << num(r.logmse_mean_m) << ',' << num(r.logmse_min_m) << ',' << num(r.logmse_max_m) << ','
       << num(r.logmse_mean_z) << ',' << num(r.logmse_min_z) << ',' << num(r.logmse_max_z) << ','
       << num(r.ess_mean) << ',' << num(r.runtime_s) << '\n';
  }
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kSweepCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.cell_id << ',' << r.p << ',' << r.method << ',' << r.M << ',' << r.n << ',' << num(r.ess) << ','
       << num(r.logmse_is_mean) << ',' << num(r.logmse_is_min) << ',' << num(r.logmse_is_max) << ','
       << num(r.logmse_truth_mean) << ',' << num(r.logmse_truth_min) << ',' << num(r.logmse_truth_max) << ','
       << r.runs << ',' << num(r.runtime_s) << '\n';
  }
}

std::string source_revision() { return PQMC_GIT_REVISION; }

std::string experiment_json(const ExperimentSpec& spec, const ExecutionOptions& opts, const std::vector<MseRow>& rows) {
  json algorithms = json::array();
  for (const auto& a : spec.algorithms) {
    algorithms.push_back({{"name", a.name},
                          {"sampler", std::string(to_string(a.sampler))},
                          {"weighting", std::string(to_string(a.weighting))},
                          {"resampler", std::string(to_string(a.resampler))},
                          {"adapt", adapt_json(a.adapt)}});
  }
  json kj = json::array();
  for (const auto& [K, J] : spec.kj) {
    kj.push_back({K, J});
  }
  json out;
  out["name"] = spec.name;
  out["revision"] = source_revision();
  out["config"] = {{"target", {{"id", spec.target.id}, {"dim", spec.target.dim}}},
                   {"T", spec.T},
                   {"kj", kj},
                   {"sigma", spec.sigmas},
                   {"init_box", {spec.init_box.lo, spec.init_box.hi}},
                   {"replications", spec.replications},
                   {"full_replications", spec.full_replications},
                   {"base_seed", spec.base_seed},
                   {"estimator_normalization", spec.use_known_z ? "known" : "self"},
                   {"algorithms", algorithms}};
  out["execution"] = options_json(opts, replications_for(spec, opts), base_seed_for(spec, opts));
  json jrows = json::array();
  for (const auto& r : rows) {
    json row = {{"cell_id", r.cell_id},
                {"estimator", r.estimator},
                {"algorithm", r.algorithm},
                {"K", r.K},
                {"J", r.J},
                {"sigma", r.sigma},
                {"logmse_mean_m", r.logmse_mean_m},
                {"logmse_min_m", r.logmse_min_m},
                {"logmse_max_m", r.logmse_max_m},
                {"logmse_mean_z", r.logmse_mean_z},
                {"logmse_min_z", r.logmse_min_z},
                {"logmse_max_z", r.logmse_max_z},
                {"ess_mean", r.ess_mean},
                {"runtime_s", r.runtime_s},
                {"target_evaluations", r.target_evaluations},
                {"seeds", r.seeds}};
    if (!r.error.empty()) {
      row["error"] = r.error;
    }
    jrows.push_back(row);
  }
  out["rows"] = jrows;
  return out.dump(2) + "\n";
}

std::string sweep_json(const SweepSpec& spec, const ExecutionOptions& opts, const std::vector<SweepRow>& rows) {
  const std::size_t reps = opts.replications.value_or(opts.full ? spec.full_replications : spec.replications);
  const std::uint64_t base_seed = opts.base_seed.value_or(spec.base_seed);
  json methods = json::array();
  for (const auto m : spec.methods) {
    methods.push_back(std::string(to_string(m)));
  }
  json out;
  out["name"] = spec.name;
  out["revision"] = source_revision();
  out["config"] = {{"M", spec.M},
                   {"n", spec.n},
                   {"dims", spec.dims},
                   {"proposal_cov_scale", spec.proposal_cov_scale},
                   {"replications", spec.replications},
                   {"full_replications", spec.full_replications},
                   {"base_seed", spec.base_seed},
                   {"methods", methods}};
  out["execution"] = options_json(opts, reps, base_seed);
  json jrows = json::array();
  for (const auto& r : rows) {
    jrows.push_back({{"cell_id", r.cell_id},
                     {"p", r.p},
                     {"method", r.method},
                     {"M", r.M},
                     {"n", r.n},
                     {"ess", r.ess},
                     {"logmse_is_mean", r.logmse_is_mean},
                     {"logmse_is_min", r.logmse_is_min},
                     {"logmse_is_max", r.logmse_is_max},
                     {"logmse_truth_mean", r.logmse_truth_mean},
                     {"logmse_truth_min", r.logmse_truth_min},
                     {"logmse_truth_max", r.logmse_truth_max},
                     {"runs", r.runs},
                     {"runtime_s", r.runtime_s}});
  }
  out["rows"] = jrows;
  return out.dump(2) + "\n";
}

}  // namespace pqmc
