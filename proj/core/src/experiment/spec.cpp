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

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <yaml-cpp/yaml.h>

#include <pqmc/error.hpp>
#include <pqmc/experiment.hpp>
#include <pqmc/lds.hpp>

namespace pqmc {

namespace {

void reject_unknown_keys(const YAML::Node& node, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (allowed.count(key) == 0) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
T get(const YAML::Node& node, const std::string& key, const std::string& where) {
  if (!node[key]) {
    throw ConfigError(where + ": missing key '" + key + "'");
  }
  try {
    return node[key].as<T>();
  } catch (const YAML::Exception& e) {
    throw ConfigError(where + ": bad value for '" + key + "': " + e.what());
  }
}

template <typename T>
T get_or(const YAML::Node& node, const std::string& key, T fallback, const std::string& where) {
  return node[key] ? get<T>(node, key, where) : fallback;
}

YAML::Node parse_root(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("spec is not valid YAML: ") + e.what());
  }
  if (!root.IsMap()) {
    throw ConfigError("spec must be a mapping");
  }
  return root;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open spec file " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AdaptConfig parse_adapt(const YAML::Node& node, const std::string& where) {
  AdaptConfig cfg;
  if (!node) {
    return cfg;
  }
  if (!node.IsMap()) {
    throw ConfigError(where + ": adapt must be a mapping");
  }
  reject_unknown_keys(node, {"mode", "isotropic", "em_max_iters", "cov_floor", "lookback_form"}, where + ".adapt");
  cfg.mode = parse_adapt_mode(get_or<std::string>(node, "mode", "static", where));
  cfg.isotropic = get_or<bool>(node, "isotropic", false, where);
  cfg.em_max_iters = get_or<std::size_t>(node, "em_max_iters", cfg.em_max_iters, where);
  cfg.cov_floor = get_or<double>(node, "cov_floor", cfg.cov_floor, where);
  cfg.lookback_form = parse_lookback_form(get_or<std::string>(node, "lookback_form", "all", where));
  if (!(cfg.cov_floor > 0.0)) {
    throw ConfigError(where + ": cov_floor must be positive");
  }
  return cfg;
}

}  // namespace

Target resolve_target(const TargetRef& ref) {
  if (ref.id == "mixture5_2d") {
    if (ref.dim != 0 && ref.dim != 2) {
      throw ConfigError("target mixture5_2d is two-dimensional");
    }
    return make_mixture_target(five_normal_mixture_2d(), "mixture5_2d");
  }
  if (ref.id == "mixture3") {
    if (ref.dim == 0) {
      throw ConfigError("target mixture3 needs dim");
    }
    return make_mixture_target(three_normal_mixture(ref.dim), "mixture3");
  }
  if (ref.id == "standard_normal") {
    if (ref.dim == 0) {
      throw ConfigError("target standard_normal needs dim");
    }
    return standard_normal_target(ref.dim);
  }
  throw ConfigError("unknown target id '" + ref.id + "'");
}

ExperimentSpec parse_experiment_spec(const std::string& yaml_text) {
  const YAML::Node root = parse_root(yaml_text);
  reject_unknown_keys(root,
                      {"name", "target", "T", "kj", "sigma", "init_box", "replications", "full_replications",
                       "base_seed", "estimator_normalization", "algorithms"},
                      "spec");
  ExperimentSpec spec;
  spec.name = get<std::string>(root, "name", "spec");

  const YAML::Node target = root["target"];
  if (!target || !target.IsMap()) {
    throw ConfigError("spec: target must be a mapping with an id");
  }
  reject_unknown_keys(target, {"id", "dim"}, "spec.target");
  spec.target.id = get<std::string>(target, "id", "spec.target");
  spec.target.dim = get_or<std::size_t>(target, "dim", 0, "spec.target");
  resolve_target(spec.target);

  spec.T = get_or<std::size_t>(root, "T", spec.T, "spec");
  const auto kj = get<std::vector<std::vector<std::size_t>>>(root, "kj", "spec");
  for (const auto& pair : kj) {
    if (pair.size() != 2) {
      throw ConfigError("spec: every kj entry must be a [K, J] pair");
    }
    spec.kj.emplace_back(pair[0], pair[1]);
  }
  spec.sigmas = get<std::vector<double>>(root, "sigma", "spec");
  if (root["init_box"]) {
    const auto box = get<std::vector<double>>(root, "init_box", "spec");
    if (box.size() != 2) {
      throw ConfigError("spec: init_box must be [lo, hi]");
    }
    spec.init_box = SobolBox{box[0], box[1]};
  }
  spec.replications = get_or<std::size_t>(root, "replications", spec.replications, "spec");
  spec.full_replications = get_or<std::size_t>(root, "full_replications", spec.full_replications, "spec");
  spec.base_seed = get_or<std::uint64_t>(root, "base_seed", spec.base_seed, "spec");
  const auto normalization = get_or<std::string>(root, "estimator_normalization", "self", "spec");
  if (normalization != "self" && normalization != "known") {
    throw ConfigError("spec: estimator_normalization must be 'self' or 'known'");
  }
  spec.use_known_z = normalization == "known";

  const YAML::Node algorithms = root["algorithms"];
  if (!algorithms || !algorithms.IsSequence() || algorithms.size() == 0) {
    throw ConfigError("spec: algorithms must be a non-empty list");
  }
  for (std::size_t a = 0; a < algorithms.size(); ++a) {
    const YAML::Node node = algorithms[a];
    const std::string where = "spec.algorithms[" + std::to_string(a) + "]";
    if (!node.IsMap()) {
      throw ConfigError(where + ": must be a mapping");
    }
    reject_unknown_keys(node, {"name", "sampler", "weighting", "resampler", "adapt"}, where);
    AlgorithmSpec alg;
    alg.name = get<std::string>(node, "name", where);
    alg.sampler = parse_sampler(get_or<std::string>(node, "sampler", "mc", where));
    alg.weighting = parse_weighting(get_or<std::string>(node, "weighting", "dm", where));
    alg.resampler = parse_resampler(get_or<std::string>(node, "resampler", "systematic", where));
    alg.adapt = parse_adapt(node["adapt"], where);
    spec.algorithms.push_back(alg);
  }

  if (spec.T == 0 || spec.kj.empty() || spec.sigmas.empty() || spec.replications == 0 ||
      spec.full_replications == 0) {
    throw ConfigError("spec: T, kj, sigma and replications must be non-empty and positive");
  }
  for (const auto& alg : spec.algorithms) {
    for (const auto& [K, J] : spec.kj) {
      for (const double sigma : spec.sigmas) {
        validate(cell_config(spec, alg, K, J, sigma, 0));
      }
    }
  }
  return spec;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
  return parse_experiment_spec(read_file(path));
}

SweepSpec parse_sweep_spec(const std::string& yaml_text) {
  const YAML::Node root = parse_root(yaml_text);
  reject_unknown_keys(root,
                      {"name", "M", "n", "dims", "proposal_cov_scale", "replications", "full_replications",
                       "base_seed", "methods"},
                      "spec");
  SweepSpec spec;
  spec.name = get<std::string>(root, "name", "spec");
  spec.M = get_or<std::size_t>(root, "M", spec.M, "spec");
  spec.n = get_or<std::size_t>(root, "n", spec.n, "spec");
  spec.dims = get<std::vector<std::size_t>>(root, "dims", "spec");
  spec.proposal_cov_scale = get_or<double>(root, "proposal_cov_scale", spec.proposal_cov_scale, "spec");
  spec.replications = get_or<std::size_t>(root, "replications", spec.replications, "spec");
  spec.full_replications = get_or<std::size_t>(root, "full_replications", spec.full_replications, "spec");
  spec.base_seed = get_or<std::uint64_t>(root, "base_seed", spec.base_seed, "spec");
  if (root["methods"]) {
    spec.methods.clear();
    for (const auto& m : get<std::vector<std::string>>(root, "methods", "spec")) {
      spec.methods.push_back(parse_resampler(m));
    }
  }
  if (spec.M == 0 || spec.n == 0 || spec.dims.empty() || spec.replications == 0 || spec.methods.empty() ||
      !(spec.proposal_cov_scale > 0.0)) {
    throw ConfigError("spec: M, n, dims, replications and methods must be non-empty and positive");
  }
  for (const auto p : spec.dims) {
    if (p == 0 || p > kMaxSobolDimension) {
      throw ConfigError("spec: every dimension must be between 1 and " + std::to_string(kMaxSobolDimension));
    }
  }
  return spec;
}

SweepSpec load_sweep_spec(const std::filesystem::path& path) { return parse_sweep_spec(read_file(path)); }

}  // namespace pqmc
