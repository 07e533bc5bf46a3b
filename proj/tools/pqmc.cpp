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

// Command-line driver for replicated population Monte Carlo experiments.
//
//   pqmc run configs/table1_2d.yaml --out results
//   pqmc resample-sweep configs/resample_ess.yaml --reps 20

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <pqmc/error.hpp>
#include <pqmc/experiment.hpp>

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitFailedCell = 3;

struct CommonArgs {
  std::string spec;
  std::string out = "results";
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool full = false;
  std::size_t threads = 0;
  bool no_timing = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("spec", args.spec, "YAML experiment spec")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out, "Output directory")->capture_default_str();
  cmd->add_option("--reps", args.reps, "Override the replication count");
  cmd->add_option("--seed", args.seed, "Override the base seed")->each([&](const std::string&) { args.seed_set = true; });
  cmd->add_flag("--full", args.full, "Use the full-scale replication count of the experiment file");
  cmd->add_option("--threads", args.threads, "Worker threads (default: hardware concurrency)");
  cmd->add_flag("--no-timing", args.no_timing, "Write runtime_s as 0 for byte-reproducible output");
}

pqmc::ExecutionOptions to_options(const CommonArgs& args) {
  pqmc::ExecutionOptions opts;
  opts.threads = args.threads > 0 ? args.threads : std::max(1U, std::thread::hardware_concurrency());
  if (args.reps > 0) {
    opts.replications = args.reps;
  }
  if (args.seed_set) {
    opts.base_seed = args.seed;
  }
  opts.full = args.full;
  opts.record_timing = !args.no_timing;
  return opts;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << text;
}

template <typename Rows, typename Writer>
void write_outputs(const std::filesystem::path& dir, const std::string& name, const Rows& rows,
                   const std::string& json, const std::string& started, double wall_s, Writer&& csv) {
  std::filesystem::create_directories(dir);
  std::ostringstream table;
  csv(table, rows);
  write_file(dir / (name + ".csv"), table.str());
  write_file(dir / (name + ".json"), json);
  const nlohmann::json meta = {{"started_utc", started}, {"finished_utc", utc_now()}, {"wall_time_s", wall_s}};
  write_file(dir / (name + ".meta.json"), meta.dump(2) + "\n");
  std::cout << table.str();
  std::cerr << "wrote " << (dir / (name + ".csv")).string() << "\n";
}

int run_command(const CommonArgs& args) {
  const auto spec = pqmc::load_experiment_spec(args.spec);
  const auto opts = to_options(args);
  const auto started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = pqmc::run_experiment(spec, opts);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_outputs(args.out, spec.name, rows, pqmc::experiment_json(spec, opts, rows), started, wall,
                [](std::ostream& os, const auto& r) { pqmc::write_csv(os, r); });
  bool failed = false;
  for (const auto& row : rows) {
    if (!row.error.empty()) {
      std::cerr << "failed cell " << row.cell_id << " (" << row.estimator << "): " << row.error << "\n";
      failed = true;
    }
  }
  return failed ? kExitFailedCell : 0;
}

int sweep_command(const CommonArgs& args) {
  const auto spec = pqmc::load_sweep_spec(args.spec);
  const auto opts = to_options(args);
  const auto started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = pqmc::resampling_sweep(spec, opts);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_outputs(args.out, spec.name, rows, pqmc::sweep_json(spec, opts, rows), started, wall,
                [](std::ostream& os, const auto& r) { pqmc::write_csv(os, r); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Population Monte Carlo and quasi-Monte Carlo experiment runner"};
  app.require_subcommand(1);

  CommonArgs run_args;
  auto* run = app.add_subcommand("run", "Run a replicated PMC/PQMC experiment grid");
  add_common(run, run_args);

  CommonArgs sweep_args;
  auto* sweep = app.add_subcommand("resample-sweep", "Compare resampling schemes across dimensions");
  add_common(sweep, sweep_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (run->parsed()) {
      return run_command(run_args);
    }
    return sweep_command(sweep_args);
  } catch (const pqmc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
