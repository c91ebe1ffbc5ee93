// Copyright 2026 The qtoken Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Talks to the simulator only through the C API.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qtoken/qtoken.h"

namespace {

struct CommonOptions {
  std::string profile = "brisbane";
  std::uint64_t seed = qt_default_seed();
  std::int64_t shots = 0;
  std::string out;
  std::string format = "csv";
  bool svg = false;
  int threads = 1;
};

struct ForgeOptions {
  std::vector<double> attack_z{1.0};
  std::vector<double> attack_phi{0.0};
  std::size_t tokens = 10000;
  bool fallback_only = false;
  bool noiseless_attack = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--profile", opts.profile, "Built-in profile name or path to a JSON profile")
      ->capture_default_str();
  cmd->add_option("--seed", opts.seed, "Master random seed")->capture_default_str();
  cmd->add_option("--shots", opts.shots, "Shots per measurement (default: the profile's shots_default)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", opts.out, "Output directory (default: $QTOKEN_OUT_DIR, else ./qtoken_out)");
  cmd->add_option("--format", opts.format, "Table format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_flag("--svg", opts.svg, "Also write SVG plots");
  cmd->add_option("--threads", opts.threads, "Worker threads; results do not depend on this")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_forge(CLI::App* cmd, ForgeOptions& opts) {
  cmd->add_option("--tokens", opts.tokens, "Number of bank tokens attacked")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--attack-z", opts.attack_z, "Attack axis z values, combined with every --attack-phi")
      ->check(CLI::Range(-1.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--attack-phi", opts.attack_phi, "Attack axis azimuths (rad)")->capture_default_str();
  cmd->add_flag("--fallback-only", opts.fallback_only, "Always forge a uniformly random state");
  cmd->add_flag("--noiseless-attack", opts.noiseless_attack, "Invert the exact attacker fraction");
}

// Owns a configured qt_run_config handle.
class Config {
 public:
  Config() {
    if (qt_run_config_create(&handle_) != QT_OK) throw std::runtime_error(qt_last_error());
  }
  ~Config() { qt_run_config_free(handle_); }
  Config(const Config&) = delete;
  Config& operator=(const Config&) = delete;

  qt_status apply(const CommonOptions& opts) {
    qt_status status = QT_OK;
    auto step = [&](qt_status s) {
      if (status == QT_OK) status = s;
    };
    step(qt_run_config_set_profile(handle_, opts.profile.c_str()));
    step(qt_run_config_set_seed(handle_, opts.seed));
    if (opts.shots > 0) step(qt_run_config_set_shots(handle_, opts.shots));
    if (!opts.out.empty()) step(qt_run_config_set_out_dir(handle_, opts.out.c_str()));
    step(qt_run_config_set_format(handle_, opts.format == "json" ? QT_FORMAT_JSON : QT_FORMAT_CSV));
    step(qt_run_config_set_svg(handle_, opts.svg ? 1 : 0));
    step(qt_run_config_set_threads(handle_, opts.threads));
    return status;
  }

  const qt_run_config* get() const { return handle_; }

 private:
  qt_run_config* handle_ = nullptr;
};

struct ForgeRequestStorage {
  std::vector<qt_angles> axes;
  qt_forge_request request{};
};

ForgeRequestStorage build_forge_request(const ForgeOptions& opts) {
  ForgeRequestStorage storage;
  for (double z : opts.attack_z) {
    for (double phi : opts.attack_phi) {
      storage.axes.push_back({std::acos(z), phi});
    }
  }
  storage.request.attack_axes = storage.axes.data();
  storage.request.attack_axis_count = storage.axes.size();
  storage.request.tokens = opts.tokens;
  storage.request.fallback_only = opts.fallback_only ? 1 : 0;
  storage.request.noiseless_attack = opts.noiseless_attack ? 1 : 0;
  return storage;
}

int finish(qt_status status, char*& summary) {
  if (status != QT_OK) {
    std::cerr << "error: " << qt_last_error() << "\n";
    return static_cast<int>(status);
  }
  if (summary) std::cout << summary << "\n";
  qt_string_free(summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qtoken: ensemble quantum token protocol simulator.\n"
               "Default seed: " + std::to_string(qt_default_seed()) +
               " (override with --seed). Exit codes: 0 ok, 1 runtime, 2 usage, 3 data."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qt_version()));

  CommonOptions common;
  ForgeOptions forge;

  auto* rabi = app.add_subcommand("rabi", "Rabi scan and noise-model fit");
  int theta_points = 41;
  int repetitions = 100;
  add_common(rabi, common);
  rabi->add_option("--theta-points", theta_points, "Angles in [0, pi]")->capture_default_str();
  rabi->add_option("--repetitions", repetitions, "Records per angle")->capture_default_str();

  auto* bank = app.add_subcommand("bank-bench", "Bank self-acceptance benchmark");
  std::string strategy = "uniform_sphere";
  std::size_t bank_tokens = 10000;
  std::size_t grid_theta = 10;
  std::size_t grid_phi = 10;
  add_common(bank, common);
  bank->add_option("--strategy", strategy, "Secret-angle sampling")
      ->check(CLI::IsMember({"uniform_sphere", "linear_grid", "equator_weighted"}))
      ->capture_default_str();
  bank->add_option("--tokens", bank_tokens, "Tokens for the random strategies")->capture_default_str();
  bank->add_option("--grid-theta", grid_theta, "Theta points for linear_grid")->capture_default_str();
  bank->add_option("--grid-phi", grid_phi, "Phi points for linear_grid")->capture_default_str();

  auto* scan = app.add_subcommand("attack-scan", "Attacker readings over a bank grid");
  std::vector<double> scan_z;
  std::vector<double> scan_phi{0.0};
  std::size_t bank_z_points = 11;
  std::size_t bank_phi_points = 12;
  add_common(scan, common);
  scan->add_option("--z-a", scan_z, "Attack axis z values (at least one)")->check(CLI::Range(-1.0, 1.0));
  scan->add_option("--phi-a", scan_phi, "Attack axis azimuths (rad)")->capture_default_str();
  scan->add_option("--bank-z-points", bank_z_points, "Bank grid points in z_b")->capture_default_str();
  scan->add_option("--bank-phi-points", bank_phi_points, "Bank grid points in phi_b")->capture_default_str();

  auto* forge_cmd = app.add_subcommand("forge-bench", "Forgery campaign over random bank tokens");
  add_common(forge_cmd, common);
  add_forge(forge_cmd, forge);

  auto* security = app.add_subcommand("security", "Threshold choice and coin-level security sweep");
  double target_pb = 0.999;
  std::vector<int> m_list{1, 4, 9, 16, 25, 36, 49};
  std::string from_dir;
  add_common(security, common);
  add_forge(security, forge);
  security->add_option("--target-pb", target_pb, "Required coin acceptance probability for the bank")
      ->capture_default_str();
  security->add_option("--m-list", m_list, "Tokens per coin to report")->delimiter(',')->capture_default_str();
  security->add_option("--from", from_dir, "Reuse nb_samples.csv and campaign.csv from this directory");

  auto* fit = app.add_subcommand("fit", "Offline fit of a replay CSV");
  std::string input;
  std::string kind = "noise-model";
  add_common(fit, common);
  fit->add_option("input", input, "Replay CSV")->required();
  fit->add_option("--kind", kind, "Fit to perform")
      ->check(CLI::IsMember({"gaussian", "skew-normal", "noise-model"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return QT_ERR_USAGE;
  }

  Config config;
  if (qt_status status = config.apply(common); status != QT_OK) {
    char* none = nullptr;
    return finish(status, none);
  }

  char* summary = nullptr;
  if (*rabi) return finish(qt_cmd_rabi(config.get(), theta_points, repetitions, &summary), summary);
  if (*bank) {
    static const std::map<std::string, qt_sampling> kStrategies{
        {"uniform_sphere", QT_SAMPLING_UNIFORM_SPHERE},
        {"linear_grid", QT_SAMPLING_LINEAR_GRID},
        {"equator_weighted", QT_SAMPLING_EQUATOR_WEIGHTED}};
    return finish(qt_cmd_bank_bench(config.get(), kStrategies.at(strategy), bank_tokens, grid_theta, grid_phi,
                                    &summary),
                  summary);
  }
  if (*scan) {
    return finish(qt_cmd_attack_scan(config.get(), scan_z.data(), scan_z.size(), scan_phi.data(), scan_phi.size(),
                                     bank_z_points, bank_phi_points, &summary),
                  summary);
  }
  if (*forge_cmd) {
    const auto request = build_forge_request(forge);
    return finish(qt_cmd_forge_bench(config.get(), &request.request, &summary), summary);
  }
  if (*security) {
    const auto request = build_forge_request(forge);
    return finish(qt_cmd_security(config.get(), target_pb, m_list.data(), m_list.size(), &request.request,
                                  from_dir.c_str(), &summary),
                  summary);
  }
  static const std::map<std::string, qt_fit_kind> kKinds{
      {"gaussian", QT_FIT_GAUSSIAN}, {"skew-normal", QT_FIT_SKEW_NORMAL}, {"noise-model", QT_FIT_NOISE_MODEL}};
  return finish(qt_cmd_fit(config.get(), input.c_str(), kKinds.at(kind), &summary), summary);
}
