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

#ifndef QTOKEN_COMMANDS_HPP
#define QTOKEN_COMMANDS_HPP

// File-emitting pipelines behind the CLI subcommands. Each command writes
// its tables and JSON documents into the configured output directory and
// returns the paths plus a JSON summary.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtoken/attacker.hpp"
#include "qtoken/bank.hpp"
#include "qtoken/measurement.hpp"
#include "qtoken/rng.hpp"
#include "qtoken/security.hpp"
#include "qtoken/table_io.hpp"

namespace qtoken {

/// Environment variable consulted when no output directory is given.
inline constexpr const char* kOutDirEnv = "QTOKEN_OUT_DIR";
inline constexpr const char* kDefaultOutDir = "qtoken_out";

struct RunConfig {
  std::string profile = "brisbane";
  std::uint64_t seed = kDefaultSeed;
  /// 0 selects the profile's shots_default.
  std::int64_t shots = 0;
  std::filesystem::path out_dir;
  OutputFormat format = OutputFormat::kCsv;
  bool svg = false;
  int threads = 1;

  /// out_dir, else $QTOKEN_OUT_DIR, else ./qtoken_out.
  std::filesystem::path resolved_out_dir() const;
};

struct CommandResult {
  std::vector<std::filesystem::path> files;
  nlohmann::json summary;
};

/// Rabi scan over theta_points evenly spaced angles in [0, pi]; writes
/// rabi.{csv|json}, rabi_records.csv (replay schema), rabi_fit.json and
/// optionally rabi.svg.
CommandResult cmd_rabi(const RunConfig& config, int theta_points, int repetitions);

/// Bank self-acceptance benchmark; writes nb_samples, nb_angle_bins and
/// nb_fit.json (plus nb_hist.svg).
CommandResult cmd_bank_bench(const RunConfig& config, const SamplingPlan& plan);

struct AttackScanRequest {
  std::vector<double> z_a;
  std::vector<double> phi_a;
  std::size_t bank_z_points = 11;
  std::size_t bank_phi_points = 12;
};

/// Attacker readings over a bank grid for every (z_a, phi_a); writes
/// attack_scan with the analytic value and residual, and
/// attack_scan_summary.json.
CommandResult cmd_attack_scan(const RunConfig& config, const AttackScanRequest& request);

struct ForgeRequest {
  std::vector<BlochAngles> attack_axes{BlochAngles()};
  std::size_t tokens = 10000;
  bool fallback_only = false;
  bool noiseless_attack = false;
};

/// Forgery campaign over uniform-sphere bank tokens; writes campaign,
/// nf_vs_theta and forge_fit.json (plus nf_hist.svg).
CommandResult cmd_forge_bench(const RunConfig& config, const ForgeRequest& request);

struct SecurityRequest {
  double target_p_b = 0.999;
  std::vector<int> tokens_list{1, 4, 9, 16, 25, 36, 49};
  ForgeRequest forge;
  /// When set, reads nb_samples.csv and campaign.csv from this directory
  /// instead of running the benches.
  std::filesystem::path from_dir;
};

/// Bank and forge benches (or their prior outputs), fits, threshold sweep;
/// writes security_report.json and security_curve.
CommandResult cmd_security(const RunConfig& config, const SecurityRequest& request);

enum class FitKind { kGaussian, kSkewNormal, kNoiseModel };
FitKind fit_kind_from_string(const std::string& text);

/// Offline fit of a replay CSV; writes fit.json.
CommandResult cmd_fit(const RunConfig& config, const std::filesystem::path& input, FitKind kind);

/// JSON document written by cmd_rabi and by cmd_fit for noise-model fits.
nlohmann::json noise_fit_json(const std::string& profile, const RabiScan& scan, const NoiseModelFit& fit);

}  // namespace qtoken

#endif  // QTOKEN_COMMANDS_HPP
