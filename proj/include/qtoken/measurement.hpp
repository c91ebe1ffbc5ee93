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

#ifndef QTOKEN_MEASUREMENT_HPP
#define QTOKEN_MEASUREMENT_HPP

// Stochastic stand-in for ensemble hardware. One simulated qubit is prepared
// and measured `shots` times and the counts are aggregated into a record
// (time average in place of an ensemble average).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtoken/bloch.hpp"
#include "qtoken/rng.hpp"

namespace qtoken {

enum class NoiseMode {
  /// Each shot emits Poisson counts with mean n0 or n1.
  kPhotonCount,
  /// Each shot is a 0/1 readout through a symmetric confusion channel.
  kBinaryReadout,
};

const char* to_string(NoiseMode mode) noexcept;
NoiseMode noise_mode_from_string(const std::string& text);

struct HardwareProfile {
  std::string name;
  ObservableModel observable;
  std::int64_t shots_default = 100;
  NoiseMode noise_mode = NoiseMode::kPhotonCount;

  /// Contrast the fraction n is sensitive to. Equals |c|: when n0 > n1 the
  /// complementary n convention is used, which flips the sign.
  double effective_contrast() const noexcept;

  /// Throws PreconditionError if shots_default < 1 or the name is empty.
  void validate() const;
};

/// Built-in profiles: sherbrooke, kyiv, osaka, brisbane, kyoto (hardware
/// quality parameters, count scale n0 + n1 = 100) and `ideal` (c = 1, no
/// experimental noise).
const std::vector<HardwareProfile>& builtin_profiles();
std::optional<HardwareProfile> find_builtin_profile(const std::string& name);

/// Parses a profile document with fields name, c or (n0, n1),
/// sigma_exp_norm, shots_default, noise_mode and optional scale.
HardwareProfile profile_from_json(const nlohmann::json& doc);
nlohmann::json profile_to_json(const HardwareProfile& profile);
HardwareProfile load_profile_file(const std::filesystem::path& path);

/// Built-in name, or a path to a JSON profile file.
HardwareProfile resolve_profile(const std::string& reference);

struct MeasurementRecord {
  std::int64_t shots = 0;
  double total_counts = 0.0;
  /// Fraction of the ensemble found in |0>.
  double n_zero_fraction = 0.0;
  /// Standard error of n_zero_fraction implied by the noise model at the
  /// observed fraction.
  double sigma_est = 0.0;
  BlochAngles prep;
  BlochAngles meas;
};

/// Fraction in |0> implied by aggregate counts, before any clipping:
/// 1 - counts / (shots (n0 + n1)), or counts / (shots (n0 + n1)) when n0 > n1.
double fraction_from_counts(const ObservableModel& model, std::int64_t shots, double total_counts);

/// Plug-in standard error of n for a record with the given fraction.
double fraction_standard_error(const ObservableModel& model, std::int64_t shots, double n_zero_fraction);

/// Simulates one aggregate record: prepare R(prep)|0>, unrotate along
/// meas_axis, measure `shots` times. E[n_zero_fraction] equals
/// attacker_fraction(|c|, prep, meas_axis). Throws PreconditionError when
/// shots < 1.
MeasurementRecord simulate_measurement(const HardwareProfile& profile, const BlochAngles& prep,
                                       const BlochAngles& meas_axis, std::int64_t shots,
                                       const RngSeed& seed);

struct RabiPoint {
  double theta;
  double mean_norm;
  double std_norm;
};

struct RabiScan {
  /// n0 + n1 of the profile that produced the scan.
  double scale = 100.0;
  std::int64_t shots = 1;
  std::vector<RabiPoint> points;
  /// Raw records, point-major (repetitions consecutive per theta).
  std::vector<MeasurementRecord> records;
};

/// Rabi scan: for each theta prepares R(theta, 0)|0>, measures the observable
/// directly, repeats. mean_norm is <N>/(n0+n1); std_norm is the per-shot
/// sigma_N/(n0+n1) estimated from the spread of the records.
RabiScan rabi_scan(const HardwareProfile& profile, std::span<const double> theta_grid, std::int64_t shots,
                   std::int64_t repetitions, const RngSeed& seed, int threads = 1);

/// Collapses grouped records (same theta_prep, measured at the pole) into
/// scan points. Records must share a shot count.
RabiScan summarize_rabi_records(std::vector<MeasurementRecord> records, double scale);

struct NoiseModelFit {
  ObservableModel model;
  double contrast;
  double sigma_exp_norm;
  double mean_rms_residual;
  double std_rms_log_residual;
  int iterations;
};

/// Least-squares fit of the expectation curve to mean_norm (recovering n0, n1)
/// followed by a fit of the uncertainty curve to std_norm (recovering
/// sigma_exp). Throws PreconditionError with fewer than 5 distinct thetas and
/// FitError on degenerate grids or non-convergence.
NoiseModelFit fit_noise_model(const RabiScan& scan);

/// Parses a replay CSV with header
/// theta_prep,phi_prep,theta_meas,phi_meas,shots,total_counts. Fractions are
/// recomputed from counts with `model`. Throws ParseError (with line number)
/// on malformed rows and DataError when a fraction falls outside [0, 1].
std::vector<MeasurementRecord> ingest_replay(const std::filesystem::path& path, const ObservableModel& model);
std::vector<MeasurementRecord> parse_replay(std::istream& in, const ObservableModel& model);

inline constexpr const char* kReplayHeader = "theta_prep,phi_prep,theta_meas,phi_meas,shots,total_counts";

}  // namespace qtoken

#endif  // QTOKEN_MEASUREMENT_HPP
