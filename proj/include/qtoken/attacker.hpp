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

#ifndef QTOKEN_ATTACKER_HPP
#define QTOKEN_ATTACKER_HPP

// Measure-and-forge adversary: read a bank token along one axis, invert the
// overlap formula into the set of consistent states, pick one at random and
// hand it back to the bank.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qtoken/bank.hpp"
#include "qtoken/bloch.hpp"
#include "qtoken/measurement.hpp"
#include "qtoken/rng.hpp"

namespace qtoken {

enum class ForgeBranch {
  kPoleInversion,
  kIntervalPlus,
  kIntervalMinus,
  kRandomFallback,
};

const char* to_string(ForgeBranch branch) noexcept;

struct ForgeOutcome {
  double n_a_measured = 0.0;
  /// (2 n_a - 1) / c; NaN when c == 0.
  double alpha = 0.0;
  ForgeBranch branch = ForgeBranch::kRandomFallback;
  BlochAngles forged;
};

/// The attacker's reading n_a of `token` along `attack_axis`.
double attack_measure(const HardwareProfile& profile, const TokenSpec& token, const BlochAngles& attack_axis,
                      std::int64_t shots, const RngSeed& seed);

/// Picks a forged state consistent with reading n_a along attack_axis:
///   c == 0                 -> uniform random state;
///   pole axis              -> theta_f = arccos(alpha / cos theta_a), phi_f uniform;
///   otherwise              -> z_f uniform in zf_interval, then one of the two
///                             azimuthal solutions with probability 1/2.
/// Readings with no real solution fall back to a uniform random state.
ForgeOutcome forge_token(double n_a, const BlochAngles& attack_axis, double c, const RngSeed& seed);

struct CampaignOptions {
  /// Use the exact overlap value for n_a instead of a simulated reading.
  bool noiseless_attack = false;
  /// Skip inversion and always forge a uniform random state.
  bool fallback_only = false;
  int threads = 1;
};

struct CampaignRow {
  BlochAngles bank;
  BlochAngles attack_axis;
  ForgeOutcome outcome;
  double n_f = 0.0;
};

/// For each bank token: attacker measurement, forgery, bank verification of
/// the forged state. Token i uses attack_axes[i % attack_axes.size()] and
/// stream seed.child(i); row order follows input order.
std::vector<CampaignRow> run_attack_campaign(const HardwareProfile& profile, std::span<const BlochAngles> bank_angles,
                                             std::span<const BlochAngles> attack_axes, std::int64_t shots,
                                             const RngSeed& seed, const CampaignOptions& options = {});

inline constexpr const char* kCampaignHeader = "theta_b,phi_b,theta_a,phi_a,n_a,branch,theta_f,phi_f,n_f";

}  // namespace qtoken

#endif  // QTOKEN_ATTACKER_HPP
