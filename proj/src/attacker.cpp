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

#include "qtoken/attacker.hpp"

#include <cmath>
#include <limits>

#include "qtoken/error.hpp"
#include "qtoken/parallel.hpp"

namespace qtoken {

namespace {

constexpr double kPoleSine = 1e-12;

// Child stream tags inside one campaign item.
enum : std::uint64_t { kStageMeasure = 1, kStageForge = 2, kStageVerify = 3 };

ForgeOutcome fallback(ForgeOutcome outcome, Engine& engine) {
  outcome.branch = ForgeBranch::kRandomFallback;
  outcome.forged = sample_uniform_sphere(engine);
  return outcome;
}

}  // namespace

const char* to_string(ForgeBranch branch) noexcept {
  switch (branch) {
    case ForgeBranch::kPoleInversion:
      return "pole_inversion";
    case ForgeBranch::kIntervalPlus:
      return "interval_plus";
    case ForgeBranch::kIntervalMinus:
      return "interval_minus";
    case ForgeBranch::kRandomFallback:
      return "random_fallback";
  }
  return "unknown";
}

double attack_measure(const HardwareProfile& profile, const TokenSpec& token, const BlochAngles& attack_axis,
                      std::int64_t shots, const RngSeed& seed) {
  return simulate_measurement(profile, token.angles, attack_axis, shots, seed).n_zero_fraction;
}

ForgeOutcome forge_token(double n_a, const BlochAngles& attack_axis, double c, const RngSeed& seed) {
  if (!(std::abs(c) <= 1.0)) throw PreconditionError("contrast must satisfy |c| <= 1");
  Engine engine = make_engine(seed);
  ForgeOutcome outcome;
  outcome.n_a_measured = n_a;
  if (c == 0.0) {
    outcome.alpha = std::numeric_limits<double>::quiet_NaN();
    return fallback(outcome, engine);
  }
  const double alpha = (2.0 * n_a - 1.0) / c;
  outcome.alpha = alpha;
  const double theta_a = attack_axis.theta();

  if (std::abs(std::sin(theta_a)) < kPoleSine) {
    const double z = alpha / std::cos(theta_a);
    if (!(std::abs(z) <= 1.0 + kArccosSlack)) return fallback(outcome, engine);
    outcome.branch = ForgeBranch::kPoleInversion;
    outcome.forged = BlochAngles(std::acos(std::clamp(z, -1.0, 1.0)), kTwoPi * uniform01(engine));
    return outcome;
  }

  const auto interval = zf_interval(alpha, theta_a);
  if (!interval) return fallback(outcome, engine);
  const double z_f = interval->lo + interval->width() * uniform01(engine);
  const double theta_f = std::acos(std::clamp(z_f, -1.0, 1.0));
  if (std::abs(std::sin(theta_f)) < kPoleSine) {
    outcome.branch = ForgeBranch::kIntervalPlus;
    outcome.forged = BlochAngles(theta_f, kTwoPi * uniform01(engine));
    return outcome;
  }
  const auto solutions = phi_f_solutions(alpha, theta_a, attack_axis.phi(), theta_f);
  if (!solutions) return fallback(outcome, engine);
  const bool plus = uniform01(engine) < 0.5;
  outcome.branch = plus ? ForgeBranch::kIntervalPlus : ForgeBranch::kIntervalMinus;
  outcome.forged = BlochAngles(theta_f, plus ? solutions->plus : solutions->minus);
  return outcome;
}

std::vector<CampaignRow> run_attack_campaign(const HardwareProfile& profile, std::span<const BlochAngles> bank_angles,
                                             std::span<const BlochAngles> attack_axes, std::int64_t shots,
                                             const RngSeed& seed, const CampaignOptions& options) {
  if (bank_angles.empty()) throw PreconditionError("attack campaign needs at least one bank token");
  if (attack_axes.empty()) throw PreconditionError("attack campaign needs at least one attack axis");
  if (shots < 1) throw PreconditionError("shots must be >= 1");
  const double c = profile.effective_contrast();

  std::vector<CampaignRow> rows(bank_angles.size());
  parallel_for(bank_angles.size(), options.threads, [&](std::size_t i) {
    const RngSeed item = seed.child(i);
    const BlochAngles& bank = bank_angles[i];
    const BlochAngles& axis = attack_axes[i % attack_axes.size()];
    const TokenSpec token{std::to_string(i), bank};

    const double n_a = options.noiseless_attack
                           ? attacker_fraction(c, bank, axis)
                           : attack_measure(profile, token, axis, shots, item.child(kStageMeasure));
    ForgeOutcome outcome = forge_token(n_a, axis, options.fallback_only ? 0.0 : c, item.child(kStageForge));
    if (options.fallback_only && c != 0.0) outcome.alpha = (2.0 * n_a - 1.0) / c;
    const double n_f = simulate_measurement(profile, outcome.forged, bank, shots, item.child(kStageVerify))
                           .n_zero_fraction;
    rows[i] = {bank, axis, outcome, n_f};
  });
  return rows;
}

}  // namespace qtoken
