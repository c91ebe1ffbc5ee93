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

#ifndef QTOKEN_BANK_HPP
#define QTOKEN_BANK_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtoken/bloch.hpp"
#include "qtoken/measurement.hpp"
#include "qtoken/rng.hpp"

namespace qtoken {

enum class SamplingStrategy { kUniformSphere, kLinearGrid, kEquatorWeighted };

const char* to_string(SamplingStrategy strategy) noexcept;
SamplingStrategy sampling_strategy_from_string(const std::string& text);

struct SamplingPlan {
  SamplingStrategy strategy = SamplingStrategy::kUniformSphere;
  /// Number of draws for the random strategies.
  std::size_t count = 0;
  /// Grid dimensions for kLinearGrid.
  std::size_t theta_points = 0;
  std::size_t phi_points = 0;
};

/// Bank secret angles. uniform_sphere (and its alias equator_weighted) draws
/// z uniform on [-1, 1] and phi uniform on [0, 2pi); linear_grid is the
/// theta-major product of theta_i = pi i/(n-1) (0 when n = 1) and
/// phi_j = 2pi j/n.
std::vector<BlochAngles> sample_bank_angles(const SamplingPlan& plan, const RngSeed& seed);

struct TokenSpec {
  std::string token_id;
  BlochAngles angles;
};

struct Coin {
  std::string coin_id;
  std::vector<TokenSpec> tokens;
  std::string issued_with;

  /// Throws PreconditionError if the coin is empty or token ids repeat.
  void validate() const;
};

struct CoinRule {
  enum class Kind { kAllPass, kKOfM };
  Kind kind = Kind::kAllPass;
  std::size_t k = 0;

  static CoinRule all_pass() { return {}; }
  static CoinRule k_of_m(std::size_t k) { return {Kind::kKOfM, k}; }
};

struct AuthPolicy {
  double n_threshold = 0.0;
  CoinRule coin_rule;
};

/// Issues a coin of M tokens with ids "<coin_id>-<index>" and secrets from
/// `plan` (count is overridden by M for the random strategies).
Coin issue_coin(const std::string& coin_id, const HardwareProfile& profile, std::size_t tokens,
                const SamplingPlan& plan, const RngSeed& seed);

/// Prepare, unrotate with the token's own angles, measure. Returns n_b.
double authenticate_token(const HardwareProfile& profile, const TokenSpec& token, std::int64_t shots,
                          const RngSeed& seed);

struct CoinVerdict {
  bool accepted = false;
  std::vector<double> per_token;
};

/// A token passes when n_b > n_threshold (ties reject). all_pass needs every
/// token to pass; k_of_m needs at least k.
bool coin_accepts(const AuthPolicy& policy, const std::vector<double>& per_token);

/// Authenticates every token on its own stream seed.child(i).
CoinVerdict authenticate_coin(const HardwareProfile& profile, const Coin& coin, const AuthPolicy& policy,
                              std::int64_t shots, const RngSeed& seed, int threads = 1);

/// Serialized coin document. Secrets are optional; a redacted document can
/// be stored and inspected but not authenticated.
struct CoinDocument {
  std::string coin_id;
  std::string profile;
  AuthPolicy policy;
  std::vector<std::string> token_ids;
  std::optional<std::vector<BlochAngles>> secrets;

  /// Throws PreconditionError if the secrets were redacted.
  Coin to_coin() const;
};

inline constexpr int kCoinSchemaVersion = 1;

nlohmann::json coin_to_json(const Coin& coin, const AuthPolicy& policy, bool reveal_secrets);
CoinDocument coin_from_json(const nlohmann::json& doc);

}  // namespace qtoken

#endif  // QTOKEN_BANK_HPP
