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

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "qtoken/bank.hpp"
#include "qtoken/error.hpp"

namespace qtoken {
namespace {

HardwareProfile profile(const std::string& name) { return *find_builtin_profile(name); }

TEST(SampleBankAngles, UniformSphereMoments) {
  const auto angles = sample_bank_angles({SamplingStrategy::kUniformSphere, 100000, 0, 0}, {1, 0});
  ASSERT_EQ(angles.size(), 100000u);
  double z_sum = 0.0;
  std::size_t band = 0;
  for (const auto& a : angles) {
    z_sum += a.z();
    if (a.theta() >= kPi / 3 && a.theta() <= 2 * kPi / 3) ++band;
  }
  EXPECT_LT(std::abs(z_sum / 1e5), 0.01);
  EXPECT_NEAR(static_cast<double>(band) / 1e5, 0.5, 0.01);
}

TEST(SampleBankAngles, LinearGrid) {
  const auto grid = sample_bank_angles({SamplingStrategy::kLinearGrid, 0, 3, 4}, {1, 0});
  ASSERT_EQ(grid.size(), 12u);
  std::set<double> thetas;
  for (const auto& a : grid) thetas.insert(a.theta());
  EXPECT_EQ(thetas, (std::set<double>{0.0, kPi / 2, kPi}));
  EXPECT_NEAR(grid[1].phi(), kPi / 2, 1e-15);
}

TEST(SampleBankAngles, EquatorWeightedAliasesUniform) {
  const auto a = sample_bank_angles({SamplingStrategy::kUniformSphere, 50, 0, 0}, {4, 1});
  const auto b = sample_bank_angles({SamplingStrategy::kEquatorWeighted, 50, 0, 0}, {4, 1});
  EXPECT_EQ(a, b);
  EXPECT_STREQ(to_string(SamplingStrategy::kEquatorWeighted), "equator_weighted");
}

TEST(SampleBankAngles, RejectsEmptyRequests) {
  EXPECT_THROW(sample_bank_angles({SamplingStrategy::kUniformSphere, 0, 0, 0}, {1, 0}), PreconditionError);
  EXPECT_THROW(sample_bank_angles({SamplingStrategy::kLinearGrid, 0, 0, 3}, {1, 0}), PreconditionError);
  EXPECT_THROW(sampling_strategy_from_string("spiral"), PreconditionError);
}

TEST(AuthenticateToken, IdealIsExactlyOne) {
  const auto angles = sample_bank_angles({SamplingStrategy::kUniformSphere, 100, 0, 0}, {2, 0});
  for (std::size_t i = 0; i < angles.size(); ++i) {
    EXPECT_EQ(authenticate_token(profile("ideal"), {"t", angles[i]}, 100, {2, i}), 1.0);
  }
}

double mean_self_acceptance(const HardwareProfile& p, std::size_t count, double* spread) {
  const auto angles = sample_bank_angles({SamplingStrategy::kUniformSphere, count, 0, 0}, {3, 0});
  double sum = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double n = authenticate_token(p, {"t", angles[i]}, 100, {3, 1000 + i});
    sum += n;
    sq += n * n;
  }
  const double mean = sum / count;
  *spread = std::sqrt(sq / count - mean * mean);
  return mean;
}

TEST(AuthenticateToken, MeanIsOnePlusContrastOverTwo) {
  double brisbane_spread = 0.0;
  EXPECT_NEAR(mean_self_acceptance(profile("brisbane"), 10000, &brisbane_spread), 0.9215, 0.01);
  double kyoto_spread = 0.0, sherbrooke_spread = 0.0;
  mean_self_acceptance(profile("kyoto"), 2000, &kyoto_spread);
  mean_self_acceptance(profile("sherbrooke"), 2000, &sherbrooke_spread);
  EXPECT_GT(kyoto_spread, sherbrooke_spread);
}

TEST(CoinRules, StrictThresholdAndKOfM) {
  EXPECT_TRUE(coin_accepts({0.9, CoinRule::all_pass()}, {0.95}));
  std::vector<double> nine(9, 0.95);
  nine[4] = 0.9;
  EXPECT_FALSE(coin_accepts({0.9, CoinRule::all_pass()}, nine));
  EXPECT_TRUE(coin_accepts({0.9, CoinRule::k_of_m(8)}, nine));
  EXPECT_FALSE(coin_accepts({0.9, CoinRule::k_of_m(9)}, nine));
  EXPECT_THROW(coin_accepts({0.9, CoinRule::k_of_m(10)}, nine), PreconditionError);
  EXPECT_THROW(coin_accepts({0.9, CoinRule::k_of_m(0)}, nine), PreconditionError);
}

TEST(Coin, IssueValidateAndAuthenticate) {
  const auto p = profile("kyiv");
  const Coin coin = issue_coin("c7", p, 9, {SamplingStrategy::kUniformSphere, 0, 0, 0}, {5, 0});
  ASSERT_EQ(coin.tokens.size(), 9u);
  EXPECT_EQ(coin.tokens[3].token_id, "c7-3");
  EXPECT_EQ(coin.issued_with, "kyiv");
  const AuthPolicy policy{0.9, CoinRule::all_pass()};
  const CoinVerdict v1 = authenticate_coin(p, coin, policy, 100, {6, 0}, 1);
  const CoinVerdict v2 = authenticate_coin(p, coin, policy, 100, {6, 0}, 4);
  EXPECT_EQ(v1.per_token, v2.per_token);
  EXPECT_TRUE(v1.accepted);

  Coin dup = coin;
  dup.tokens[1].token_id = dup.tokens[0].token_id;
  EXPECT_THROW(dup.validate(), PreconditionError);
  EXPECT_THROW((Coin{"empty", {}, "kyiv"}).validate(), PreconditionError);
}

TEST(Coin, AllPassAcceptanceIsPerTokenRateToTheM) {
  // Threshold near the bank median so per-token acceptance is far from 0 and 1.
  const auto p = profile("kyoto");
  const AuthPolicy policy{0.7815, CoinRule::all_pass()};
  constexpr int kTrials = 3000;
  constexpr std::size_t kM = 3;
  int coins_accepted = 0, tokens_accepted = 0;
  for (int t = 0; t < kTrials; ++t) {
    const Coin coin = issue_coin("c", p, kM, {SamplingStrategy::kUniformSphere, 0, 0, 0}, {7, static_cast<std::uint64_t>(t)});
    const CoinVerdict v = authenticate_coin(p, coin, policy, 100, {8, static_cast<std::uint64_t>(t)});
    coins_accepted += v.accepted;
    for (double n : v.per_token) tokens_accepted += n > policy.n_threshold;
  }
  const double per_token = static_cast<double>(tokens_accepted) / (kTrials * kM);
  const double expected = std::pow(per_token, kM);
  const double se = std::sqrt(expected * (1 - expected) / kTrials);
  EXPECT_NEAR(static_cast<double>(coins_accepted) / kTrials, expected, 4 * se);
}

TEST(CoinDocument, SecretsRedactedByDefault) {
  const auto p = profile("osaka");
  const Coin coin = issue_coin("doc", p, 4, {SamplingStrategy::kUniformSphere, 0, 0, 0}, {9, 0});
  const AuthPolicy policy{0.85, CoinRule::k_of_m(3)};
  const auto redacted = coin_to_json(coin, policy, false);
  EXPECT_EQ(redacted.at("schema"), "qtoken.coin");
  EXPECT_FALSE(redacted.at("secrets_revealed").get<bool>());
  for (const auto& t : redacted.at("tokens")) {
    EXPECT_FALSE(t.contains("theta"));
    EXPECT_FALSE(t.contains("phi"));
  }
  const CoinDocument doc = coin_from_json(redacted);
  EXPECT_FALSE(doc.secrets);
  EXPECT_THROW(doc.to_coin(), PreconditionError);
  EXPECT_EQ(doc.policy.coin_rule.k, 3u);

  const CoinDocument full = coin_from_json(coin_to_json(coin, policy, true));
  const Coin back = full.to_coin();
  ASSERT_EQ(back.tokens.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(back.tokens[i].angles, coin.tokens[i].angles);
}

TEST(CoinDocument, MalformedDocumentsAreDataErrors) {
  EXPECT_THROW(coin_from_json(nlohmann::json::parse(R"({"schema":"other"})")), DataError);
  EXPECT_THROW(coin_from_json(nlohmann::json::parse(R"({"schema":"qtoken.coin","schema_version":1})")), DataError);
}

}  // namespace
}  // namespace qtoken
