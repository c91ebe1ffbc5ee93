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

#include "qtoken/bank.hpp"

#include <set>

#include "qtoken/error.hpp"
#include "qtoken/parallel.hpp"

namespace qtoken {

const char* to_string(SamplingStrategy strategy) noexcept {
  switch (strategy) {
    case SamplingStrategy::kUniformSphere:
      return "uniform_sphere";
    case SamplingStrategy::kLinearGrid:
      return "linear_grid";
    case SamplingStrategy::kEquatorWeighted:
      return "equator_weighted";
  }
  return "unknown";
}

SamplingStrategy sampling_strategy_from_string(const std::string& text) {
  if (text == "uniform_sphere") return SamplingStrategy::kUniformSphere;
  if (text == "linear_grid") return SamplingStrategy::kLinearGrid;
  if (text == "equator_weighted") return SamplingStrategy::kEquatorWeighted;
  throw PreconditionError("unknown sampling strategy '" + text + "'");
}

std::vector<BlochAngles> sample_bank_angles(const SamplingPlan& plan, const RngSeed& seed) {
  std::vector<BlochAngles> angles;
  switch (plan.strategy) {
    case SamplingStrategy::kUniformSphere:
    case SamplingStrategy::kEquatorWeighted: {
      if (plan.count == 0) throw PreconditionError("sample count must be >= 1");
      Engine engine = make_engine(seed);
      angles.reserve(plan.count);
      for (std::size_t i = 0; i < plan.count; ++i) angles.push_back(sample_uniform_sphere(engine));
      break;
    }
    case SamplingStrategy::kLinearGrid: {
      if (plan.theta_points == 0 || plan.phi_points == 0) {
        throw PreconditionError("grid dimensions must be >= 1");
      }
      angles.reserve(plan.theta_points * plan.phi_points);
      for (std::size_t i = 0; i < plan.theta_points; ++i) {
        const double theta =
            plan.theta_points == 1 ? 0.0 : kPi * static_cast<double>(i) / static_cast<double>(plan.theta_points - 1);
        for (std::size_t j = 0; j < plan.phi_points; ++j) {
          angles.emplace_back(theta, kTwoPi * static_cast<double>(j) / static_cast<double>(plan.phi_points));
        }
      }
      break;
    }
  }
  return angles;
}

void Coin::validate() const {
  if (tokens.empty()) throw PreconditionError("a coin needs at least one token");
  std::set<std::string> ids;
  for (const auto& token : tokens) {
    if (!ids.insert(token.token_id).second) {
      throw PreconditionError("duplicate token id '" + token.token_id + "' in coin " + coin_id);
    }
  }
}

Coin issue_coin(const std::string& coin_id, const HardwareProfile& profile, std::size_t tokens,
                const SamplingPlan& plan, const RngSeed& seed) {
  SamplingPlan sized = plan;
  if (plan.strategy != SamplingStrategy::kLinearGrid) sized.count = tokens;
  auto angles = sample_bank_angles(sized, seed);
  if (angles.size() != tokens) {
    throw PreconditionError("sampling plan yields " + std::to_string(angles.size()) + " angles for " +
                            std::to_string(tokens) + " tokens");
  }
  Coin coin{coin_id, {}, profile.name};
  for (std::size_t i = 0; i < angles.size(); ++i) {
    coin.tokens.push_back({coin_id + "-" + std::to_string(i), angles[i]});
  }
  coin.validate();
  return coin;
}

double authenticate_token(const HardwareProfile& profile, const TokenSpec& token, std::int64_t shots,
                          const RngSeed& seed) {
  return simulate_measurement(profile, token.angles, token.angles, shots, seed).n_zero_fraction;
}

bool coin_accepts(const AuthPolicy& policy, const std::vector<double>& per_token) {
  std::size_t passing = 0;
  for (double n : per_token) {
    if (n > policy.n_threshold) ++passing;
  }
  switch (policy.coin_rule.kind) {
    case CoinRule::Kind::kAllPass:
      return passing == per_token.size();
    case CoinRule::Kind::kKOfM:
      if (policy.coin_rule.k < 1 || policy.coin_rule.k > per_token.size()) {
        throw PreconditionError("k_of_m needs 1 <= k <= M (k = " + std::to_string(policy.coin_rule.k) +
                                ", M = " + std::to_string(per_token.size()) + ")");
      }
      return passing >= policy.coin_rule.k;
  }
  return false;
}

CoinVerdict authenticate_coin(const HardwareProfile& profile, const Coin& coin, const AuthPolicy& policy,
                              std::int64_t shots, const RngSeed& seed, int threads) {
  coin.validate();
  if (policy.coin_rule.kind == CoinRule::Kind::kKOfM &&
      (policy.coin_rule.k < 1 || policy.coin_rule.k > coin.tokens.size())) {
    throw PreconditionError("k_of_m policy is inconsistent with a coin of " + std::to_string(coin.tokens.size()) +
                            " tokens");
  }
  CoinVerdict verdict;
  verdict.per_token.resize(coin.tokens.size());
  parallel_for(coin.tokens.size(), threads, [&](std::size_t i) {
    verdict.per_token[i] = authenticate_token(profile, coin.tokens[i], shots, seed.child(i));
  });
  verdict.accepted = coin_accepts(policy, verdict.per_token);
  return verdict;
}

Coin CoinDocument::to_coin() const {
  if (!secrets) throw PreconditionError("coin " + coin_id + " was serialized without its secret angles");
  Coin coin{coin_id, {}, profile};
  for (std::size_t i = 0; i < token_ids.size(); ++i) coin.tokens.push_back({token_ids[i], (*secrets)[i]});
  coin.validate();
  return coin;
}

nlohmann::json coin_to_json(const Coin& coin, const AuthPolicy& policy, bool reveal_secrets) {
  coin.validate();
  nlohmann::json rule = {{"kind", policy.coin_rule.kind == CoinRule::Kind::kAllPass ? "all_pass" : "k_of_m"}};
  if (policy.coin_rule.kind == CoinRule::Kind::kKOfM) rule["k"] = policy.coin_rule.k;
  nlohmann::json tokens = nlohmann::json::array();
  for (const auto& token : coin.tokens) {
    nlohmann::json entry = {{"token_id", token.token_id}};
    if (reveal_secrets) {
      entry["theta"] = token.angles.theta();
      entry["phi"] = token.angles.phi();
    }
    tokens.push_back(std::move(entry));
  }
  return {
      {"schema", "qtoken.coin"},
      {"schema_version", kCoinSchemaVersion},
      {"coin_id", coin.coin_id},
      {"profile", coin.issued_with},
      {"policy", {{"n_threshold", policy.n_threshold}, {"coin_rule", rule}}},
      {"secrets_revealed", reveal_secrets},
      {"tokens", tokens},
  };
}

CoinDocument coin_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("schema").get<std::string>() != "qtoken.coin") throw DataError("not a coin document");
    if (doc.at("schema_version").get<int>() != kCoinSchemaVersion) {
      throw DataError("unsupported coin schema_version");
    }
    CoinDocument out;
    out.coin_id = doc.at("coin_id").get<std::string>();
    out.profile = doc.at("profile").get<std::string>();
    const auto& policy = doc.at("policy");
    out.policy.n_threshold = policy.at("n_threshold").get<double>();
    const auto kind = policy.at("coin_rule").at("kind").get<std::string>();
    if (kind == "all_pass") {
      out.policy.coin_rule = CoinRule::all_pass();
    } else if (kind == "k_of_m") {
      out.policy.coin_rule = CoinRule::k_of_m(policy.at("coin_rule").at("k").get<std::size_t>());
    } else {
      throw DataError("unknown coin rule '" + kind + "'");
    }
    const bool revealed = doc.at("secrets_revealed").get<bool>();
    std::vector<BlochAngles> secrets;
    for (const auto& token : doc.at("tokens")) {
      out.token_ids.push_back(token.at("token_id").get<std::string>());
      if (revealed) secrets.emplace_back(token.at("theta").get<double>(), token.at("phi").get<double>());
    }
    if (out.token_ids.empty()) throw DataError("coin document has no tokens");
    if (revealed) out.secrets = std::move(secrets);
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed coin document: ") + e.what());
  } catch (const PreconditionError& e) {
    throw DataError(std::string("malformed coin document: ") + e.what());
  }
}

}  // namespace qtoken
