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

#include "qtoken/qtoken.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "qtoken/commands.hpp"
#include "qtoken/error.hpp"

struct qt_profile {
  qtoken::HardwareProfile value;
};

struct qt_run_config {
  qtoken::RunConfig value;
};

struct qt_coin {
  qtoken::CoinDocument document;
};

namespace {

thread_local std::string g_last_error;

qt_status fail(qt_status status, const char* message) {
  g_last_error = message;
  return status;
}

template <typename F>
qt_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return QT_OK;
  } catch (const qtoken::Error& e) {
    return fail(static_cast<qt_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(QT_ERR_DATA, e.what());
  } catch (const std::bad_alloc&) {
    return fail(QT_ERR_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    return fail(QT_ERR_RUNTIME, e.what());
  }
}

#define QT_REQUIRE(cond, what)                                   \
  do {                                                           \
    if (!(cond)) throw qtoken::PreconditionError(what);          \
  } while (0)

qtoken::BlochAngles to_angles(qt_angles a) { return qtoken::BlochAngles(a.theta, a.phi); }
qt_angles from_angles(const qtoken::BlochAngles& a) { return {a.theta(), a.phi()}; }

char* duplicate(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

void emit_summary(const qtoken::CommandResult& result, char** summary_json) {
  if (summary_json) *summary_json = duplicate(result.summary.dump(2));
}

qtoken::ForgeRequest to_forge_request(const qt_forge_request* request) {
  qtoken::ForgeRequest out;
  if (!request) return out;
  if (request->attack_axes && request->attack_axis_count > 0) {
    out.attack_axes.clear();
    for (std::size_t i = 0; i < request->attack_axis_count; ++i) {
      out.attack_axes.push_back(to_angles(request->attack_axes[i]));
    }
  }
  out.tokens = request->tokens;
  out.fallback_only = request->fallback_only != 0;
  out.noiseless_attack = request->noiseless_attack != 0;
  return out;
}

}  // namespace

extern "C" {

const char* qt_version(void) { return "1.0.0"; }
const char* qt_last_error(void) { return g_last_error.c_str(); }
uint64_t qt_default_seed(void) { return qtoken::kDefaultSeed; }

qt_status qt_expectation_n(double n0, double n1, double sigma_exp, qt_angles state, double* out) {
  return guarded([&] {
    QT_REQUIRE(out, "out must not be NULL");
    *out = qtoken::expectation_n(qtoken::ObservableModel(n0, n1, sigma_exp), to_angles(state));
  });
}

qt_status qt_total_uncertainty(double n0, double n1, double sigma_exp, qt_angles state, double* out) {
  return guarded([&] {
    QT_REQUIRE(out, "out must not be NULL");
    *out = qtoken::total_uncertainty(qtoken::ObservableModel(n0, n1, sigma_exp), to_angles(state));
  });
}

qt_status qt_attacker_fraction(double c, qt_angles bank, qt_angles attack, double* out) {
  return guarded([&] {
    QT_REQUIRE(out, "out must not be NULL");
    *out = qtoken::attacker_fraction(c, to_angles(bank), to_angles(attack));
  });
}

qt_status qt_mean_attacker_fraction(double c, qt_angles attack, double* out) {
  return guarded([&] {
    QT_REQUIRE(out, "out must not be NULL");
    *out = qtoken::mean_attacker_fraction(c, to_angles(attack));
  });
}

size_t qt_builtin_profile_count(void) { return qtoken::builtin_profiles().size(); }

const char* qt_builtin_profile_name(size_t index) {
  const auto& profiles = qtoken::builtin_profiles();
  return index < profiles.size() ? profiles[index].name.c_str() : nullptr;
}

qt_status qt_profile_resolve(const char* reference, qt_profile** out) {
  return guarded([&] {
    QT_REQUIRE(reference && out, "reference and out must not be NULL");
    *out = new qt_profile{qtoken::resolve_profile(reference)};
  });
}

qt_status qt_profile_create(const char* name, double contrast, double sigma_exp_norm, int64_t shots_default,
                            qt_profile** out) {
  return guarded([&] {
    QT_REQUIRE(name && out, "name and out must not be NULL");
    qtoken::HardwareProfile profile{name, qtoken::ObservableModel::from_contrast(contrast, sigma_exp_norm),
                                    shots_default, qtoken::NoiseMode::kPhotonCount};
    profile.validate();
    *out = new qt_profile{std::move(profile)};
  });
}

void qt_profile_free(qt_profile* profile) { delete profile; }
const char* qt_profile_name(const qt_profile* profile) { return profile ? profile->value.name.c_str() : nullptr; }
double qt_profile_contrast(const qt_profile* profile) { return profile ? profile->value.observable.contrast() : 0.0; }
double qt_profile_sigma_exp_norm(const qt_profile* profile) {
  return profile ? profile->value.observable.sigma_exp_norm() : 0.0;
}
int64_t qt_profile_shots_default(const qt_profile* profile) { return profile ? profile->value.shots_default : 0; }

qt_status qt_simulate_measurement(const qt_profile* profile, qt_angles prep, qt_angles meas, int64_t shots,
                                  uint64_t seed, uint64_t stream, qt_record* out) {
  return guarded([&] {
    QT_REQUIRE(profile && out, "profile and out must not be NULL");
    const auto record =
        qtoken::simulate_measurement(profile->value, to_angles(prep), to_angles(meas), shots, {seed, stream});
    *out = {record.shots, record.total_counts, record.n_zero_fraction, record.sigma_est};
  });
}

qt_status qt_forge_token(double n_a, qt_angles attack_axis, double c, uint64_t seed, uint64_t stream,
                         qt_forge_outcome* out) {
  return guarded([&] {
    QT_REQUIRE(out, "out must not be NULL");
    const auto outcome = qtoken::forge_token(n_a, to_angles(attack_axis), c, {seed, stream});
    *out = {outcome.n_a_measured, outcome.alpha, static_cast<qt_forge_branch>(outcome.branch),
            from_angles(outcome.forged)};
  });
}

qt_status qt_coin_issue(const char* coin_id, const qt_profile* profile, size_t tokens, double n_threshold,
                        size_t k_required, uint64_t seed, qt_coin** out) {
  return guarded([&] {
    QT_REQUIRE(coin_id && profile && out, "coin_id, profile and out must not be NULL");
    QT_REQUIRE(k_required <= tokens, "k must not exceed the token count");
    const qtoken::SamplingPlan plan{qtoken::SamplingStrategy::kUniformSphere, tokens, 0, 0};
    const qtoken::Coin coin = qtoken::issue_coin(coin_id, profile->value, tokens, plan, {seed, 0});
    qtoken::AuthPolicy policy{n_threshold,
                              k_required == 0 ? qtoken::CoinRule::all_pass() : qtoken::CoinRule::k_of_m(k_required)};
    *out = new qt_coin{qtoken::coin_from_json(qtoken::coin_to_json(coin, policy, true))};
  });
}

void qt_coin_free(qt_coin* coin) { delete coin; }
size_t qt_coin_size(const qt_coin* coin) { return coin ? coin->document.token_ids.size() : 0; }

qt_status qt_coin_save(const qt_coin* coin, const char* path, int reveal_secrets) {
  return guarded([&] {
    QT_REQUIRE(coin && path, "coin and path must not be NULL");
    nlohmann::json doc;
    if (coin->document.secrets) {
      doc = qtoken::coin_to_json(coin->document.to_coin(), coin->document.policy, reveal_secrets != 0);
    } else {
      qtoken::Coin redacted{coin->document.coin_id, {}, coin->document.profile};
      for (const auto& id : coin->document.token_ids) redacted.tokens.push_back({id, qtoken::BlochAngles()});
      doc = qtoken::coin_to_json(redacted, coin->document.policy, false);
    }
    qtoken::write_json_file(path, doc);
  });
}

qt_status qt_coin_load(const char* path, qt_coin** out) {
  return guarded([&] {
    QT_REQUIRE(path && out, "path and out must not be NULL");
    std::ifstream in(path);
    if (!in) throw qtoken::Error(qtoken::ErrorCode::kRuntime, std::string("cannot open ") + path);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw qtoken::DataError(std::string(path) + ": " + e.what());
    }
    *out = new qt_coin{qtoken::coin_from_json(doc)};
  });
}

qt_status qt_coin_authenticate(const qt_coin* coin, const qt_profile* profile, int64_t shots, uint64_t seed,
                               int* accepted, double* per_token, size_t per_token_len) {
  return guarded([&] {
    QT_REQUIRE(coin && profile && accepted, "coin, profile and accepted must not be NULL");
    const qtoken::Coin value = coin->document.to_coin();
    const auto verdict = qtoken::authenticate_coin(profile->value, value, coin->document.policy, shots, {seed, 1});
    *accepted = verdict.accepted ? 1 : 0;
    if (per_token) {
      for (std::size_t i = 0; i < verdict.per_token.size() && i < per_token_len; ++i) per_token[i] = verdict.per_token[i];
    }
  });
}

qt_status qt_run_config_create(qt_run_config** out) {
  return guarded([&] {
    QT_REQUIRE(out, "out must not be NULL");
    *out = new qt_run_config{};
  });
}

void qt_run_config_free(qt_run_config* config) { delete config; }

qt_status qt_run_config_set_profile(qt_run_config* config, const char* reference) {
  return guarded([&] {
    QT_REQUIRE(config && reference && *reference, "profile reference must not be empty");
    config->value.profile = reference;
  });
}

qt_status qt_run_config_set_seed(qt_run_config* config, uint64_t seed) {
  return guarded([&] {
    QT_REQUIRE(config, "config must not be NULL");
    config->value.seed = seed;
  });
}

qt_status qt_run_config_set_shots(qt_run_config* config, int64_t shots) {
  return guarded([&] {
    QT_REQUIRE(config, "config must not be NULL");
    QT_REQUIRE(shots >= 1, "shots must be >= 1");
    config->value.shots = shots;
  });
}

qt_status qt_run_config_set_out_dir(qt_run_config* config, const char* path) {
  return guarded([&] {
    QT_REQUIRE(config && path, "config and path must not be NULL");
    config->value.out_dir = path;
  });
}

qt_status qt_run_config_set_format(qt_run_config* config, qt_format format) {
  return guarded([&] {
    QT_REQUIRE(config, "config must not be NULL");
    QT_REQUIRE(format == QT_FORMAT_CSV || format == QT_FORMAT_JSON, "unknown output format");
    config->value.format = format == QT_FORMAT_CSV ? qtoken::OutputFormat::kCsv : qtoken::OutputFormat::kJson;
  });
}

qt_status qt_run_config_set_svg(qt_run_config* config, int enabled) {
  return guarded([&] {
    QT_REQUIRE(config, "config must not be NULL");
    config->value.svg = enabled != 0;
  });
}

qt_status qt_run_config_set_threads(qt_run_config* config, int threads) {
  return guarded([&] {
    QT_REQUIRE(config, "config must not be NULL");
    QT_REQUIRE(threads >= 1, "threads must be >= 1");
    config->value.threads = threads;
  });
}

qt_status qt_cmd_rabi(const qt_run_config* config, int theta_points, int repetitions, char** summary_json) {
  return guarded([&] {
    QT_REQUIRE(config, "config must not be NULL");
    emit_summary(qtoken::cmd_rabi(config->value, theta_points, repetitions), summary_json);
  });
}

qt_status qt_cmd_bank_bench(const qt_run_config* config, qt_sampling strategy, size_t count, size_t theta_points,
                            size_t phi_points, char** summary_json) {
  return guarded([&] {
    QT_REQUIRE(config, "config must not be NULL");
    QT_REQUIRE(strategy >= QT_SAMPLING_UNIFORM_SPHERE && strategy <= QT_SAMPLING_EQUATOR_WEIGHTED,
               "unknown sampling strategy");
    const qtoken::SamplingPlan plan{static_cast<qtoken::SamplingStrategy>(strategy), count, theta_points, phi_points};
    emit_summary(qtoken::cmd_bank_bench(config->value, plan), summary_json);
  });
}

qt_status qt_cmd_attack_scan(const qt_run_config* config, const double* z_a, size_t z_a_count, const double* phi_a,
                             size_t phi_a_count, size_t bank_z_points, size_t bank_phi_points, char** summary_json) {
  return guarded([&] {
    QT_REQUIRE(config, "config must not be NULL");
    QT_REQUIRE(z_a || z_a_count == 0, "z_a must not be NULL");
    QT_REQUIRE(phi_a || phi_a_count == 0, "phi_a must not be NULL");
    qtoken::AttackScanRequest request;
    request.z_a.assign(z_a, z_a + z_a_count);
    request.phi_a.assign(phi_a, phi_a + phi_a_count);
    request.bank_z_points = bank_z_points;
    request.bank_phi_points = bank_phi_points;
    emit_summary(qtoken::cmd_attack_scan(config->value, request), summary_json);
  });
}

qt_status qt_cmd_forge_bench(const qt_run_config* config, const qt_forge_request* request, char** summary_json) {
  return guarded([&] {
    QT_REQUIRE(config && request, "config and request must not be NULL");
    emit_summary(qtoken::cmd_forge_bench(config->value, to_forge_request(request)), summary_json);
  });
}

qt_status qt_cmd_security(const qt_run_config* config, double target_p_b, const int* tokens_list, size_t tokens_count,
                          const qt_forge_request* forge, const char* from_dir, char** summary_json) {
  return guarded([&] {
    QT_REQUIRE(config, "config must not be NULL");
    qtoken::SecurityRequest request;
    request.target_p_b = target_p_b;
    if (tokens_list && tokens_count > 0) request.tokens_list.assign(tokens_list, tokens_list + tokens_count);
    if (forge) request.forge = to_forge_request(forge);
    if (from_dir && *from_dir) request.from_dir = from_dir;
    emit_summary(qtoken::cmd_security(config->value, request), summary_json);
  });
}

qt_status qt_cmd_fit(const qt_run_config* config, const char* input_path, qt_fit_kind kind, char** summary_json) {
  return guarded([&] {
    QT_REQUIRE(config && input_path, "config and input path must not be NULL");
    QT_REQUIRE(kind >= QT_FIT_GAUSSIAN && kind <= QT_FIT_NOISE_MODEL, "unknown fit kind");
    emit_summary(qtoken::cmd_fit(config->value, input_path, static_cast<qtoken::FitKind>(kind)), summary_json);
  });
}

void qt_string_free(char* text) { std::free(text); }

}  // extern "C"
