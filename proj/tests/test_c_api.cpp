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
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qtoken/qtoken.h"

namespace {

namespace fs = std::filesystem;

fs::path scratch(const char* name) {
  const fs::path p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  return p;
}

TEST(CApi, VersionAndDefaults) {
  EXPECT_STRNE(qt_version(), "");
  EXPECT_EQ(qt_default_seed(), 20240801u);
  ASSERT_GE(qt_builtin_profile_count(), 5u);
  EXPECT_STREQ(qt_builtin_profile_name(0), "sherbrooke");
  EXPECT_EQ(qt_builtin_profile_name(1000), nullptr);
}

TEST(CApi, ClosedForms) {
  double out = 0.0;
  ASSERT_EQ(qt_expectation_n(0.0, 100.0, 0.0, {M_PI / 2, 0.0}, &out), QT_OK);
  EXPECT_NEAR(out, 50.0, 1e-12);
  ASSERT_EQ(qt_total_uncertainty(0.0, 100.0, 0.0, {M_PI, 0.0}, &out), QT_OK);
  EXPECT_NEAR(out, 10.0, 1e-12);
  ASSERT_EQ(qt_attacker_fraction(0.896, {0.3, 0.2}, {0.3, 0.2}, &out), QT_OK);
  EXPECT_NEAR(out, 0.948, 1e-12);
  ASSERT_EQ(qt_mean_attacker_fraction(0.563, {M_PI / 3, 1.1}, &out), QT_OK);
  EXPECT_NEAR(out, 0.5, 1e-9);
}

TEST(CApi, ErrorsMapToStatusCodes) {
  double out = 0.0;
  EXPECT_EQ(qt_expectation_n(0.0, 0.0, 0.0, {0.0, 0.0}, &out), QT_ERR_USAGE);
  EXPECT_NE(std::strlen(qt_last_error()), 0u);
  EXPECT_EQ(qt_attacker_fraction(0.5, {4.0, 0.0}, {0.0, 0.0}, &out), QT_ERR_USAGE);
  EXPECT_EQ(qt_attacker_fraction(0.5, {1.0, 0.0}, {0.0, 0.0}, nullptr), QT_ERR_USAGE);
  qt_profile* p = nullptr;
  EXPECT_EQ(qt_profile_resolve("missing-profile", &p), QT_ERR_USAGE);
  EXPECT_EQ(p, nullptr);
  ASSERT_EQ(qt_expectation_n(0.0, 1.0, 0.0, {0.0, 0.0}, &out), QT_OK);
  EXPECT_STREQ(qt_last_error(), "");
}

TEST(CApi, ProfilesAndMeasurements) {
  qt_profile* p = nullptr;
  ASSERT_EQ(qt_profile_resolve("brisbane", &p), QT_OK);
  EXPECT_STREQ(qt_profile_name(p), "brisbane");
  EXPECT_NEAR(qt_profile_contrast(p), 0.843, 1e-12);
  EXPECT_NEAR(qt_profile_sigma_exp_norm(p), 0.270, 1e-12);
  qt_record a{}, b{};
  ASSERT_EQ(qt_simulate_measurement(p, {1.0, 0.5}, {1.0, 0.5}, 100, 7, 3, &a), QT_OK);
  ASSERT_EQ(qt_simulate_measurement(p, {1.0, 0.5}, {1.0, 0.5}, 100, 7, 3, &b), QT_OK);
  EXPECT_EQ(a.total_counts, b.total_counts);
  EXPECT_EQ(a.shots, 100);
  EXPECT_EQ(qt_simulate_measurement(p, {1.0, 0.5}, {1.0, 0.5}, 0, 7, 3, &a), QT_ERR_USAGE);
  qt_profile_free(p);

  qt_profile* custom = nullptr;
  ASSERT_EQ(qt_profile_create("lab", 1.0, 0.0, 100, &custom), QT_OK);
  ASSERT_EQ(qt_simulate_measurement(custom, {2.0, 1.0}, {2.0, 1.0}, 100, 1, 1, &a), QT_OK);
  EXPECT_EQ(a.n_zero_fraction, 1.0);
  EXPECT_EQ(qt_profile_create("bad", 1.5, 0.0, 100, &custom), QT_ERR_USAGE);
  qt_profile_free(custom);
  qt_profile_free(nullptr);
}

TEST(CApi, ForgeToken) {
  qt_forge_outcome o{};
  ASSERT_EQ(qt_forge_token((1.0 + 0.947 * 0.99947) / 2.0, {0.0, 0.0}, 0.947, 1, 2, &o), QT_OK);
  EXPECT_EQ(o.branch, QT_BRANCH_POLE_INVERSION);
  EXPECT_NEAR(o.forged.theta, 0.0326, 1e-3);
  ASSERT_EQ(qt_forge_token(1.0, {0.0, 0.0}, 0.5, 1, 2, &o), QT_OK);
  EXPECT_EQ(o.branch, QT_BRANCH_RANDOM_FALLBACK);
}

TEST(CApi, CoinLifecycle) {
  const fs::path dir = scratch("qtoken_capi_coin");
  fs::create_directories(dir);
  qt_profile* p = nullptr;
  ASSERT_EQ(qt_profile_resolve("kyiv", &p), QT_OK);
  qt_coin* coin = nullptr;
  ASSERT_EQ(qt_coin_issue("c1", p, 9, 0.9, 0, 11, &coin), QT_OK);
  EXPECT_EQ(qt_coin_size(coin), 9u);

  int accepted = -1;
  std::vector<double> n(9, -1.0);
  ASSERT_EQ(qt_coin_authenticate(coin, p, 100, 5, &accepted, n.data(), n.size()), QT_OK);
  EXPECT_EQ(accepted, 1);
  for (double x : n) EXPECT_GT(x, 0.9);

  const std::string secret = (dir / "secret.json").string();
  const std::string redacted = (dir / "redacted.json").string();
  ASSERT_EQ(qt_coin_save(coin, secret.c_str(), 1), QT_OK);
  ASSERT_EQ(qt_coin_save(coin, redacted.c_str(), 0), QT_OK);

  qt_coin* loaded = nullptr;
  ASSERT_EQ(qt_coin_load(secret.c_str(), &loaded), QT_OK);
  std::vector<double> again(9);
  ASSERT_EQ(qt_coin_authenticate(loaded, p, 100, 5, &accepted, again.data(), again.size()), QT_OK);
  EXPECT_EQ(n, again);
  qt_coin_free(loaded);

  ASSERT_EQ(qt_coin_load(redacted.c_str(), &loaded), QT_OK);
  EXPECT_EQ(qt_coin_authenticate(loaded, p, 100, 5, &accepted, nullptr, 0), QT_ERR_USAGE);
  qt_coin_free(loaded);

  std::FILE* f = std::fopen((dir / "junk.json").c_str(), "w");
  std::fputs("{not json", f);
  std::fclose(f);
  EXPECT_EQ(qt_coin_load((dir / "junk.json").c_str(), &loaded), QT_ERR_DATA);

  EXPECT_EQ(qt_coin_issue("c2", p, 3, 0.9, 4, 1, &loaded), QT_ERR_USAGE);
  qt_coin_free(coin);
  qt_profile_free(p);
  fs::remove_all(dir);
}

TEST(CApi, CommandsThroughRunConfig) {
  const fs::path dir = scratch("qtoken_capi_cmd");
  qt_run_config* cfg = nullptr;
  ASSERT_EQ(qt_run_config_create(&cfg), QT_OK);
  ASSERT_EQ(qt_run_config_set_out_dir(cfg, dir.c_str()), QT_OK);
  ASSERT_EQ(qt_run_config_set_profile(cfg, "kyoto"), QT_OK);
  ASSERT_EQ(qt_run_config_set_seed(cfg, 5), QT_OK);
  EXPECT_EQ(qt_run_config_set_shots(cfg, 0), QT_ERR_USAGE);
  EXPECT_EQ(qt_run_config_set_threads(cfg, 0), QT_ERR_USAGE);
  EXPECT_EQ(qt_run_config_set_format(cfg, static_cast<qt_format>(7)), QT_ERR_USAGE);

  char* summary = nullptr;
  ASSERT_EQ(qt_cmd_rabi(cfg, 11, 10, &summary), QT_OK);
  ASSERT_NE(summary, nullptr);
  EXPECT_NE(std::string(summary).find("qtoken.noise_fit"), std::string::npos);
  qt_string_free(summary);
  EXPECT_EQ(qt_cmd_rabi(cfg, 3, 10, nullptr), QT_ERR_USAGE);

  ASSERT_EQ(qt_cmd_bank_bench(cfg, QT_SAMPLING_LINEAR_GRID, 0, 4, 4, nullptr), QT_OK);
  const double z[] = {1.0};
  const double phi[] = {0.0};
  ASSERT_EQ(qt_cmd_attack_scan(cfg, z, 1, phi, 1, 3, 4, nullptr), QT_OK);
  EXPECT_EQ(qt_cmd_attack_scan(cfg, nullptr, 0, phi, 1, 3, 4, nullptr), QT_ERR_USAGE);

  qt_forge_request req{nullptr, 0, 300, 0, 0};
  ASSERT_EQ(qt_cmd_forge_bench(cfg, &req, nullptr), QT_OK);
  const int ms[] = {1, 4};
  ASSERT_EQ(qt_cmd_security(cfg, 0.999, ms, 2, &req, nullptr, &summary), QT_OK);
  EXPECT_NE(std::string(summary).find("qtoken.security_report"), std::string::npos);
  qt_string_free(summary);
  EXPECT_EQ(qt_cmd_security(cfg, 1.0, ms, 2, &req, nullptr, nullptr), QT_ERR_USAGE);

  const std::string records = (dir / "rabi_records.csv").string();
  ASSERT_EQ(qt_cmd_fit(cfg, records.c_str(), QT_FIT_NOISE_MODEL, nullptr), QT_OK);
  EXPECT_EQ(qt_cmd_fit(cfg, (dir / "nb_samples.csv").c_str(), QT_FIT_GAUSSIAN, nullptr), QT_ERR_DATA);
  qt_run_config_free(cfg);
  fs::remove_all(dir);
}

}  // namespace
