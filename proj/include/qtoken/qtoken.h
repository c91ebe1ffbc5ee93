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

#ifndef QTOKEN_QTOKEN_H
#define QTOKEN_QTOKEN_H

/*
 * C interface to the qtoken simulator.
 *
 * Every fallible call returns a qt_status. On failure the message is
 * available from qt_last_error() on the same thread until the next call.
 * Objects are opaque handles released with the matching *_free function;
 * passing NULL to a *_free function is a no-op.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(QTOKEN_BUILDING_LIBRARY)
#define QT_API __attribute__((visibility("default")))
#else
#define QT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qt_status {
  QT_OK = 0,
  QT_ERR_RUNTIME = 1,
  QT_ERR_USAGE = 2,
  QT_ERR_DATA = 3
} qt_status;

typedef enum qt_format { QT_FORMAT_CSV = 0, QT_FORMAT_JSON = 1 } qt_format;

typedef enum qt_sampling {
  QT_SAMPLING_UNIFORM_SPHERE = 0,
  QT_SAMPLING_LINEAR_GRID = 1,
  QT_SAMPLING_EQUATOR_WEIGHTED = 2
} qt_sampling;

typedef enum qt_fit_kind {
  QT_FIT_GAUSSIAN = 0,
  QT_FIT_SKEW_NORMAL = 1,
  QT_FIT_NOISE_MODEL = 2
} qt_fit_kind;

typedef enum qt_forge_branch {
  QT_BRANCH_POLE_INVERSION = 0,
  QT_BRANCH_INTERVAL_PLUS = 1,
  QT_BRANCH_INTERVAL_MINUS = 2,
  QT_BRANCH_RANDOM_FALLBACK = 3
} qt_forge_branch;

typedef struct qt_profile qt_profile;
typedef struct qt_run_config qt_run_config;
typedef struct qt_coin qt_coin;

typedef struct qt_angles {
  double theta;
  double phi;
} qt_angles;

typedef struct qt_record {
  int64_t shots;
  double total_counts;
  double n_zero_fraction;
  double sigma_est;
} qt_record;

typedef struct qt_forge_outcome {
  double n_a_measured;
  double alpha;
  qt_forge_branch branch;
  qt_angles forged;
} qt_forge_outcome;

QT_API const char* qt_version(void);
QT_API const char* qt_last_error(void);
QT_API uint64_t qt_default_seed(void);

/* Closed-form quantities. */
QT_API qt_status qt_expectation_n(double n0, double n1, double sigma_exp, qt_angles state, double* out);
QT_API qt_status qt_total_uncertainty(double n0, double n1, double sigma_exp, qt_angles state, double* out);
QT_API qt_status qt_attacker_fraction(double c, qt_angles bank, qt_angles attack, double* out);
QT_API qt_status qt_mean_attacker_fraction(double c, qt_angles attack, double* out);

/* Hardware profiles. */
QT_API size_t qt_builtin_profile_count(void);
QT_API const char* qt_builtin_profile_name(size_t index);
QT_API qt_status qt_profile_resolve(const char* reference, qt_profile** out);
QT_API qt_status qt_profile_create(const char* name, double contrast, double sigma_exp_norm, int64_t shots_default,
                                   qt_profile** out);
QT_API void qt_profile_free(qt_profile* profile);
QT_API const char* qt_profile_name(const qt_profile* profile);
QT_API double qt_profile_contrast(const qt_profile* profile);
QT_API double qt_profile_sigma_exp_norm(const qt_profile* profile);
QT_API int64_t qt_profile_shots_default(const qt_profile* profile);

/* Single measurements and forgeries. */
QT_API qt_status qt_simulate_measurement(const qt_profile* profile, qt_angles prep, qt_angles meas, int64_t shots,
                                         uint64_t seed, uint64_t stream, qt_record* out);
QT_API qt_status qt_forge_token(double n_a, qt_angles attack_axis, double c, uint64_t seed, uint64_t stream,
                                qt_forge_outcome* out);

/* Coins. A threshold policy is attached at issue time; k = 0 means every
 * token must pass. */
QT_API qt_status qt_coin_issue(const char* coin_id, const qt_profile* profile, size_t tokens, double n_threshold,
                               size_t k_required, uint64_t seed, qt_coin** out);
QT_API void qt_coin_free(qt_coin* coin);
QT_API size_t qt_coin_size(const qt_coin* coin);
QT_API qt_status qt_coin_save(const qt_coin* coin, const char* path, int reveal_secrets);
QT_API qt_status qt_coin_load(const char* path, qt_coin** out);
QT_API qt_status qt_coin_authenticate(const qt_coin* coin, const qt_profile* profile, int64_t shots, uint64_t seed,
                                      int* accepted, double* per_token, size_t per_token_len);

/* Run configuration shared by the commands. */
QT_API qt_status qt_run_config_create(qt_run_config** out);
QT_API void qt_run_config_free(qt_run_config* config);
QT_API qt_status qt_run_config_set_profile(qt_run_config* config, const char* reference);
QT_API qt_status qt_run_config_set_seed(qt_run_config* config, uint64_t seed);
QT_API qt_status qt_run_config_set_shots(qt_run_config* config, int64_t shots);
QT_API qt_status qt_run_config_set_out_dir(qt_run_config* config, const char* path);
QT_API qt_status qt_run_config_set_format(qt_run_config* config, qt_format format);
QT_API qt_status qt_run_config_set_svg(qt_run_config* config, int enabled);
QT_API qt_status qt_run_config_set_threads(qt_run_config* config, int threads);

typedef struct qt_forge_request {
  const qt_angles* attack_axes; /* NULL selects the single axis z_a = +1 */
  size_t attack_axis_count;
  size_t tokens;
  int fallback_only;
  int noiseless_attack;
} qt_forge_request;

/* Commands. On success the JSON summary document is written to *summary_json
 * when it is non-NULL; release it with qt_string_free. */
QT_API qt_status qt_cmd_rabi(const qt_run_config* config, int theta_points, int repetitions, char** summary_json);
QT_API qt_status qt_cmd_bank_bench(const qt_run_config* config, qt_sampling strategy, size_t count,
                                   size_t theta_points, size_t phi_points, char** summary_json);
QT_API qt_status qt_cmd_attack_scan(const qt_run_config* config, const double* z_a, size_t z_a_count,
                                    const double* phi_a, size_t phi_a_count, size_t bank_z_points,
                                    size_t bank_phi_points, char** summary_json);
QT_API qt_status qt_cmd_forge_bench(const qt_run_config* config, const qt_forge_request* request, char** summary_json);
QT_API qt_status qt_cmd_security(const qt_run_config* config, double target_p_b, const int* tokens_list,
                                 size_t tokens_count, const qt_forge_request* forge, const char* from_dir,
                                 char** summary_json);
QT_API qt_status qt_cmd_fit(const qt_run_config* config, const char* input_path, qt_fit_kind kind,
                            char** summary_json);
QT_API void qt_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* QTOKEN_QTOKEN_H */
