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

#ifndef QTOKEN_SECURITY_HPP
#define QTOKEN_SECURITY_HPP

// Distribution fits for bank and forged readings, acceptance probabilities
// above a threshold, threshold selection and coin-level scaling.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtoken/error.hpp"

namespace qtoken {

struct GaussianFit {
  double mean;
  double std;
};

struct SkewNormalFit {
  double location;
  double scale;
  double shape;

  double mean() const;
  double stddev() const;
};

/// Maximum-likelihood Gaussian (sample moments, 1/n variance). Throws
/// PreconditionError with fewer than `min_samples` samples and FitError
/// (degenerate) on zero variance.
GaussianFit fit_gaussian(std::span<const double> samples, std::size_t min_samples = 10);

/// Method-of-moments estimate of (location, scale, shape); the sample
/// skewness is clipped to the attainable range.
SkewNormalFit skew_normal_moments(std::span<const double> samples);

/// Thrown when the likelihood search fails; carries the moment estimate.
class SkewFitError : public FitError {
 public:
  SkewFitError(const std::string& what, const SkewNormalFit& moments) : FitError(what), moments_(moments) {}
  const SkewNormalFit& moment_estimate() const noexcept { return moments_; }

 private:
  SkewNormalFit moments_;
};

/// Moments start, then Nelder-Mead on the log-likelihood over
/// (location, log scale, shape). Needs >= 50 samples with nonzero variance.
SkewNormalFit fit_skew_normal(std::span<const double> samples);

double normal_cdf(double x);
double skew_normal_pdf(const SkewNormalFit& fit, double x);

/// P(X > n_T) = 1 - CDF(n_T). Gaussian through erfc.
double acceptance_probability(const GaussianFit& fit, double n_threshold);
/// Skew-normal through adaptive Gauss-Kronrod quadrature of the density.
double acceptance_probability(const SkewNormalFit& fit, double n_threshold);

/// log10 of the Gaussian acceptance probability, accurate deep in the tail.
double log10_acceptance_probability(const GaussianFit& fit, double n_threshold);

/// Probability mass of the skew-normal outside [0, 1].
double skew_normal_mass_outside_unit(const SkewNormalFit& fit);

/// Largest n_T with acceptance_probability(bank, n_T)^M >= target, by
/// bisection to 1e-10. Throws PreconditionError when target is not in (0, 1)
/// or M < 1.
double choose_threshold(const GaussianFit& bank_fit, double target_p_b, int tokens);

struct SweepRow {
  int tokens;
  double n_threshold;
  double p_b_token;
  double p_f_token;
  double p_b_coin;
  double p_f_coin;
  double log10_p_b_coin;
  double log10_p_f_coin;
};

/// Per coin size M: threshold for p_b^M >= target, then coin-level
/// probabilities. Coin probabilities are built from log10 values so they
/// stay representable far below the double range.
std::vector<SweepRow> security_sweep(const GaussianFit& bank_fit, const SkewNormalFit& forger_fit,
                                     double target_p_b, std::span<const int> tokens_list);

inline constexpr int kReportSchemaVersion = 1;

struct SecurityReport {
  std::string profile;
  GaussianFit bank_fit;
  SkewNormalFit forger_fit;
  double target_p_b;
  double n_threshold;
  double p_b;
  double p_f;
  std::vector<SweepRow> per_m;
  double forger_mass_outside_unit;

  /// Fills the single-token threshold, probabilities and sweep, then checks
  /// the invariants: probabilities in [0, 1], p_b >= p_f at every reported
  /// threshold when the bank mean exceeds the forger mean, and
  /// p^M consistency. Throws DataError on violation.
  static SecurityReport build(std::string profile, const GaussianFit& bank_fit, const SkewNormalFit& forger_fit,
                              double target_p_b, std::span<const int> tokens_list);
};

nlohmann::json report_to_json(const SecurityReport& report);

}  // namespace qtoken

#endif  // QTOKEN_SECURITY_HPP
