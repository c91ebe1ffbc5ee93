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

#include "qtoken/security.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace qtoken {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kLn10 = std::numbers::ln10;
const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

// Upper-tail probability Q(z) = P(Z > z) and its complement.
double upper_tail(double z) { return 0.5 * std::erfc(z / kSqrt2); }

// ln Q(z), accurate where erfc underflows.
double log_upper_tail(double z) {
  if (z < 30.0) return std::log(upper_tail(z));
  const double z2 = z * z;
  return -z2 / 2.0 - std::log(z) - kHalfLog2Pi + std::log1p(-1.0 / z2 + 3.0 / (z2 * z2));
}

// ln Phi(t) = ln Q(-t).
double log_normal_cdf(double t) { return log_upper_tail(-t); }

double sample_mean(std::span<const double> xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

}  // namespace

double SkewNormalFit::mean() const {
  const double delta = shape / std::sqrt(1.0 + shape * shape);
  return location + scale * delta * std::sqrt(2.0 / std::numbers::pi);
}

double SkewNormalFit::stddev() const {
  const double delta = shape / std::sqrt(1.0 + shape * shape);
  return scale * std::sqrt(1.0 - 2.0 * delta * delta / std::numbers::pi);
}

GaussianFit fit_gaussian(std::span<const double> samples, std::size_t min_samples) {
  if (samples.size() < std::max<std::size_t>(min_samples, 1)) {
    throw PreconditionError("Gaussian fit needs at least " + std::to_string(min_samples) + " samples, got " +
                            std::to_string(samples.size()));
  }
  const double mean = sample_mean(samples);
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(samples.size());
  if (!(var > 0.0)) throw FitError("degenerate sample: zero variance");
  return {mean, std::sqrt(var)};
}

SkewNormalFit skew_normal_moments(std::span<const double> samples) {
  const double n = static_cast<double>(samples.size());
  const double mean = sample_mean(samples);
  double m2 = 0.0, m3 = 0.0;
  for (double x : samples) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  if (!(m2 > 1e-24 * mean * mean)) throw FitError("degenerate sample: zero variance");
  // Attainable skewness of the family is |gamma| < 0.9953.
  const double gamma = std::clamp(m3 / std::pow(m2, 1.5), -0.99, 0.99);
  const double b = std::pow(std::abs(gamma), 2.0 / 3.0);
  const double k = std::pow((4.0 - std::numbers::pi) / 2.0, 2.0 / 3.0);
  const double delta = std::copysign(std::sqrt(std::numbers::pi / 2.0 * b / (b + k)), gamma);
  const double shape = delta / std::sqrt(1.0 - delta * delta);
  const double scale = std::sqrt(m2 / (1.0 - 2.0 * delta * delta / std::numbers::pi));
  const double location = mean - scale * delta * std::sqrt(2.0 / std::numbers::pi);
  return {location, scale, shape};
}

namespace {

double skew_negative_log_likelihood(std::span<const double> samples, double location, double log_scale,
                                    double shape) {
  const double scale = std::exp(log_scale);
  double total = 0.0;
  for (double x : samples) {
    const double z = (x - location) / scale;
    total += -z * z / 2.0 + log_normal_cdf(shape * z);
  }
  const double n = static_cast<double>(samples.size());
  return -(total + n * (std::log(2.0) - log_scale - kHalfLog2Pi));
}

using Point = std::array<double, 3>;

struct NelderMeadResult {
  Point best;
  double value;
  bool converged;
};

template <class F>
NelderMeadResult nelder_mead(F&& f, Point start, Point step, int max_iterations, double tolerance) {
  std::array<Point, 4> simplex;
  std::array<double, 4> values;
  simplex[0] = start;
  for (int i = 0; i < 3; ++i) {
    simplex[i + 1] = start;
    simplex[i + 1][i] += step[i];
  }
  for (int i = 0; i < 4; ++i) values[i] = f(simplex[i]);

  auto combine = [](const Point& a, const Point& b, double t) {
    Point out;
    for (int i = 0; i < 3; ++i) out[i] = a[i] + t * (b[i] - a[i]);
    return out;
  };

  for (int iter = 0; iter < max_iterations; ++iter) {
    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
    const int best = order[0], worst = order[3], second = order[2];
    if (std::abs(values[worst] - values[best]) <= tolerance * (1.0 + std::abs(values[best]))) {
      return {simplex[best], values[best], true};
    }
    Point centroid{0.0, 0.0, 0.0};
    for (int i : {order[0], order[1], order[2]}) {
      for (int d = 0; d < 3; ++d) centroid[d] += simplex[i][d] / 3.0;
    }
    const Point reflected = combine(centroid, simplex[worst], -1.0);
    const double fr = f(reflected);
    if (fr < values[best]) {
      const Point expanded = combine(centroid, simplex[worst], -2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = reflected;
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    const Point contracted = combine(centroid, outside ? reflected : simplex[worst], 0.5);
    const double fc = f(contracted);
    if (fc < (outside ? fr : values[worst])) {
      simplex[worst] = contracted;
      values[worst] = fc;
      continue;
    }
    for (int i : {order[1], order[2], order[3]}) {
      simplex[i] = combine(simplex[best], simplex[i], 0.5);
      values[i] = f(simplex[i]);
    }
  }
  const auto it = std::min_element(values.begin(), values.end());
  return {simplex[static_cast<std::size_t>(it - values.begin())], *it, false};
}

}  // namespace

SkewNormalFit fit_skew_normal(std::span<const double> samples) {
  if (samples.size() < 50) {
    throw PreconditionError("skew-normal fit needs at least 50 samples, got " + std::to_string(samples.size()));
  }
  const SkewNormalFit moments = skew_normal_moments(samples);
  auto objective = [&](const Point& p) {
    const double value = skew_negative_log_likelihood(samples, p[0], p[1], p[2]);
    return std::isfinite(value) ? value : std::numeric_limits<double>::max();
  };

  Point start{moments.location, std::log(moments.scale), moments.shape};
  constexpr int kMaxIterations = 20000;
  NelderMeadResult result{start, objective(start), false};
  // Restart from the incumbent until two consecutive searches agree.
  for (int round = 0; round < 4; ++round) {
    const Point step{0.2 * std::exp(result.best[1]), 0.2, std::max(0.5, 0.25 * std::abs(result.best[2]))};
    const double previous = result.value;
    result = nelder_mead(objective, result.best, step, kMaxIterations, 1e-12);
    if (!result.converged) {
      throw SkewFitError("skew-normal likelihood search did not converge", moments);
    }
    if (round > 0 && std::abs(previous - result.value) <= 1e-10 * (1.0 + std::abs(result.value))) break;
  }
  const SkewNormalFit fit{result.best[0], std::exp(result.best[1]), result.best[2]};
  if (!std::isfinite(fit.location) || !(fit.scale > 0.0) || !std::isfinite(fit.shape)) {
    throw SkewFitError("skew-normal likelihood search produced invalid parameters", moments);
  }
  return fit;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double skew_normal_pdf(const SkewNormalFit& fit, double x) {
  const double z = (x - fit.location) / fit.scale;
  return 2.0 / fit.scale * std::exp(-z * z / 2.0 - kHalfLog2Pi) * normal_cdf(fit.shape * z);
}

double acceptance_probability(const GaussianFit& fit, double n_threshold) {
  if (std::isinf(n_threshold)) return n_threshold < 0.0 ? 1.0 : 0.0;
  return upper_tail((n_threshold - fit.mean) / fit.std);
}

double log10_acceptance_probability(const GaussianFit& fit, double n_threshold) {
  if (std::isinf(n_threshold)) {
    return n_threshold < 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  const double z = (n_threshold - fit.mean) / fit.std;
  if (z < 0.0) return std::log1p(-upper_tail(-z)) / kLn10;
  return log_upper_tail(z) / kLn10;
}

namespace {

// Integral of the density over [a, b], split at the location where the
// density can have a sharp shoulder for large |shape|.
constexpr unsigned kMaxDepth = 15;
constexpr double kTolerance = 1e-12;

double skew_normal_mass(const SkewNormalFit& fit, double a, double b) {
  if (!(a < b)) return 0.0;
  using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  auto pdf = [&](double x) { return skew_normal_pdf(fit, x); };
  double error = 0.0;
  if (a < fit.location && fit.location < b) {
    return Rule::integrate(pdf, a, fit.location, kMaxDepth, kTolerance, &error) +
           Rule::integrate(pdf, fit.location, b, kMaxDepth, kTolerance, &error);
  }
  return Rule::integrate(pdf, a, b, kMaxDepth, kTolerance, &error);
}

// Beyond 40 scales from the location the density is below e^-800. On the
// side the shape parameter suppresses, the density falls off like
// exp(-(1 + shape^2) z^2 / 2), so that side is shortened accordingly.
constexpr double kSupportScales = 40.0;

struct Support {
  double lo;
  double hi;
};

Support support_of(const SkewNormalFit& fit) {
  const double short_side = kSupportScales / std::sqrt(1.0 + fit.shape * fit.shape);
  const double below = fit.shape > 0.0 ? short_side : kSupportScales;
  const double above = fit.shape < 0.0 ? short_side : kSupportScales;
  return {fit.location - below * fit.scale, fit.location + above * fit.scale};
}

}  // namespace

double acceptance_probability(const SkewNormalFit& fit, double n_threshold) {
  if (std::isinf(n_threshold)) return n_threshold < 0.0 ? 1.0 : 0.0;
  const auto [lo, hi] = support_of(fit);
  if (n_threshold <= lo) return 1.0;
  return std::clamp(skew_normal_mass(fit, n_threshold, hi), 0.0, 1.0);
}

double skew_normal_mass_outside_unit(const SkewNormalFit& fit) {
  const auto [lo, hi] = support_of(fit);
  return std::clamp(skew_normal_mass(fit, lo, std::min(0.0, hi)) + skew_normal_mass(fit, std::max(1.0, lo), hi),
                    0.0, 1.0);
}

namespace {

// M log10 p_b(n_T), computed from the lower tail so values near 1 keep
// their precision.
double coin_log10_acceptance(const GaussianFit& fit, double n_threshold, int tokens) {
  return static_cast<double>(tokens) * log10_acceptance_probability(fit, n_threshold);
}

}  // namespace

double choose_threshold(const GaussianFit& bank_fit, double target_p_b, int tokens) {
  if (!(target_p_b > 0.0 && target_p_b < 1.0)) {
    throw PreconditionError("target acceptance probability must lie in (0, 1); " + std::to_string(target_p_b) +
                            " is unachievable");
  }
  if (tokens < 1) throw PreconditionError("coin size M must be >= 1");
  if (!(bank_fit.std > 0.0)) throw PreconditionError("bank fit needs a positive std");
  const double log_target = std::log10(target_p_b);
  double lo = bank_fit.mean - 60.0 * bank_fit.std;
  double hi = bank_fit.mean + 60.0 * bank_fit.std;
  if (coin_log10_acceptance(bank_fit, lo, tokens) < log_target) {
    throw PreconditionError("target acceptance probability is unachievable for this bank distribution");
  }
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (coin_log10_acceptance(bank_fit, mid, tokens) >= log_target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

std::vector<SweepRow> security_sweep(const GaussianFit& bank_fit, const SkewNormalFit& forger_fit,
                                     double target_p_b, std::span<const int> tokens_list) {
  if (tokens_list.empty()) throw PreconditionError("coin-size list must not be empty");
  std::vector<SweepRow> rows;
  rows.reserve(tokens_list.size());
  for (int tokens : tokens_list) {
    const double n_t = choose_threshold(bank_fit, target_p_b, tokens);
    SweepRow row{};
    row.tokens = tokens;
    row.n_threshold = n_t;
    row.p_b_token = acceptance_probability(bank_fit, n_t);
    row.p_f_token = acceptance_probability(forger_fit, n_t);
    row.log10_p_b_coin = coin_log10_acceptance(bank_fit, n_t, tokens);
    row.log10_p_f_coin = row.p_f_token > 0.0 ? static_cast<double>(tokens) * std::log10(row.p_f_token)
                                             : -std::numeric_limits<double>::infinity();
    row.p_b_coin = std::pow(10.0, row.log10_p_b_coin);
    row.p_f_coin = std::pow(10.0, row.log10_p_f_coin);
    rows.push_back(row);
  }
  return rows;
}

SecurityReport SecurityReport::build(std::string profile, const GaussianFit& bank_fit,
                                     const SkewNormalFit& forger_fit, double target_p_b,
                                     std::span<const int> tokens_list) {
  SecurityReport report;
  report.profile = std::move(profile);
  report.bank_fit = bank_fit;
  report.forger_fit = forger_fit;
  report.target_p_b = target_p_b;
  report.n_threshold = choose_threshold(bank_fit, target_p_b, 1);
  report.p_b = acceptance_probability(bank_fit, report.n_threshold);
  report.p_f = acceptance_probability(forger_fit, report.n_threshold);
  report.per_m = security_sweep(bank_fit, forger_fit, target_p_b, tokens_list);
  report.forger_mass_outside_unit = skew_normal_mass_outside_unit(forger_fit);

  if (!(forger_fit.scale > 0.0) || !(bank_fit.std > 0.0)) throw DataError("report fits need positive widths");
  const bool bank_ahead = bank_fit.mean > forger_fit.mean();
  auto check_pair = [&](double p_b, double p_f, double n_t) {
    if (!(p_b >= 0.0 && p_b <= 1.0 && p_f >= 0.0 && p_f <= 1.0)) {
      throw DataError("acceptance probabilities must lie in [0, 1]");
    }
    if (bank_ahead && p_b < p_f) {
      throw DataError("p_b < p_f at n_T = " + std::to_string(n_t) + " although the bank mean is higher");
    }
  };
  check_pair(report.p_b, report.p_f, report.n_threshold);
  for (const auto& row : report.per_m) {
    check_pair(row.p_b_token, row.p_f_token, row.n_threshold);
    const double direct = std::pow(row.p_b_token, row.tokens);
    if (std::abs(direct - row.p_b_coin) > 1e-9 * std::max(direct, 1e-300)) {
      throw DataError("p_b^M is inconsistent with the per-token probability");
    }
    if (row.p_b_coin + 1e-12 < target_p_b) throw DataError("threshold does not meet the coin-level target");
  }
  return report;
}

namespace {

nlohmann::json probability_json(double value, double log10_value) {
  auto finite_or_null = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  return {{"value", value}, {"log10", finite_or_null(log10_value)}};
}

double safe_log10(double p) { return p > 0.0 ? std::log10(p) : -std::numeric_limits<double>::infinity(); }

}  // namespace

nlohmann::json report_to_json(const SecurityReport& report) {
  nlohmann::json per_m = nlohmann::json::array();
  for (const auto& row : report.per_m) {
    per_m.push_back({
        {"M", row.tokens},
        {"n_T", row.n_threshold},
        {"p_b", probability_json(row.p_b_token, safe_log10(row.p_b_token))},
        {"p_f", probability_json(row.p_f_token, safe_log10(row.p_f_token))},
        {"p_b_M", probability_json(row.p_b_coin, row.log10_p_b_coin)},
        {"p_f_M", probability_json(row.p_f_coin, row.log10_p_f_coin)},
    });
  }
  return {
      {"schema", "qtoken.security_report"},
      {"schema_version", kReportSchemaVersion},
      {"profile", report.profile},
      {"target_p_b", report.target_p_b},
      {"bank_fit", {{"kind", "gaussian"}, {"mean", report.bank_fit.mean}, {"std", report.bank_fit.std}}},
      {"forger_fit",
       {{"kind", "skew_normal"},
        {"location", report.forger_fit.location},
        {"scale", report.forger_fit.scale},
        {"shape", report.forger_fit.shape},
        {"mean", report.forger_fit.mean()},
        {"std", report.forger_fit.stddev()},
        {"mass_outside_unit", report.forger_mass_outside_unit}}},
      {"n_T", report.n_threshold},
      {"p_b", probability_json(report.p_b, safe_log10(report.p_b))},
      {"p_f", probability_json(report.p_f, safe_log10(report.p_f))},
      {"per_M", per_m},
  };
}

}  // namespace qtoken
