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
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "qtoken/error.hpp"
#include "qtoken/security.hpp"

namespace qtoken {
namespace {

std::vector<double> gaussian_samples(double mean, double sd, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(mean, sd);
  std::vector<double> out(n);
  for (auto& x : out) x = dist(rng);
  return out;
}

std::vector<double> skew_samples(const SkewNormalFit& f, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  const double delta = f.shape / std::sqrt(1.0 + f.shape * f.shape);
  std::vector<double> out(n);
  for (auto& x : out) {
    const double u0 = std::abs(z(rng));
    const double u1 = z(rng);
    x = f.location + f.scale * (delta * u0 + std::sqrt(1.0 - delta * delta) * u1);
  }
  return out;
}

TEST(FitGaussian, RoundTrip) {
  const auto s = gaussian_samples(0.92, 0.01, 100000, 1);
  const GaussianFit f = fit_gaussian(s);
  EXPECT_GE(f.mean, 0.9195);
  EXPECT_LE(f.mean, 0.9205);
  EXPECT_GE(f.std, 0.0099);
  EXPECT_LE(f.std, 0.0101);
}

TEST(FitGaussian, EdgeCases) {
  const std::vector<double> constant(20, 0.5);
  EXPECT_THROW(fit_gaussian(constant), FitError);
  const std::vector<double> two{0.9, 1.0};
  EXPECT_NEAR(fit_gaussian(two, 2).mean, 0.95, 1e-15);
  EXPECT_THROW(fit_gaussian(two), PreconditionError);
}

TEST(FitSkewNormal, RecoversNegativeShape) {
  const SkewNormalFit truth{0.8, 0.15, -4.0};
  const SkewNormalFit f = fit_skew_normal(skew_samples(truth, 100000, 2));
  EXPECT_GE(f.shape, -5.0);
  EXPECT_LE(f.shape, -3.0);
  EXPECT_NEAR(f.location, 0.8, 0.01);
  EXPECT_NEAR(f.scale, 0.15, 0.01);
}

TEST(FitSkewNormal, SymmetricDataGivesSmallShape) {
  const SkewNormalFit f = fit_skew_normal(gaussian_samples(0.5, 0.1, 100000, 3));
  EXPECT_LT(std::abs(f.shape), 0.5);
}

TEST(FitSkewNormal, Preconditions) {
  EXPECT_THROW(fit_skew_normal(gaussian_samples(0.5, 0.1, 49, 4)), PreconditionError);
  const std::vector<double> constant(100, 0.3);
  EXPECT_THROW(fit_skew_normal(constant), FitError);
}

TEST(SkewNormal, MomentsMatchClosedForm) {
  const SkewNormalFit f{0.2, 0.5, 3.0};
  const auto s = skew_samples(f, 200000, 5);
  double mean = 0.0;
  for (double x : s) mean += x;
  mean /= s.size();
  EXPECT_NEAR(mean, f.mean(), 0.005);
  const SkewNormalFit m = skew_normal_moments(s);
  EXPECT_NEAR(m.mean(), f.mean(), 1e-3);
  EXPECT_NEAR(m.stddev(), f.stddev(), 5e-3);
}

TEST(SkewNormal, DensityIntegratesToOne) {
  for (const SkewNormalFit f : {SkewNormalFit{0.0, 1.0, 0.0}, SkewNormalFit{0.9, 0.4, -25.0}, SkewNormalFit{0.3, 0.05, 8.0}}) {
    auto pdf = [&](double x) { return skew_normal_pdf(f, x); };
    const double total = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        pdf, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 15, 1e-12);
    EXPECT_NEAR(total, 1.0, 1e-6);
    EXPECT_NEAR(acceptance_probability(f, -INFINITY), 1.0, 0.0);
    EXPECT_NEAR(acceptance_probability(f, f.location - 50 * f.scale), 1.0, 1e-9);
  }
}

TEST(AcceptanceProbability, GaussianExamples) {
  EXPECT_NEAR(acceptance_probability(GaussianFit{0.92, 0.01}, 0.9), 0.9772498680518208, 1e-12);
  EXPECT_EQ(acceptance_probability(GaussianFit{0.92, 0.01}, -INFINITY), 1.0);
  EXPECT_EQ(acceptance_probability(GaussianFit{0.92, 0.01}, INFINITY), 0.0);
}

TEST(AcceptanceProbability, ShapeZeroMatchesGaussian) {
  const GaussianFit g{0.61, 0.22};
  const SkewNormalFit s{0.61, 0.22, 0.0};
  for (int i = 0; i < 100; ++i) {
    const double t = -0.5 + 2.0 * i / 99.0;
    EXPECT_NEAR(acceptance_probability(s, t), acceptance_probability(g, t), 1e-9);
  }
}

TEST(AcceptanceProbability, MonotoneInThreshold) {
  const GaussianFit g{0.92, 0.03};
  const SkewNormalFit s{0.95, 0.41, -24.0};
  double last_g = 1.0, last_s = 1.0;
  for (int i = 0; i <= 500; ++i) {
    const double t = -0.2 + 1.4 * i / 500.0;
    const double pg = acceptance_probability(g, t);
    const double ps = acceptance_probability(s, t);
    EXPECT_LE(pg, last_g + 1e-15);
    EXPECT_LE(ps, last_s + 1e-12);
    EXPECT_GE(ps, 0.0);
    last_g = pg;
    last_s = ps;
  }
}

TEST(AcceptanceProbability, Log10TailIsAccurate) {
  const GaussianFit g{0.0, 1.0};
  for (double t : {-3.0, 0.0, 2.0, 5.0, 10.0}) {
    EXPECT_NEAR(log10_acceptance_probability(g, t), std::log10(acceptance_probability(g, t)), 1e-9);
  }
  EXPECT_TRUE(std::isfinite(log10_acceptance_probability(g, 60.0)));
  EXPECT_LT(log10_acceptance_probability(g, 60.0), -700.0);
}

TEST(ChooseThreshold, Examples) {
  const GaussianFit g{0.9215, 0.02};
  const double t1 = choose_threshold(g, 0.999, 1);
  EXPECT_NEAR(t1, 0.9215 - 3.090232306167813 * 0.02, 1e-9);
  const double t2 = choose_threshold(g, 0.999, 2);
  EXPECT_LT(t2, t1);
  EXPECT_NEAR(choose_threshold(g, 0.5, 1), 0.9215, 1e-9);
  EXPECT_THROW(choose_threshold(g, 1.0, 1), PreconditionError);
  EXPECT_THROW(choose_threshold(g, 0.0, 1), PreconditionError);
  EXPECT_THROW(choose_threshold(g, 0.9, 0), PreconditionError);
}

TEST(ChooseThreshold, IsTheLargestAdmissibleThreshold) {
  const GaussianFit g{0.85, 0.04};
  for (int m : {1, 3, 10, 49}) {
    const double t = choose_threshold(g, 0.999, m);
    EXPECT_GE(std::pow(acceptance_probability(g, t), m), 0.999 - 1e-12);
    EXPECT_LT(std::pow(acceptance_probability(g, t + 1e-8), m), 0.999);
  }
}

TEST(SecuritySweep, CoinProbabilitiesAndMonotonicity) {
  const GaussianFit bank{0.921, 0.027};
  const SkewNormalFit forger{0.952, 0.415, -24.4};
  const std::vector<int> ms{1, 4, 9, 16, 25, 36, 49};
  const auto rows = security_sweep(bank, forger, 0.999, ms);
  ASSERT_EQ(rows.size(), ms.size());
  double last = 1.0;
  for (const auto& row : rows) {
    EXPECT_NEAR(row.p_b_coin, std::pow(row.p_b_token, row.tokens), 1e-12);
    EXPECT_GE(row.p_b_coin, 0.999 - 1e-12);
    const double direct = std::pow(row.p_f_token, row.tokens);
    EXPECT_NEAR(row.p_f_coin / direct, 1.0, 1e-9);
    EXPECT_NEAR(std::pow(10.0, row.log10_p_f_coin) / direct, 1.0, 1e-9);
    EXPECT_LE(row.p_f_coin, last);
    last = row.p_f_coin;
  }
  EXPECT_NEAR(rows.front().p_f_token, 0.22, 0.05);
  EXPECT_LT(rows.back().log10_p_f_coin, -20.0);
}

TEST(SecuritySweep, LogSpaceSurvivesUnderflow) {
  const GaussianFit bank{0.99, 0.001};
  const SkewNormalFit forger{0.5, 0.2, 0.0};
  const std::vector<int> ms{2000};
  const auto rows = security_sweep(bank, forger, 0.999, ms);
  EXPECT_LT(rows[0].log10_p_f_coin, -300.0);
  EXPECT_TRUE(std::isfinite(rows[0].log10_p_f_coin));
}

TEST(SecuritySweep, CoinPowerExample) {
  // A forger density symmetric about the threshold gives p_f = 1/2 there.
  const GaussianFit bank{0.9, 0.01};
  const double t = choose_threshold(bank, 0.999, 2);
  const SkewNormalFit forger{t, 0.1, 0.0};
  const std::vector<int> ms{2};
  EXPECT_NEAR(security_sweep(bank, forger, 0.999, ms)[0].p_f_coin, 0.25, 1e-9);
}

TEST(SecurityReport, BuildAndSerialize) {
  const GaussianFit bank{0.921, 0.027};
  const SkewNormalFit forger{0.952, 0.415, -24.4};
  const std::vector<int> ms{1, 49};
  const SecurityReport r = SecurityReport::build("brisbane", bank, forger, 0.999, ms);
  EXPECT_GE(r.p_b, r.p_f);
  EXPECT_GT(r.forger_mass_outside_unit, 0.0);
  const auto doc = report_to_json(r);
  EXPECT_EQ(doc.at("schema"), "qtoken.security_report");
  EXPECT_EQ(doc.at("schema_version"), kReportSchemaVersion);
  EXPECT_EQ(doc.at("per_M").size(), 2u);
  EXPECT_TRUE(doc.at("p_f").contains("log10"));
  EXPECT_TRUE(doc.at("forger_fit").contains("shape"));
  EXPECT_TRUE(doc.at("forger_fit").contains("scale"));
  EXPECT_THROW(SecurityReport::build("x", bank, forger, 1.0, ms), PreconditionError);
}

}  // namespace
}  // namespace qtoken
