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

#include <gtest/gtest.h>

#include "qtoken/bloch.hpp"
#include "qtoken/error.hpp"

namespace qtoken {
namespace {

BlochAngles random_angles(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> theta(0.0, kPi);
  std::uniform_real_distribution<double> phi(0.0, kTwoPi);
  return BlochAngles(theta(rng), phi(rng));
}

TEST(BlochAngles, WrapsPhiAndRejectsTheta) {
  BlochAngles a(1.0, -0.5);
  EXPECT_NEAR(a.phi(), kTwoPi - 0.5, 1e-15);
  EXPECT_NEAR(BlochAngles(0.3, 7.0).phi(), 7.0 - kTwoPi, 1e-15);
  EXPECT_EQ(BlochAngles(0.3, kTwoPi).phi(), 0.0);
  EXPECT_THROW(BlochAngles(-1e-3, 0.0), PreconditionError);
  EXPECT_THROW(BlochAngles(kPi + 1e-6, 0.0), PreconditionError);
  EXPECT_THROW(BlochAngles(NAN, 0.0), PreconditionError);
  EXPECT_THROW(BlochAngles(0.1, INFINITY), PreconditionError);
  EXPECT_NEAR(BlochAngles::from_z(0.5, 0.0).theta(), kPi / 3.0, 1e-15);
  EXPECT_THROW(BlochAngles::from_z(1.5, 0.0), PreconditionError);
}

TEST(ObservableModel, ValidatesAndDerivesContrast) {
  EXPECT_THROW(ObservableModel(0.0, 0.0), PreconditionError);
  EXPECT_THROW(ObservableModel(-1.0, 10.0), PreconditionError);
  EXPECT_THROW(ObservableModel(1.0, 10.0, -0.1), PreconditionError);
  EXPECT_NEAR(ObservableModel(10.0, 90.0).contrast(), 0.8, 1e-15);
  EXPECT_NEAR(ObservableModel(90.0, 10.0).contrast(), -0.8, 1e-15);
  const auto m = ObservableModel::from_contrast(0.843, 0.270);
  EXPECT_NEAR(m.n1(), 92.15, 1e-12);
  EXPECT_NEAR(m.n0(), 7.85, 1e-12);
  EXPECT_NEAR(m.sigma_exp(), 27.0, 1e-12);
  EXPECT_NEAR(m.sigma_exp_norm(), 0.270, 1e-15);
}

TEST(ExpectationN, Examples) {
  const ObservableModel m(0.0, 100.0);
  EXPECT_NEAR(expectation_n(m, BlochAngles(0.0, 0.0)), 0.0, 1e-12);
  EXPECT_NEAR(expectation_n(m, BlochAngles(kPi, 0.0)), 100.0, 1e-12);
  EXPECT_NEAR(expectation_n(m, BlochAngles(kPi / 2, 0.0)), 50.0, 1e-12);
}

TEST(TotalUncertainty, Examples) {
  const ObservableModel m(0.0, 100.0);
  EXPECT_NEAR(total_uncertainty(m, BlochAngles(0.0, 0.0)), 0.0, 1e-12);
  EXPECT_NEAR(total_uncertainty(m, BlochAngles(kPi, 0.0)), 10.0, 1e-12);
  EXPECT_NEAR(total_uncertainty(m, BlochAngles(kPi / 2, 0.0)), std::sqrt(2550.0), 1e-12);
  EXPECT_NEAR(std::sqrt(2550.0), 50.4975, 1e-4);
}

TEST(TotalUncertainty, Decomposition) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const BlochAngles s = random_angles(rng);
    const ObservableModel flat(37.0, 37.0);
    EXPECT_NEAR(projection_variance(flat, s), 0.0, 1e-12);
  }
  const ObservableModel m(12.0, 88.0, 0.0);
  EXPECT_NEAR(std::pow(total_uncertainty(m, BlochAngles(0.0, 0.0)), 2), 12.0, 1e-12);
  EXPECT_NEAR(std::pow(total_uncertainty(m, BlochAngles(kPi, 0.0)), 2), 88.0, 1e-12);
  const ObservableModel noisy(12.0, 88.0, 5.0);
  const BlochAngles s(1.1, 0.3);
  const double expected = projection_variance(noisy, s) + expectation_n(noisy, s) + 25.0;
  EXPECT_NEAR(std::pow(total_uncertainty(noisy, s), 2), expected, 1e-10);
}

TEST(ClosedForms, PhiIndependence) {
  std::mt19937_64 rng(12);
  const ObservableModel m(3.0, 97.0, 4.0);
  for (int i = 0; i < 500; ++i) {
    const BlochAngles s = random_angles(rng);
    const BlochAngles t(s.theta(), std::uniform_real_distribution<double>(0.0, kTwoPi)(rng));
    EXPECT_EQ(expectation_n(m, s), expectation_n(m, t));
    EXPECT_EQ(total_uncertainty(m, s), total_uncertainty(m, t));
  }
}

TEST(AttackerFraction, Examples) {
  const BlochAngles b(0.7, 2.1);
  EXPECT_NEAR(attacker_fraction(0.896, b, b), 0.948, 1e-12);
  EXPECT_NEAR(attacker_fraction(0.37, BlochAngles(kPi / 2, 0.0), BlochAngles(0.0, 0.0)), 0.5, 1e-12);
  EXPECT_NEAR(attacker_fraction(1.0, b, BlochAngles(kPi - 0.7, 2.1 + kPi)), 0.0, 1e-12);
  EXPECT_EQ(attacker_fraction(0.0, b, BlochAngles(0.2, 0.1)), 0.5);
}

TEST(AttackerFraction, SymmetricAndMatchesStateVectorOracle) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const BlochAngles b = random_angles(rng);
    const BlochAngles a = random_angles(rng);
    const double n0 = 100.0 * unit(rng);
    const double n1 = 100.0 * unit(rng) + 1.0;
    const ObservableModel m(n0, n1);
    const double c = m.contrast();
    EXPECT_NEAR(attacker_fraction(c, b, a), attacker_fraction(c, a, b), 1e-15);
    const StateVector2 psi = compose_final_state(b, a);
    EXPECT_NEAR(psi.norm_squared(), 1.0, 1e-12);
    const double n_from_state = (1.0 + c * (std::norm(psi.amp0) - std::norm(psi.amp1))) / 2.0;
    EXPECT_NEAR(attacker_fraction(c, b, a), n_from_state, 1e-10);
    EXPECT_NEAR(1.0 - attacker_fraction(1.0, b, a), expectation_of(ObservableModel(0.0, 1.0), psi), 1e-10);
  }
}

TEST(StateVector, ExpectationMatchesClosedForm) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 1000; ++i) {
    const BlochAngles s = random_angles(rng);
    const ObservableModel m(7.0, 93.0);
    const StateVector2 psi = state_from_angles(s);
    EXPECT_NEAR(psi.norm_squared(), 1.0, 1e-12);
    EXPECT_NEAR(expectation_of(m, psi), expectation_n(m, s), 1e-10);
  }
}

TEST(ComposeFinalState, Examples) {
  const BlochAngles b(1.234, 4.2);
  auto psi = compose_final_state(b, b);
  EXPECT_NEAR(std::abs(psi.amp0), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(psi.amp1), 0.0, 1e-12);
  psi = compose_final_state(BlochAngles(kPi, 0.0), BlochAngles(0.0, 0.0));
  EXPECT_NEAR(std::abs(psi.amp1), 1.0, 1e-12);
  psi = compose_final_state(BlochAngles(kPi / 2, 0.0), BlochAngles(kPi / 2, 0.0));
  EXPECT_NEAR(std::abs(psi.amp0), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(psi.amp1), 0.0, 1e-12);
}

TEST(MeanAttackerFraction, IsOneHalf) {
  EXPECT_NEAR(mean_attacker_fraction(1.0, BlochAngles(0.0, 0.0)), 0.5, 1e-9);
  EXPECT_NEAR(mean_attacker_fraction(0.563, BlochAngles(kPi / 3, 1.1)), 0.5, 1e-9);
  EXPECT_NEAR(mean_attacker_fraction(0.0, BlochAngles(2.0, 5.0)), 0.5, 1e-9);
  std::mt19937_64 rng(15);
  for (int i = 0; i < 20; ++i) {
    const double c = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    EXPECT_NEAR(mean_attacker_fraction(c, random_angles(rng)), 0.5, 1e-9);
  }
}

TEST(ZfInterval, Examples) {
  auto iv = zf_interval(0.5, 0.0);
  ASSERT_TRUE(iv);
  EXPECT_NEAR(iv->lo, 0.5, 1e-12);
  EXPECT_NEAR(iv->hi, 0.5, 1e-12);
  iv = zf_interval(0.0, kPi / 2);
  ASSERT_TRUE(iv);
  EXPECT_NEAR(iv->lo, -1.0, 1e-12);
  EXPECT_NEAR(iv->hi, 1.0, 1e-12);
  EXPECT_FALSE(zf_interval(2.0, 0.0));
  EXPECT_NEAR(zf_discriminant(0.0, kPi / 2), 1.0, 1e-12);
}

TEST(PhiFSolutions, Examples) {
  auto s = phi_f_solutions(0.5, kPi / 2, 0.0, kPi / 2);
  ASSERT_TRUE(s);
  EXPECT_NEAR(s->plus, kPi / 3, 1e-12);
  EXPECT_NEAR(s->minus, 5 * kPi / 3, 1e-12);
  EXPECT_NEAR(attacker_fraction(1.0, BlochAngles(kPi / 2, s->plus), BlochAngles(kPi / 2, 0.0)), 0.75, 1e-12);
  s = phi_f_solutions(0.0, kPi / 2, 0.0, kPi / 2);
  ASSERT_TRUE(s);
  EXPECT_NEAR(s->plus, kPi / 2, 1e-12);
  EXPECT_NEAR(s->minus, 3 * kPi / 2, 1e-12);
  EXPECT_FALSE(phi_f_solutions(1.5, kPi / 2, 0.0, kPi / 2));
}

TEST(ZfInterval, InteriorPointsReproduceReading) {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int checked = 0;
  while (checked < 2000) {
    const double alpha = 2.0 * unit(rng) - 1.0;
    const double theta_a = kPi * unit(rng);
    const double phi_a = kTwoPi * unit(rng);
    const auto iv = zf_interval(alpha, theta_a);
    if (!iv || iv->width() < 1e-6 || std::sin(theta_a) < 1e-6) continue;
    const double z_f = iv->lo + (0.05 + 0.9 * unit(rng)) * iv->width();
    const double theta_f = std::acos(z_f);
    const auto s = phi_f_solutions(alpha, theta_a, phi_a, theta_f);
    ASSERT_TRUE(s);
    const BlochAngles axis(theta_a, phi_a);
    const double target = (1.0 + alpha) / 2.0;
    EXPECT_NEAR(attacker_fraction(1.0, BlochAngles(theta_f, s->plus), axis), target, 1e-9);
    EXPECT_NEAR(attacker_fraction(1.0, BlochAngles(theta_f, s->minus), axis), target, 1e-9);
    ++checked;
  }
}

}  // namespace
}  // namespace qtoken
