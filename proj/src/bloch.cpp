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

#include "qtoken/bloch.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "qtoken/error.hpp"

namespace qtoken {

using namespace std::complex_literals;

double wrap_phi(double phi) noexcept {
  double wrapped = std::fmod(phi, kTwoPi);
  if (wrapped < 0.0) wrapped += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2pi.
  if (wrapped >= kTwoPi) wrapped = 0.0;
  return wrapped;
}

BlochAngles::BlochAngles(double theta, double phi) {
  if (!std::isfinite(theta) || !std::isfinite(phi)) {
    throw PreconditionError("Bloch angles must be finite");
  }
  if (theta < 0.0 || theta > kPi) {
    throw PreconditionError("theta = " + std::to_string(theta) + " is outside [0, pi]");
  }
  theta_ = theta;
  phi_ = wrap_phi(phi);
}

BlochAngles BlochAngles::from_z(double z, double phi) {
  if (!(z >= -1.0 && z <= 1.0)) {
    throw PreconditionError("z = " + std::to_string(z) + " is outside [-1, 1]");
  }
  return BlochAngles(std::acos(z), phi);
}

double BlochAngles::z() const noexcept { return std::cos(theta_); }

ObservableModel::ObservableModel(double n0, double n1, double sigma_exp)
    : n0_(n0), n1_(n1), sigma_exp_(sigma_exp) {
  if (!(n0 >= 0.0) || !(n1 >= 0.0) || !(sigma_exp >= 0.0) || !std::isfinite(n0 + n1 + sigma_exp)) {
    throw PreconditionError("observable eigenvalues and sigma_exp must be finite and non-negative");
  }
  if (!(n0 + n1 > 0.0)) {
    throw PreconditionError("observable requires n0 + n1 > 0");
  }
}

ObservableModel ObservableModel::from_contrast(double contrast, double sigma_exp_norm, double scale) {
  if (!(contrast >= -1.0 && contrast <= 1.0)) {
    throw PreconditionError("contrast must lie in [-1, 1]");
  }
  if (!(scale > 0.0)) {
    throw PreconditionError("count scale must be positive");
  }
  return ObservableModel(scale * (1.0 - contrast) / 2.0, scale * (1.0 + contrast) / 2.0,
                         sigma_exp_norm * scale);
}

StateVector2 state_from_angles(const BlochAngles& state) {
  const double half = state.theta() / 2.0;
  return {std::cos(half), std::polar(std::sin(half), state.phi())};
}

double expectation_of(const ObservableModel& model, const StateVector2& state) {
  return model.n0() * std::norm(state.amp0) + model.n1() * std::norm(state.amp1);
}

namespace {

struct Populations {
  double p0;  // cos^2(theta/2)
  double p1;  // sin^2(theta/2)
};

Populations populations(const BlochAngles& state) {
  const double c = std::cos(state.theta() / 2.0);
  const double s = std::sin(state.theta() / 2.0);
  return {c * c, s * s};
}

}  // namespace

double expectation_n(const ObservableModel& model, const BlochAngles& state) {
  const auto [p0, p1] = populations(state);
  return model.n0() * p0 + model.n1() * p1;
}

double projection_variance(const ObservableModel& model, const BlochAngles& state) {
  const auto [p0, p1] = populations(state);
  // <N^2> - <N>^2 = p0 p1 (n1 - n0)^2, written in a form that is exactly
  // zero at the poles and whenever n0 == n1.
  const double gap = model.n1() - model.n0();
  return p0 * p1 * gap * gap;
}

double total_uncertainty(const ObservableModel& model, const BlochAngles& state) {
  const double shot = expectation_n(model, state);
  const double exp = model.sigma_exp();
  return std::sqrt(projection_variance(model, state) + shot + exp * exp);
}

double attacker_fraction(double c, const BlochAngles& bank, const BlochAngles& attack) {
  const double overlap = std::cos(attack.theta()) * std::cos(bank.theta()) +
                         std::sin(attack.theta()) * std::sin(bank.theta()) *
                             std::cos(bank.phi() - attack.phi());
  return (1.0 + c * overlap) / 2.0;
}

double mean_attacker_fraction(double c, const BlochAngles& attack) {
  using Rule = boost::math::quadrature::gauss<double, 30>;
  const double ct = std::cos(attack.theta());
  const double st = std::sin(attack.theta());
  // Integrand over the sphere with measure sin(tb)/2 dtb dpb/(2pi). The
  // arguments are evaluated raw rather than through BlochAngles to stay on
  // the quadrature nodes exactly.
  auto over_phi = [&](double tb) {
    const double cb = std::cos(tb);
    const double sb = std::sin(tb);
    auto integrand = [&](double pb) {
      return (1.0 + c * (ct * cb + st * sb * std::cos(pb - attack.phi()))) / 2.0;
    };
    return Rule::integrate(integrand, 0.0, kTwoPi) / kTwoPi * sb / 2.0;
  };
  return Rule::integrate(over_phi, 0.0, kPi);
}

StateVector2 compose_final_state(const BlochAngles& bank, const BlochAngles& unrotate) {
  using Complex = std::complex<double>;
  using Matrix = std::array<std::array<Complex, 2>, 2>;

  const double cb = std::cos(bank.theta() / 2.0);
  const double sb = std::sin(bank.theta() / 2.0);
  const double ca = std::cos(unrotate.theta() / 2.0);
  const double sa = std::sin(unrotate.theta() / 2.0);
  const Complex eb = std::polar(1.0, bank.phi());
  const Complex ea = std::polar(1.0, unrotate.phi());

  const Matrix rotate{{{cb, -1i * sb * std::conj(eb)}, {-1i * sb * eb, cb}}};
  const Matrix unrot{{{ca, 1i * sa * std::conj(ea)}, {1i * sa * ea, ca}}};

  Matrix product{};
  for (int r = 0; r < 2; ++r) {
    for (int col = 0; col < 2; ++col) {
      product[r][col] = unrot[r][0] * rotate[0][col] + unrot[r][1] * rotate[1][col];
    }
  }
  // Apply to |0>: first column.
  return {product[0][0], product[1][0]};
}

double zf_discriminant(double alpha, double theta_a) {
  // Factored form of a^2 cos^2 t - a^2 - cos(2t)/2 + 1/2; avoids cancellation near the tangent points.
  const double sa = std::sin(theta_a);
  return sa * sa * (1.0 - alpha) * (1.0 + alpha);
}

std::optional<ZInterval> zf_interval(double alpha, double theta_a) {
  if (!std::isfinite(alpha)) return std::nullopt;
  const double delta = zf_discriminant(alpha, theta_a);
  if (delta < 0.0) return std::nullopt;
  const double root = std::sqrt(delta);
  const double centre = alpha * std::cos(theta_a);
  ZInterval interval{std::max(centre - root, -1.0), std::min(centre + root, 1.0)};
  if (interval.lo > interval.hi) return std::nullopt;
  return interval;
}

double phi_f_argument(double alpha, double theta_a, double theta_f) {
  return (alpha - std::cos(theta_a) * std::cos(theta_f)) / (std::sin(theta_a) * std::sin(theta_f));
}

std::optional<PhiSolutions> phi_f_solutions(double alpha, double theta_a, double phi_a, double theta_f) {
  const double arg = phi_f_argument(alpha, theta_a, theta_f);
  if (!std::isfinite(arg) || std::abs(arg) > 1.0 + kArccosSlack) return std::nullopt;
  const double offset = std::acos(std::clamp(arg, -1.0, 1.0));
  return PhiSolutions{wrap_phi(phi_a + offset), wrap_phi(phi_a - offset)};
}

}  // namespace qtoken
