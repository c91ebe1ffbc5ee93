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

#ifndef QTOKEN_BLOCH_HPP
#define QTOKEN_BLOCH_HPP

// Closed-form single-qubit math for ensemble tokens: expectation values of the
// counting observable, its uncertainty budget, the overlap fraction read along
// an arbitrary axis, and the geometry of states consistent with one reading.
// Everything here is deterministic and free of side effects.

#include <complex>
#include <numbers>
#include <optional>

namespace qtoken {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Tolerance applied to arccos arguments that should lie in [-1, 1].
inline constexpr double kArccosSlack = 1e-9;

/// A pure state on the Bloch sphere. theta in [0, pi], phi in [0, 2pi).
class BlochAngles {
 public:
  BlochAngles() = default;
  /// Wraps phi into [0, 2pi). Throws PreconditionError if theta is outside
  /// [0, pi] or either angle is not finite.
  BlochAngles(double theta, double phi);

  /// Builds angles from z = cos(theta); z must lie in [-1, 1].
  static BlochAngles from_z(double z, double phi);

  double theta() const noexcept { return theta_; }
  double phi() const noexcept { return phi_; }
  double z() const noexcept;

  friend bool operator==(const BlochAngles&, const BlochAngles&) = default;

 private:
  double theta_ = 0.0;
  double phi_ = 0.0;
};

/// Wraps an angle into [0, 2pi).
double wrap_phi(double phi) noexcept;

/// Diagonal counting observable diag(n0, n1) plus additive experimental noise.
class ObservableModel {
 public:
  /// Throws PreconditionError unless n0, n1, sigma_exp >= 0 and n0 + n1 > 0.
  ObservableModel(double n0, double n1, double sigma_exp = 0.0);

  /// Builds a model with n0 + n1 = scale from a normalized contrast and a
  /// normalized noise sigma_exp / (n0 + n1).
  static ObservableModel from_contrast(double contrast, double sigma_exp_norm, double scale = 100.0);

  double n0() const noexcept { return n0_; }
  double n1() const noexcept { return n1_; }
  double sigma_exp() const noexcept { return sigma_exp_; }
  double scale() const noexcept { return n0_ + n1_; }
  /// (n1 - n0) / (n0 + n1), in [-1, 1].
  double contrast() const noexcept { return (n1_ - n0_) / (n0_ + n1_); }
  double sigma_exp_norm() const noexcept { return sigma_exp_ / scale(); }

  friend bool operator==(const ObservableModel&, const ObservableModel&) = default;

 private:
  double n0_;
  double n1_;
  double sigma_exp_;
};

/// Two complex amplitudes of a single-qubit pure state.
struct StateVector2 {
  std::complex<double> amp0;
  std::complex<double> amp1;

  double norm_squared() const noexcept { return std::norm(amp0) + std::norm(amp1); }
};

/// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
StateVector2 state_from_angles(const BlochAngles& state);

/// <psi| diag(n0, n1) |psi> for an explicit state vector.
double expectation_of(const ObservableModel& model, const StateVector2& state);

/// <N> = n0 cos^2(theta/2) + n1 sin^2(theta/2).
double expectation_n(const ObservableModel& model, const BlochAngles& state);

/// Quantum projection variance <N^2> - <N>^2.
double projection_variance(const ObservableModel& model, const BlochAngles& state);

/// Total uncertainty sigma_N: projection noise, shot noise (<N>) and the
/// experimental term added in quadrature.
double total_uncertainty(const ObservableModel& model, const BlochAngles& state);

/// Fraction of the ensemble read in |0> when a state prepared at `bank` is
/// unrotated along `attack` and measured with contrast c:
///   (1 + c [cos ta cos tb + sin ta sin tb cos(pb - pa)]) / 2.
/// The formula is symmetric in its two angle arguments.
double attacker_fraction(double c, const BlochAngles& bank, const BlochAngles& attack);

/// attacker_fraction averaged over bank states with the uniform spherical
/// measure, by a fixed product Gauss-Legendre rule. Equals 1/2 for every
/// (c, attack) to rounding.
double mean_attacker_fraction(double c, const BlochAngles& attack);

/// R^{-1}(unrotate) R(bank) |0>, using the explicit rotation matrices
///   R(t, p)      = [[cos t/2, -i sin t/2 e^{-ip}], [-i sin t/2 e^{ip}, cos t/2]]
///   R^{-1}(t, p) = [[cos t/2,  i sin t/2 e^{-ip}], [ i sin t/2 e^{ip}, cos t/2]].
/// The global phase is left as produced by the product.
StateVector2 compose_final_state(const BlochAngles& bank, const BlochAngles& unrotate);

/// Closed interval [lo, hi] of cos(theta_f) values for which a forged state
/// can reproduce a given reading.
struct ZInterval {
  double lo;
  double hi;
  double width() const noexcept { return hi - lo; }
};

/// Admissible z_f for alpha = (2 n_a - 1) / c measured along polar angle
/// theta_a. Empty when the discriminant is negative or the clipped interval
/// is inverted.
std::optional<ZInterval> zf_interval(double alpha, double theta_a);

/// Discriminant of the z_f quadratic:
///   alpha^2 cos^2 ta - alpha^2 - cos(2 ta)/2 + 1/2.
double zf_discriminant(double alpha, double theta_a);

/// The arccos argument (alpha - cos ta cos tf) / (sin ta sin tf) of the
/// azimuthal solution. Requires sin ta != 0 and sin tf != 0.
double phi_f_argument(double alpha, double theta_a, double theta_f);

struct PhiSolutions {
  double plus;
  double minus;
};

/// phi_a +/- arccos(argument), each wrapped into [0, 2pi). Returns nullopt
/// when |argument| > 1 + kArccosSlack. Callers handle poles themselves.
std::optional<PhiSolutions> phi_f_solutions(double alpha, double theta_a, double phi_a, double theta_f);

}  // namespace qtoken

#endif  // QTOKEN_BLOCH_HPP
