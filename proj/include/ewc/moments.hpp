#pragma once

#include <complex>
#include <optional>

#include "ewc/core.hpp"
#include "ewc/quadrature.hpp"

namespace ewc {

/// Mean resultant lengths below this are treated as E(Z) = 0.
inline constexpr double kUndefinedMeanThreshold = 1e-14;

struct TrigMoment {
  int n;
  std::complex<double> value;
};

struct CircularSummary {
  std::optional<CircAngle> mean_direction;  // empty when E(Z) = 0
  double mean_resultant_length;
  std::optional<double> skewness;           // empty when the mean direction is undefined
};

/// E(Z^n) for n >= 0, by the residue formula.
TrigMoment trig_moment(int n, const EwcParams& p);

/// E(Z) = {(1 - |phi2|^2) phi1 + (1 - |phi1|^2) phi2} / (1 - |phi1 phi2|^2).
std::complex<double> first_moment(const EwcParams& p);

CircularSummary circular_summary(const EwcParams& p);

/// Circular skewness Im E[(Z e^{-i zeta})^2] / (1 - delta)^{3/2} in closed form.
/// Throws UndefinedMeanError when E(Z) = 0. Overflow saturates to +-infinity.
double skewness(const EwcParams& p);

/// The same quantity evaluated from E(Z) and E(Z^2) by its definition.
double skewness_from_moments(const EwcParams& p);

/// Quadrature of e^{i n theta} f(theta); error_bound < 1e-11.
QuadratureResult<std::complex<double>> moment_oracle(int n, const EwcParams& p);

}  // namespace ewc
