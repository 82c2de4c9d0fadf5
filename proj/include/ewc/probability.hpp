#pragma once

#include "ewc/core.hpp"

namespace ewc {

/// Below this |phi1 - phi2| the equal-parameter closed form is used.
inline constexpr double kEqualParamThreshold = 1e-8;

/// P(a < Theta <= b) in closed form.
///
/// Requires -pi <= a < b <= pi as plain reals; intervals that wrap through
/// -pi must be split by the caller. b = pi is accepted as the right end of the
/// circle, and the full circle [-pi, pi] is 1 by definition.
double interval_probability(double a, double b, const EwcParams& p);

/// P(-pi < Theta <= theta).
double cdf(CircAngle theta, const EwcParams& p);

}  // namespace ewc
